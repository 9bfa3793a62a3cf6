use super::{domain, SpecialError};
use std::f64::consts::PI;

const TINY: f64 = 1e-300;

fn erf_series(z: f64) -> f64 {
    // erf z = 2/√π e^{-z²} Σ 2^n z^{2n+1} / (2n+1)!!
    let z2 = z * z;
    let mut term = z;
    let mut sum = z;
    for n in 1..200 {
        term *= 2.0 * z2 / (2 * n + 1) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    2.0 / PI.sqrt() * (-z2).exp() * sum
}

fn erfc_cf(z: f64) -> f64 {
    // erfc z = e^{-z²}/√π · 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...))))
    let mut f = z;
    let mut c = z;
    let mut d = 0.0;
    for n in 1..5000 {
        let an = n as f64 / 2.0;
        d = z + an * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = z + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = c * d;
        f *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-z * z).exp() / (PI.sqrt() * f)
}

/// The error function.
pub fn erf(z: f64) -> Result<f64, SpecialError> {
    if z.is_nan() {
        return Err(domain("erf", "NaN argument"));
    }
    let a = z.abs();
    let v = if a < 2.0 { erf_series(a) } else { 1.0 - erfc_cf(a) };
    Ok(v.copysign(z))
}

/// The complementary error function `1 - erf(z)`, accurate in the right tail.
pub fn erfc(z: f64) -> Result<f64, SpecialError> {
    if z.is_nan() {
        return Err(domain("erfc", "NaN argument"));
    }
    if z >= 2.0 {
        Ok(erfc_cf(z))
    } else if z > -2.0 {
        Ok(1.0 - erf_series(z.abs()).copysign(z))
    } else {
        Ok(2.0 - erfc_cf(-z))
    }
}
