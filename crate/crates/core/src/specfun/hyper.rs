use super::gamma::{gamma, rgamma};
use super::{domain, SpecialError};

const EPS: f64 = 1e-16;
const MAX_TERMS: usize = 20_000;
const SERIES_LIMIT: f64 = 50.0;

fn is_nonpositive_integer(z: f64) -> bool {
    z <= 0.0 && z == z.floor()
}

fn series(a: f64, b: f64, z: f64) -> Result<f64, SpecialError> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * z / (kf + 1.0);
        sum += term;
        if term == 0.0 || term.abs() < EPS * sum.abs() {
            return Ok(sum);
        }
    }
    Err(SpecialError::NoConvergence { func: "kummer_1f1" })
}

/// Leading large-`z` expansion of `e^{-z} M(a,b,z)`; the recessive
/// `(-z)^{-a}` part is below `e^{-50}` relative and dropped.
fn asymptotic_scaled(a: f64, b: f64, z: f64) -> Result<f64, SpecialError> {
    let pref = gamma(b)? * rgamma(a) * z.powf(a - b);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        term *= (b - a + kf - 1.0) * (kf - a) / (kf * z);
        if term.abs() > last {
            break;
        }
        sum += term;
        last = term.abs();
        if term.abs() < EPS * sum.abs() {
            break;
        }
    }
    Ok(pref * sum)
}

/// `e^{-z} M(a, b, z)` for `z >= 0`, finite for arbitrarily large `z`.
pub fn kummer_1f1_scaled(a: f64, b: f64, z: f64) -> Result<f64, SpecialError> {
    const F: &str = "kummer_1f1";
    if a.is_nan() || b.is_nan() || z.is_nan() {
        return Err(domain(F, "NaN argument"));
    }
    if is_nonpositive_integer(b) {
        return Err(SpecialError::Pole { func: F, arg: b });
    }
    if z < 0.0 {
        // Kummer transformation: e^{-z} M(a,b,z) = M(b-a, b, -z)
        return kummer_1f1(b - a, b, -z);
    }
    if is_nonpositive_integer(a) || z <= SERIES_LIMIT {
        return Ok(series(a, b, z)? * (-z).exp());
    }
    asymptotic_scaled(a, b, z)
}

/// Kummer's confluent hypergeometric function `₁F₁(a; b; z)`.
///
/// ```
/// // M(a, a, z) = e^z
/// let v = etaue::specfun::kummer_1f1(0.7, 0.7, 1.3).unwrap();
/// assert!((v - 1.3f64.exp()).abs() < 1e-14);
/// ```
pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64, SpecialError> {
    const F: &str = "kummer_1f1";
    if a.is_nan() || b.is_nan() || z.is_nan() {
        return Err(domain(F, "NaN argument"));
    }
    if is_nonpositive_integer(b) {
        return Err(SpecialError::Pole { func: F, arg: b });
    }
    if z < 0.0 {
        let v = kummer_1f1(b - a, b, -z)? * z.exp();
        return Ok(v);
    }
    if is_nonpositive_integer(a) || z <= SERIES_LIMIT {
        return series(a, b, z);
    }
    let v = asymptotic_scaled(a, b, z)? * z.exp();
    if !v.is_finite() {
        return Err(SpecialError::Overflow { func: F, arg: z });
    }
    Ok(v)
}
