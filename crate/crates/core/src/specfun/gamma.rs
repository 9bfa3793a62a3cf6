use super::{domain, SpecialError, EULER_GAMMA};
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument for which `Γ` is representable.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

fn is_nonpositive_integer(z: f64) -> bool {
    z <= 0.0 && z == z.floor()
}

/// `sin(πx)` with exact argument reduction, so that it vanishes at integers.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round(); // r in [-1, 1]
    let (r, sign) = if r < 0.0 { (-r, -1.0) } else { (r, 1.0) };
    let v = if r <= 0.25 {
        (PI * r).sin()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).cos()
    } else {
        (PI * (1.0 - r)).sin()
    };
    sign * v
}

fn lanczos_sum(x: f64) -> f64 {
    // x = z - 1 with z >= 0.5
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    a
}

/// The Gamma function.
///
/// ```
/// let v = etaue::specfun::gamma(1.5).unwrap();
/// assert!((v - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-15);
/// ```
pub fn gamma(z: f64) -> Result<f64, SpecialError> {
    if z.is_nan() {
        return Err(domain("gamma", "NaN argument"));
    }
    if is_nonpositive_integer(z) {
        return Err(SpecialError::Pole { func: "gamma", arg: z });
    }
    if z > GAMMA_MAX_ARG {
        return Err(SpecialError::Overflow { func: "gamma", arg: z });
    }
    if z < 0.5 {
        // reflection
        let s = sin_pi(z);
        let g = gamma(1.0 - z)?;
        let v = PI / (s * g);
        if !v.is_finite() {
            return Err(SpecialError::Overflow { func: "gamma", arg: z });
        }
        return Ok(v);
    }
    let x = z - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let half = (x + 0.5) / 2.0;
    let p = t.powf(half);
    Ok((2.0 * PI).sqrt() * p * (-t).exp() * p * lanczos_sum(x))
}

/// `ln |Γ(z)|` for `z > 0`.
pub fn ln_gamma(z: f64) -> Result<f64, SpecialError> {
    if !(z > 0.0) {
        return Err(domain("ln_gamma", format!("z = {z} must be positive")));
    }
    if z < 0.5 {
        return Ok((PI / sin_pi(z)).ln() - ln_gamma(1.0 - z)?);
    }
    let x = z - 1.0;
    let t = x + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (x + 0.5) * t.ln() - t + lanczos_sum(x).ln())
}

/// `1/Γ(z)`, which is entire: zero at the poles of `Γ`.
pub fn rgamma(z: f64) -> f64 {
    if is_nonpositive_integer(z) {
        return 0.0;
    }
    if z > GAMMA_MAX_ARG {
        return ln_gamma(z).map(|l| (-l).exp()).unwrap_or(0.0);
    }
    match gamma(z) {
        Ok(g) => 1.0 / g,
        Err(_) => 0.0,
    }
}

fn zeta_int(k: usize) -> f64 {
    const SMALL: [f64; 9] = [
        1.644_934_066_848_226_4,
        1.202_056_903_159_594_3,
        1.082_323_233_711_138_2,
        1.036_927_755_143_37,
        1.017_343_061_984_449_1,
        1.008_349_277_381_922_8,
        1.004_077_356_197_944_3,
        1.002_008_392_826_082_2,
        1.000_994_575_127_818_1,
    ];
    if (2..=10).contains(&k) {
        return SMALL[k - 2];
    }
    (1..=40).rev().map(|n| (n as f64).powi(-(k as i32))).sum()
}

/// `ln Γ(1+a) / a` for small `|a|`, from the Taylor series with zeta values.
fn ln_gamma1p_over_a(a: f64) -> f64 {
    let mut sum = -EULER_GAMMA;
    let mut pow = 1.0; // a^{k-1}
    for k in 2..60 {
        pow *= a;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign * zeta_int(k) * pow / k as f64;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn expm1_over(u: f64) -> f64 {
    if u == 0.0 {
        1.0
    } else {
        u.exp_m1() / u
    }
}

/// `(Γ(1+a) - 1) / a`, accurate through `a = 0` where it equals `-γ`.
pub(crate) fn gamma1pm1_over_a(a: f64) -> Result<f64, SpecialError> {
    if a.abs() < 0.2 {
        let l_over_a = ln_gamma1p_over_a(a);
        Ok(l_over_a * expm1_over(a * l_over_a))
    } else {
        Ok((gamma(1.0 + a)? - 1.0) / a)
    }
}

/// `Γ(1+a) - 1` without cancellation near `a = 0`.
pub fn gamma1pm1(a: f64) -> Result<f64, SpecialError> {
    if a.abs() < 0.2 {
        Ok(a * gamma1pm1_over_a(a)?)
    } else {
        Ok(gamma(1.0 + a)? - 1.0)
    }
}
