use super::{check_eta_entries, norm_constants};
use crate::error::{domain, Error, Result};
use crate::numerics::{gauss_hermite_48, try_integrate, Domain, QuadratureSpec, Singular};
use crate::specfun::{bessel_k0_scaled, gamma, kummer_1f1, rgamma, upper_incomplete_gamma, EULER_GAMMA};
use std::f64::consts::{PI, SQRT_2};

/// Below this distance from `η = 1/2` the closed form for `J` is replaced by
/// the `K0` limit.
const HALF_SWITCH: f64 = 1e-6;
/// Near `η = 1/2` (but outside `HALF_SWITCH`) the two hypergeometric terms
/// cancel badly, so `J` is integrated directly.
const HALF_QUAD: f64 = 1e-3;
/// Above this `a` the hypergeometric terms cancel badly; Gauss–Hermite is
/// accurate because the nearest singularity sits at distance `√a / 2`.
const GH_SWITCH: f64 = 16.0;

fn marginal_spec() -> QuadratureSpec {
    QuadratureSpec::default().with_rel_tol(1e-12).with_abs_tol(1e-300)
}

/// `p₁(x) = (f ∗ g)(x) / (2√π Γ(3/2-η))` with `f(ω) = Γ(1-η, ω²)`, `g(ω) = e^{-ω²}`.
/// `Γ(a, k u²)`, continued past the underflow of `u²` at `a = 0` through
/// `E₁(x) = -γ - ln x + O(x)`.
pub(crate) fn upper_gamma_sq(a: f64, k: f64, u: f64) -> Result<f64> {
    let x = k * u * u;
    if x == 0.0 && u != 0.0 && a == 0.0 {
        return Ok(-EULER_GAMMA - k.ln() - 2.0 * u.abs().ln());
    }
    Ok(upper_incomplete_gamma(a, x)?)
}

pub fn marginal_p1(x: f64, eta: f64) -> Result<f64> {
    check_eta_entries(eta)?;
    if !x.is_finite() {
        return Err(domain(format!("x = {x}")));
    }
    let a = 1.0 - eta;
    let f = |w: f64| -> Result<f64> {
        let d = x - w;
        if w == 0.0 && a == 0.0 {
            // integrable log spike; only reached when a mapped node rounds onto it
            return Ok(0.0);
        }
        Ok(upper_gamma_sq(a, 1.0, w)? * (-d * d).exp())
    };
    // e^{-ω² - (x-ω)²} = e^{-x²/2 - 2(ω - x/2)²}: a ±9 window around x/2 drops < e^{-160}
    let c = 0.5 * x;
    let (lo, hi) = (c - 9.0, c + 9.0);
    let spec = marginal_spec();
    let mut total = 0.0;
    if lo < 0.0 {
        total += try_integrate(f, Domain::Finite(lo, hi.min(0.0)), &spec.singular(Singular::UPPER))?.value;
    }
    if hi > 0.0 {
        total += try_integrate(f, Domain::Finite(lo.max(0.0), hi), &spec.singular(Singular::LOWER))?.value;
    }
    Ok(total * rgamma(1.5 - eta) / (2.0 * PI.sqrt()))
}

/// `p₂(x, y) = e^{-(x+y)²/4} Γ(1-η, (x-y)²/4) / (4√π Γ(3/2-η))`.
pub fn marginal_p2(x: f64, y: f64, eta: f64) -> Result<f64> {
    check_eta_entries(eta)?;
    let d = x - y;
    let sum = x + y;
    if d == 0.0 && eta >= 1.0 {
        return Err(Error::Singular(format!("p2 diverges at x = y = {x} for eta = 1")));
    }
    let g = if d == 0.0 { gamma(1.0 - eta)? } else { upper_gamma_sq(1.0 - eta, 0.25, d)? };
    Ok((-0.25 * sum * sum).exp() * g * rgamma(1.5 - eta) / (4.0 * PI.sqrt()))
}

/// `J(a) = ∫_ℝ e^{-s²/2} (a + 2s²)^{-η} ds`, the `s`-integral left in `p₃`.
pub fn j_integral(a: f64, eta: f64) -> Result<f64> {
    if !(a >= 0.0) || !a.is_finite() {
        return Err(domain(format!("J needs a >= 0, got {a}")));
    }
    if a == 0.0 && eta >= 0.5 {
        return Err(Error::Singular(format!("J diverges at a = 0 for eta = {eta}")));
    }
    if eta == 0.0 {
        return Ok((2.0 * PI).sqrt());
    }
    if (eta - 0.5).abs() < HALF_SWITCH {
        return Ok(bessel_k0_scaled(a / 8.0)? / SQRT_2);
    }
    if a > GH_SWITCH {
        let (u, w) = gauss_hermite_48();
        let s: f64 = u.iter().zip(w).map(|(u, w)| w * (a + 4.0 * u * u).powf(-eta)).sum();
        return Ok(SQRT_2 * s);
    }
    if (eta - 0.5).abs() < HALF_QUAD {
        let f = |s: f64| Ok::<f64, Error>(2.0 * (-0.5 * s * s).exp() * (a + 2.0 * s * s).powf(-eta));
        let spec = marginal_spec();
        let knee = (0.5 * a).sqrt();
        let head = try_integrate(f, Domain::Finite(0.0, knee), &spec)?.value;
        let tail = try_integrate(f, Domain::HalfLine(knee), &spec)?.value;
        return Ok(head + tail);
    }
    let z = 0.25 * a;
    let t2 = 2f64.powf(0.5 - 2.0 * eta) * gamma(0.5 - eta)? * kummer_1f1(eta, 0.5 + eta, z)?;
    let r = rgamma(eta);
    let t1 = if r == 0.0 || a == 0.0 {
        0.0
    } else {
        a.powf(0.5 - eta) * (PI / 2.0).sqrt() * gamma(eta - 0.5)? * r * kummer_1f1(0.5, 1.5 - eta, z)?
    };
    Ok(t1 + t2)
}

/// `p₃(x, y, t) = C_η e^{-(x²+y²+t²)/2} J((x-y)² + 2t²)`.
pub fn marginal_p3(x: f64, y: f64, t: f64, eta: f64) -> Result<f64> {
    check_eta_entries(eta)?;
    let d = x - y;
    let a = d * d + 2.0 * t * t;
    let c = norm_constants(eta)?.c_eta;
    Ok(c * (-0.5 * (x * x + y * y + t * t)).exp() * j_integral(a, eta)?)
}
