use crate::error::{domain, Error, Result};
use crate::specfun::rgamma;
use std::f64::consts::PI;

fn check_eta_hat(eta_hat: f64) -> Result<()> {
    if !(eta_hat < 2.0) || !eta_hat.is_finite() {
        return Err(domain(format!("eta_hat = {eta_hat} must be below 2")));
    }
    Ok(())
}

/// Normalization of the real-symmetric jpd,
/// `K̂ = 1 / (√π 2^{2-η̂} Γ(1-η̂/2))`.
pub fn twin_constant(eta_hat: f64) -> Result<f64> {
    check_eta_hat(eta_hat)?;
    Ok(rgamma(1.0 - 0.5 * eta_hat) / (PI.sqrt() * 2f64.powf(2.0 - eta_hat)))
}

/// `K̂ e^{-(λ₁²+λ₂²)/2} |λ₂-λ₁|^{1-η̂}`.
pub fn jpd_eigen_real_twin(lambda1: f64, lambda2: f64, eta_hat: f64) -> Result<f64> {
    let k = twin_constant(eta_hat)?;
    let beta = 1.0 - eta_hat;
    let d = (lambda2 - lambda1).abs();
    let g = (-0.5 * (lambda1 * lambda1 + lambda2 * lambda2)).exp();
    if d == 0.0 {
        return if beta > 0.0 {
            Ok(0.0)
        } else if beta == 0.0 {
            Ok(k * g)
        } else {
            Err(Error::Singular(format!("coincident eigenvalues with eta_hat = {eta_hat} > 1")))
        };
    }
    Ok(k * g * d.powf(beta))
}

/// Gap law of the real-symmetric ensemble, `2√π K̂ s^{1-η̂} e^{-s²/4}`.
pub fn gap_probability_real_twin(s: f64, eta_hat: f64) -> Result<f64> {
    let k = twin_constant(eta_hat)?;
    if !(s >= 0.0) {
        return Err(domain(format!("spacing s = {s} must be non-negative")));
    }
    let beta = 1.0 - eta_hat;
    if s == 0.0 && beta < 0.0 {
        return Err(Error::Singular(format!("gap density diverges at s = 0 for eta_hat = {eta_hat}")));
    }
    let p = if s == 0.0 && beta == 0.0 { 1.0 } else { s.powf(beta) };
    Ok(2.0 * PI.sqrt() * k * p * (-0.25 * s * s).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponent_zero_is_independent_normals() {
        let v = jpd_eigen_real_twin(0.3, -1.2, 1.0).unwrap();
        let n = |x: f64| (-0.5 * x * x).exp() / (2.0 * PI).sqrt();
        assert!((v - n(0.3) * n(-1.2)).abs() < 1e-16);
    }

    #[test]
    fn goe_constant() {
        // GOE 2×2: e^{-(λ₁²+λ₂²)/2} |Δ| / (4√π)
        assert!((twin_constant(0.0).unwrap() - 1.0 / (4.0 * PI.sqrt())).abs() < 1e-16);
    }

    #[test]
    fn domain() {
        assert!(twin_constant(2.0).is_err());
        assert!(gap_probability_real_twin(-0.1, 0.5).is_err());
    }
}
