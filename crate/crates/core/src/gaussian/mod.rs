//! The Gaussian-weight η-ensemble: normalization constants, entry and
//! eigenvalue densities, the marginal tower, spectral density, gap law,
//! large-`x` asymptotics, the real-symmetric twin and the anti range
//! `1 < η < 3/2`.

mod marginals;
mod twin;

pub(crate) use marginals::upper_gamma_sq;
pub use marginals::{j_integral, marginal_p1, marginal_p2, marginal_p3};
pub use twin::{gap_probability_real_twin, jpd_eigen_real_twin, twin_constant};

use crate::error::{domain, Error, Result};
use crate::numerics::TabulatedCdf;
use crate::specfun::{gamma, gamma_p, kummer_1f1_scaled, rgamma};
use crate::types::HermitianEntries;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormConstants {
    pub c_eta: f64,
    pub k_eta: f64,
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if !(eta < 1.5) || !eta.is_finite() {
        return Err(domain(format!("eta = {eta} outside the admissible range eta < 3/2")));
    }
    Ok(())
}

pub(crate) fn check_eta_entries(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(domain(format!("eta = {eta} outside [0, 1]")));
    }
    Ok(())
}

/// `K_η` and `C_η`.
///
/// ```
/// let n = etaue::gaussian::norm_constants(0.0).unwrap();
/// assert!((n.k_eta - 1.0 / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
/// ```
pub fn norm_constants(eta: f64) -> Result<NormConstants> {
    check_eta(eta)?;
    let g = gamma(1.5 - eta)?;
    let p = 2f64.powf(3.0 - 2.0 * eta);
    let k_eta = 1.0 / (PI.sqrt() * p * g);
    let c_eta = 1.0 / (PI.powf(1.5) * p * g);
    if !(k_eta > 0.0 && k_eta.is_finite() && c_eta > 0.0) {
        return Err(Error::Special(crate::specfun::SpecialError::Overflow { func: "norm_constants", arg: eta }));
    }
    Ok(NormConstants { c_eta, k_eta })
}

/// Evaluator bound to one `η`, holding the precomputed constants.
#[derive(Debug, Clone, Copy)]
pub struct GaussianEnsemble {
    eta: f64,
    norm: NormConstants,
    rgamma_3_2: f64,
}

impl GaussianEnsemble {
    pub fn new(eta: f64) -> Result<Self> {
        let norm = norm_constants(eta)?;
        Ok(GaussianEnsemble { eta, norm, rgamma_3_2: rgamma(1.5 - eta) })
    }

    /// Scale the eigenvalue-jpd normalization; used only to exercise the
    /// validation battery against a known-bad model.
    #[doc(hidden)]
    pub fn with_norm_scale(mut self, scale: f64) -> Self {
        self.norm.k_eta *= scale;
        self.norm.c_eta *= scale;
        self
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn beta_eff(&self) -> f64 {
        2.0 - 2.0 * self.eta
    }

    pub fn constants(&self) -> NormConstants {
        self.norm
    }

    pub fn jpd_entries(&self, e: &HermitianEntries) -> Result<f64> {
        check_eta_entries_or_anti(self.eta)?;
        let v = e.vstar();
        if v == 0.0 && self.eta > 0.0 {
            return Err(Error::Singular(format!("vstar = 0 at {e:?} with eta = {}", self.eta)));
        }
        Ok(self.norm.c_eta * (-0.5 * e.trace2()).exp() * v.powf(-self.eta))
    }

    pub fn jpd_eigen(&self, l1: f64, l2: f64) -> Result<f64> {
        let d = (l2 - l1).abs();
        let beta = self.beta_eff();
        let g = (-0.5 * (l1 * l1 + l2 * l2)).exp();
        if d == 0.0 {
            return if beta > 0.0 {
                Ok(0.0)
            } else if beta == 0.0 {
                Ok(self.norm.k_eta * g)
            } else {
                Err(Error::Singular(format!("coincident eigenvalues with eta = {} > 1", self.eta)))
            };
        }
        Ok(self.norm.k_eta * g * d.powf(beta))
    }

    /// `ρ_η(λ) = e^{-λ²} ₁F₁(3/2-η; 1/2; λ²/2) / (2^{3/2-η} √π)`.
    pub fn spectral_density(&self, lambda: f64) -> Result<f64> {
        let z = 0.5 * lambda * lambda;
        let m = kummer_1f1_scaled(1.5 - self.eta, 0.5, z)?;
        Ok((-z).exp() * m / (2f64.powf(1.5 - self.eta) * PI.sqrt()) * self.k_ratio())
    }

    /// `P_η(s) = 2√π K_η s^{2-2η} e^{-s²/4}`.
    pub fn gap_probability(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(domain(format!("spacing s = {s} must be non-negative")));
        }
        let beta = self.beta_eff();
        if s == 0.0 {
            return if beta > 0.0 {
                Ok(0.0)
            } else if beta == 0.0 {
                Ok(2.0 * PI.sqrt() * self.norm.k_eta)
            } else {
                Err(Error::Singular(format!("gap density diverges at s = 0 for eta = {}", self.eta)))
            };
        }
        Ok(2.0 * PI.sqrt() * self.norm.k_eta * s.powf(beta) * (-0.25 * s * s).exp())
    }

    /// CDF of the gap law, `P(3/2-η, s²/4)`.
    pub fn gap_cdf(&self, s: f64) -> Result<f64> {
        if s <= 0.0 {
            return Ok(0.0);
        }
        Ok(gamma_p(1.5 - self.eta, 0.25 * s * s)? * self.k_ratio())
    }

    /// Right-tail asymptotic of `p₁`.
    pub fn p1_asymptotic(&self, x: f64) -> f64 {
        let a = x.abs();
        (a / 2.0).powf(-2.0 * self.eta) * (-0.5 * a * a).exp() * self.rgamma_3_2 / (2.0 * 2f64.sqrt())
    }

    /// Tabulated CDF of `ρ_η` on `[-12, 12]`.
    pub fn spectral_cdf(&self) -> Result<TabulatedCdf> {
        TabulatedCdf::new(|l| self.spectral_density(l), -12.0, 12.0, 2400, &[])
    }

    // ratio of the (possibly scaled) K to the true K; 1 unless fault-injected
    fn k_ratio(&self) -> f64 {
        self.norm.k_eta * PI.sqrt() * 2f64.powf(3.0 - 2.0 * self.eta) / self.rgamma_3_2
    }
}

fn check_eta_entries_or_anti(eta: f64) -> Result<()> {
    if !(eta >= 0.0) {
        return Err(domain(format!("eta = {eta} must be non-negative for the entry density")));
    }
    check_eta(eta)
}

pub fn jpd_entries(e: &HermitianEntries, eta: f64) -> Result<f64> {
    GaussianEnsemble::new(eta)?.jpd_entries(e)
}

pub fn jpd_eigen(lambda1: f64, lambda2: f64, eta: f64) -> Result<f64> {
    GaussianEnsemble::new(eta)?.jpd_eigen(lambda1, lambda2)
}

pub fn spectral_density_gaussian(lambda: f64, eta: f64) -> Result<f64> {
    GaussianEnsemble::new(eta)?.spectral_density(lambda)
}

pub fn gap_probability_gaussian(s: f64, eta: f64) -> Result<f64> {
    GaussianEnsemble::new(eta)?.gap_probability(s)
}

pub fn p1_asymptotic(x: f64, eta: f64) -> Result<f64> {
    check_eta_entries(eta)?;
    Ok(GaussianEnsemble::new(eta)?.p1_asymptotic(x))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AntiCheck {
    pub beta_eff: f64,
    pub normalizable: bool,
    pub k_eta: f64,
}

/// Checks on the anti range `1 < η < 3/2`, where `β_eff < 0`.
pub fn anti_eta_check(eta: f64) -> Result<AntiCheck> {
    if !(eta > 1.0 && eta < 1.5) {
        return Err(domain(format!("anti-ensemble needs 1 < eta < 3/2, got {eta}")));
    }
    let n = norm_constants(eta)?;
    Ok(AntiCheck { beta_eff: 2.0 - 2.0 * eta, normalizable: n.k_eta.is_finite() && n.k_eta > 0.0, k_eta: n.k_eta })
}
