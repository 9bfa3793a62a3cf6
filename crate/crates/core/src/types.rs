use crate::error::{domain, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    Gaussian,
    GeneralizedBessel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Unitary,
    RealSymmetric,
}

/// Model configuration. For `Symmetry::RealSymmetric` the `eta` field holds
/// the real-ensemble parameter `η̂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnsembleParams {
    pub weight: Weight,
    pub eta: f64,
    pub alpha: f64,
    pub symmetry: Symmetry,
}

impl EnsembleParams {
    pub fn gaussian(eta: f64) -> Self {
        EnsembleParams { weight: Weight::Gaussian, eta, alpha: 1.0, symmetry: Symmetry::Unitary }
    }

    pub fn gaussian_real(eta_hat: f64) -> Self {
        EnsembleParams { weight: Weight::Gaussian, eta: eta_hat, alpha: 1.0, symmetry: Symmetry::RealSymmetric }
    }

    pub fn bessel(eta: f64, alpha: f64) -> Self {
        EnsembleParams { weight: Weight::GeneralizedBessel, eta, alpha, symmetry: Symmetry::Unitary }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.eta.is_finite() {
            return Err(domain(format!("eta = {} is not finite", self.eta)));
        }
        match (self.weight, self.symmetry) {
            (Weight::Gaussian, Symmetry::Unitary) => {
                if !(self.eta < 1.5) {
                    return Err(domain(format!("Gaussian weight needs eta < 3/2, got {}", self.eta)));
                }
            }
            (Weight::Gaussian, Symmetry::RealSymmetric) => {
                if !(self.eta < 2.0) {
                    return Err(domain(format!("real-symmetric twin needs eta_hat < 2, got {}", self.eta)));
                }
            }
            (Weight::GeneralizedBessel, Symmetry::Unitary) => {
                if !(0.0..=1.0).contains(&self.eta) {
                    return Err(domain(format!("Bessel weight needs eta in [0, 1], got {}", self.eta)));
                }
                if !(self.alpha > 0.0 && self.alpha.is_finite()) {
                    return Err(domain(format!("alpha must be positive, got {}", self.alpha)));
                }
            }
            (Weight::GeneralizedBessel, Symmetry::RealSymmetric) => {
                return Err(domain("the Bessel weight is implemented for the unitary class only"));
            }
        }
        Ok(())
    }

    /// Effective Dyson index.
    pub fn beta_eff(&self) -> f64 {
        match self.symmetry {
            Symmetry::Unitary => 2.0 - 2.0 * self.eta,
            Symmetry::RealSymmetric => 1.0 - self.eta,
        }
    }

    pub fn zeta(&self) -> f64 {
        2.0 * self.eta - 1.0
    }

    /// The unitary `η` sharing this ensemble's eigenvalue law.
    pub fn unitary_eta(&self) -> f64 {
        match self.symmetry {
            Symmetry::Unitary => self.eta,
            Symmetry::RealSymmetric => (self.eta + 1.0) / 2.0,
        }
    }
}

/// The four real variables of a 2×2 Hermitian matrix
/// `[[x, (t+is)/√2], [(t-is)/√2, y]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HermitianEntries {
    pub x: f64,
    pub y: f64,
    pub t: f64,
    pub s: f64,
}

impl HermitianEntries {
    pub fn new(x: f64, y: f64, t: f64, s: f64) -> Self {
        HermitianEntries { x, y, t, s }
    }

    pub fn trace(&self) -> f64 {
        self.x + self.y
    }

    pub fn trace2(&self) -> f64 {
        self.x * self.x + self.y * self.y + self.t * self.t + self.s * self.s
    }

    /// `2 Tr X² - (Tr X)²`, evaluated as `(x-y)² + 2(t²+s²)` to avoid cancellation.
    pub fn vstar(&self) -> f64 {
        let d = self.x - self.y;
        d * d + 2.0 * (self.t * self.t + self.s * self.s)
    }
}

/// Ordered eigenvalue pair and raw spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralPair {
    pub lambda1: f64,
    pub lambda2: f64,
    pub spacing: f64,
}

impl SpectralPair {
    pub fn new(a: f64, b: f64) -> Self {
        let (lambda1, lambda2) = if a <= b { (a, b) } else { (b, a) };
        SpectralPair { lambda1, lambda2, spacing: lambda2 - lambda1 }
    }
}

/// Closed-form eigenvalues of a 2×2 Hermitian matrix.
///
/// ```
/// use etaue::{eigenvalues_2x2, HermitianEntries};
/// let p = eigenvalues_2x2(&HermitianEntries::new(0.0, 0.0, 2f64.sqrt(), 0.0));
/// assert!((p.lambda1 + 1.0).abs() < 1e-15 && (p.lambda2 - 1.0).abs() < 1e-15);
/// ```
pub fn eigenvalues_2x2(e: &HermitianEntries) -> SpectralPair {
    let m = 0.5 * (e.x + e.y);
    let h = 0.5 * e.vstar().sqrt();
    SpectralPair { lambda1: m - h, lambda2: m + h, spacing: 2.0 * h }
}

/// Eigenvalues from the power sums `s1 = Tr X`, `s2 = Tr X²`.
pub fn eigen_from_traces(s1: f64, s2: f64) -> Result<SpectralPair> {
    let d = 2.0 * s2 - s1 * s1;
    if !(d >= 0.0) {
        return Err(domain(format!("2 s2 - s1^2 = {d} < 0 is not realizable")));
    }
    let r = d.sqrt();
    Ok(SpectralPair { lambda1: (s1 - r) / 2.0, lambda2: (s1 + r) / 2.0, spacing: r })
}
