//! Eigenvalue-space samplers.

use super::envelope::{GridBuilder, GridTable, MAX_ATTEMPTS};
use super::rng::RngStream;
use crate::bessel::{phi, BesselWeightParams};
use crate::error::{Error, Result};
use crate::gaussian::check_eta;
use crate::types::SpectralPair;

/// Eigenvalue pair of the Gaussian-weight ensemble at any `η < 3/2`.
///
/// The jpd factorizes in the centre `c = (λ₁+λ₂)/2 ~ N(0, 1/2)` and the
/// spacing, with `s²/4 ~ Gamma(3/2-η)`.
pub fn sample_eigen_gaussian(eta: f64, rng: &mut RngStream) -> Result<SpectralPair> {
    check_eta(eta)?;
    let c = rng.normal() * std::f64::consts::FRAC_1_SQRT_2;
    let s = 2.0 * rng.gamma(1.5 - eta).sqrt();
    Ok(SpectralPair::new(c - 0.5 * s, c + 0.5 * s))
}

// Below this radius at η = 1, φ = 2K₀ is bounded by φ(r)√(r/|x|).
const CORE: f64 = 0.01;
const STEP: f64 = 0.02;
const BOUND_SLACK: f64 = 1.0 + 1e-9;

/// Rejection sampler for `φ(λ₁)φ(λ₂)|λ₂-λ₁|^β`.
///
/// Both eigenvalues are proposed from `g(λ) ∝ φ(λ)(1+|λ|)^β`, which
/// dominates the jpd because `|λ₁-λ₂| ≤ (1+|λ₁|)(1+|λ₂|)`. Each `|λ|` is
/// itself drawn under a piecewise bound built from the monotonicity of `φ`,
/// with a squeeze on the cell's lower bound.
#[derive(Debug, Clone)]
pub struct BesselEigenSampler {
    p: BesselWeightParams,
    beta: f64,
    nodes: Vec<f64>,
    phis: Vec<f64>,
    table: GridTable,
}

impl BesselEigenSampler {
    pub fn new(p: BesselWeightParams) -> Result<Self> {
        let beta = p.beta();
        let singular = p.zeta >= 1.0;
        let mut nodes = Vec::new();
        if singular {
            let mut r = CORE;
            while r < STEP {
                nodes.push(r);
                r *= 1.5;
            }
        } else {
            nodes.push(0.0);
            if p.zeta > 0.0 {
                let mut r = 1e-9;
                while r < STEP {
                    nodes.push(r);
                    r *= 1.5;
                }
            }
        }
        let mut x = STEP;
        while x < 8.0 {
            nodes.push(x);
            x += STEP;
        }
        let mut phis: Vec<f64> = nodes.iter().map(|&x| phi(x, &p)).collect::<Result<_>>()?;
        let g = |x: f64, f: f64| f * (1.0 + x).powf(beta);
        // geometric tail until the remaining mass is negligible even for the
        // algebraic tails at ζ < 0; at a rate of 1.02 this ends within a few thousand nodes
        let mut mass: f64 = nodes.windows(2).zip(&phis).map(|(w, f)| g(w[1], *f) * (w[1] - w[0])).sum();
        let mut x = 8.0;
        loop {
            let f = phi(x, &p)?;
            nodes.push(x);
            phis.push(f);
            mass += g(x, f) * 0.02 * x;
            if g(x, f) * x < 1e-14 * mass || f == 0.0 {
                break;
            }
            x *= 1.02;
        }
        let mut b = GridBuilder::default();
        if singular {
            b.inv_sqrt(0.0, CORE, phis[0] * CORE.sqrt() * (1.0 + CORE).powf(beta) * BOUND_SLACK, true)?;
        }
        for i in 0..nodes.len() - 1 {
            b.flat(nodes[i], nodes[i + 1], g(nodes[i + 1], phis[i]) * BOUND_SLACK)?;
        }
        Ok(BesselEigenSampler { p, beta, nodes, phis, table: b.build()? })
    }

    pub fn params(&self) -> &BesselWeightParams {
        &self.p
    }

    /// `|λ|` from `g`, truncated where its tail mass falls below `1e-14`.
    fn sample_abs(&self, rng: &mut RngStream) -> Result<f64> {
        for _ in 0..MAX_ATTEMPTS {
            let (x, e) = self.table.draw(rng);
            let pw = (1.0 + x).powf(self.beta);
            // nodes[i] < x ≤ nodes[i+1]; the core cell squeezes on φ(CORE)
            let i = self.nodes.partition_point(|&n| n < x);
            let lower = if i < self.phis.len() { self.phis[i] * pw } else { 0.0 };
            let u = rng.uniform() * e;
            if u < lower {
                return Ok(x);
            }
            let d = phi(x, &self.p)? * pw;
            if d > e * (1.0 + 1e-9) {
                return Err(Error::EnvelopeViolation { x, density: d, envelope: e });
            }
            if u < d {
                return Ok(x);
            }
        }
        Err(Error::Starvation { attempts: MAX_ATTEMPTS })
    }

    pub fn sample(&self, rng: &mut RngStream) -> Result<SpectralPair> {
        for _ in 0..MAX_ATTEMPTS {
            let a = rng.sign() * self.sample_abs(rng)?;
            let b = rng.sign() * self.sample_abs(rng)?;
            if self.beta == 0.0 {
                return Ok(SpectralPair::new(a, b));
            }
            let ratio = (a - b).abs() / ((1.0 + a.abs()) * (1.0 + b.abs()));
            if rng.uniform() < ratio.powf(self.beta) {
                return Ok(SpectralPair::new(a, b));
            }
        }
        Err(Error::Starvation { attempts: MAX_ATTEMPTS })
    }
}

/// One eigenvalue pair of the Bessel-weight ensemble. Builds the proposal
/// table on every call; reuse a [`BesselEigenSampler`] for many draws.
pub fn sample_eigen_bessel(p: &BesselWeightParams, rng: &mut RngStream) -> Result<SpectralPair> {
    BesselEigenSampler::new(*p)?.sample(rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ks_distance;
    use crate::specfun::gamma_p;

    #[test]
    fn gaussian_pair_laws() {
        let mut rng = RngStream::new(4, 0);
        let eta = 1.25;
        let ps: Vec<SpectralPair> = (0..20_000).map(|_| sample_eigen_gaussian(eta, &mut rng).unwrap()).collect();
        let s: Vec<f64> = ps.iter().map(|p| p.spacing).collect();
        let d = ks_distance(&s, |s| gamma_p(1.5 - eta, 0.25 * s * s).unwrap()).unwrap().ks_distance;
        assert!(d < 1.63 / (20_000f64).sqrt(), "{d}");
        assert!(sample_eigen_gaussian(1.5, &mut rng).is_err());
    }

    #[test]
    fn poisson_limit_spacings() {
        // η = 1: φ₁(λ₁)φ₁(λ₂) with no coupling; λ i.i.d., and the gap law is e^{-s}
        let p = BesselWeightParams::new(1.0, 1.0).unwrap();
        let sm = BesselEigenSampler::new(p).unwrap();
        let mut rng = RngStream::new(8, 0);
        let s: Vec<f64> = (0..5000).map(|_| sm.sample(&mut rng).unwrap().spacing).collect();
        let d = ks_distance(&s, |s| 1.0 - (-s).exp()).unwrap().ks_distance;
        assert!(d < 1.63 / (5000f64).sqrt(), "{d}");
    }

    #[test]
    fn wigner_limit_spacings() {
        let p = BesselWeightParams::new(0.5, std::f64::consts::PI / 4.0).unwrap();
        let sm = BesselEigenSampler::new(p).unwrap();
        let mut rng = RngStream::new(8, 1);
        let s: Vec<f64> = (0..5000).map(|_| sm.sample(&mut rng).unwrap().spacing).collect();
        let cdf = |s: f64| 1.0 - (-std::f64::consts::PI * s * s / 4.0).exp();
        let d = ks_distance(&s, cdf).unwrap().ks_distance;
        assert!(d < 1.63 / (5000f64).sqrt(), "{d}");
    }
}
