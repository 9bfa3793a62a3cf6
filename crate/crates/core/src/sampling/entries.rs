//! Chained conditional sampler for the Gaussian weight: `x ~ p₁`, then
//! `y | x`, `t | x, y` and `s | x, y, t`.
//!
//! `x` is drawn exactly through the mixture behind `p₁`. The three later
//! conditionals are drawn by rejection under piecewise bounds rebuilt for
//! each conditioning value from the monotonicity of their factors, so every
//! stage is exact up to the `e^{-32}` tail truncation.

use super::envelope::{rejection_sample, Envelope, GridBuilder, GridTable};
use super::rng::RngStream;
use crate::error::{Error, Result};
use crate::gaussian::{check_eta_entries, j_integral, upper_gamma_sq};
use crate::specfun::gamma;
use crate::types::HermitianEntries;

// Absolute slack on computed bounds; the factors are monotone only up to rounding.
const BOUND_SLACK: f64 = 1.0 + 1e-9;
// Radius of the innermost singular cell of the y stage at eta = 1.
const Y_CORE: f64 = 1e-3;

/// Sampler for the entry vector of one Gaussian-weight ensemble, `η ∈ [0, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct GaussianEntrySampler {
    eta: f64,
    // Γ(1-η), the y-stage factor at v = 0; infinite at η = 1
    gamma_at_zero: f64,
}

impl GaussianEntrySampler {
    pub fn new(eta: f64) -> Result<Self> {
        check_eta_entries(eta)?;
        let gamma_at_zero = if eta < 1.0 { gamma(1.0 - eta)? } else { f64::INFINITY };
        Ok(GaussianEntrySampler { eta, gamma_at_zero })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// One draw of `(x, y, t, s)`.
    ///
    /// A conditioning value at which a later conditional cannot be
    /// normalized (`x == y` or `x == y, t == 0` in floating point) is
    /// discarded once and the `y` stage redrawn.
    pub fn sample(&self, rng: &mut RngStream) -> Result<HermitianEntries> {
        let x = self.sample_x(rng);
        let mut retried = false;
        loop {
            let y = self.sample_y(x, rng)?;
            let r = self.sample_t(x, y, rng).and_then(|t| Ok((t, self.sample_s(x, y, t, rng)?)));
            match r {
                Ok((t, s)) => return Ok(HermitianEntries::new(x, y, t, s)),
                Err(Error::Singular(_)) if !retried => retried = true,
                Err(e) => return Err(e),
            }
        }
    }

    /// `x ~ p₁`. With `τ ~ Gamma(3/2-η)`, `ω | τ` uniform on `(-√τ, √τ)` has
    /// density `∝ Γ(1-η, ω²)`, and `x = ω + N(0, 1/2)` reproduces the
    /// convolution defining `p₁`.
    pub fn sample_x(&self, rng: &mut RngStream) -> f64 {
        let tau = rng.gamma(1.5 - self.eta);
        let w = tau.sqrt() * (2.0 * rng.uniform() - 1.0);
        w + rng.normal() * std::f64::consts::FRAC_1_SQRT_2
    }

    fn y_factor(&self, v: f64) -> Result<f64> {
        if v == 0.0 {
            return Ok(self.gamma_at_zero);
        }
        upper_gamma_sq(1.0 - self.eta, 0.25, v)
    }

    /// `y | x ~ p₂(x, ·)/p₁(x)`, drawn as `y = x + v` with
    /// `v ∝ e^{-(2x+v)²/4} Γ(1-η, v²/4)`.
    pub fn sample_y(&self, x: f64, rng: &mut RngStream) -> Result<f64> {
        let g = |v: f64| {
            let u = 2.0 * x + v;
            (-0.25 * u * u).exp()
        };
        let density = |v: f64| Ok(g(v) * self.y_factor(v)?);
        let env = self.y_envelope(x, &g)?;
        let v = rejection_sample(density, &Envelope::Grid(env), rng)?.value;
        Ok(x + v)
    }

    fn y_envelope(&self, x: f64, g: &impl Fn(f64) -> f64) -> Result<GridTable> {
        // the product is ≈ e^{-(v+x)²/2}; ±9 around -x leaves < e^{-40}
        let c = -x;
        let singular = self.eta >= 1.0;
        let mut nodes = window_nodes(c, 9.0, 4.0);
        let (lo, hi) = (nodes[0], nodes[nodes.len() - 1]);
        let peak = -2.0 * x;
        if peak > lo && peak < hi {
            nodes.push(peak);
        }
        if self.eta > 0.5 && 0.0 > lo && 0.0 < hi {
            let mut r = Y_CORE;
            while r < 0.25 {
                nodes.push(r);
                nodes.push(-r);
                r *= 1.6;
            }
            nodes.push(0.0);
        }
        nodes.sort_by(f64::total_cmp);
        nodes.dedup();
        let gs: Vec<f64> = nodes.iter().map(|&v| g(v)).collect();
        let fs: Vec<f64> = nodes.iter().map(|&v| self.y_factor(v)).collect::<Result<_>>()?;
        let mut b = GridBuilder::default();
        for i in 0..nodes.len() - 1 {
            let (a, bb) = (nodes[i], nodes[i + 1]);
            let gmax = if a <= peak && peak <= bb { 1.0 } else { gs[i].max(gs[i + 1]) };
            if singular && (a == 0.0 || bb == 0.0) && (bb - a) <= Y_CORE * 1.000001 {
                // E₁(v²/4) < ln(1 + 4/v²) ≤ ln(1 + 4/c²) √(c/|v|) for |v| ≤ c ≪ 1
                let h = (Y_CORE.sqrt() * (4.0 / (Y_CORE * Y_CORE)).ln_1p()) * gmax * BOUND_SLACK;
                b.inv_sqrt(a, bb, h, a == 0.0)?;
                continue;
            }
            let fmax = if a < 0.0 && bb > 0.0 {
                self.gamma_at_zero
            } else if a >= 0.0 {
                fs[i]
            } else {
                fs[i + 1]
            };
            b.flat(a, bb, gmax * fmax * BOUND_SLACK)?;
        }
        b.build()
    }

    /// `t | x, y ∝ e^{-t²/2} J((x-y)² + 2t²)`.
    pub fn sample_t(&self, x: f64, y: f64, rng: &mut RngStream) -> Result<f64> {
        let d = x - y;
        let w = d * d;
        if w == 0.0 && self.eta >= 0.5 {
            return Err(Error::Singular(format!("t | x = y = {x} is not normalizable for eta = {}", self.eta)));
        }
        let eta = self.eta;
        let f = move |t: f64| Ok((-0.5 * t * t).exp() * j_integral(w + 2.0 * t * t, eta)?);
        sample_symmetric_decreasing(f, (0.5 * w).sqrt(), rng)
    }

    /// `s | x, y, t ∝ e^{-s²/2} (a + 2s²)^{-η}` with `a = (x-y)² + 2t²`.
    pub fn sample_s(&self, x: f64, y: f64, t: f64, rng: &mut RngStream) -> Result<f64> {
        let d = x - y;
        let a = d * d + 2.0 * t * t;
        if self.eta == 0.0 {
            return Ok(rng.normal());
        }
        if a == 0.0 {
            return Err(Error::Singular(format!("s | x = y, t = 0 is not normalizable for eta = {}", self.eta)));
        }
        let eta = self.eta;
        let f = move |s: f64| Ok((-0.5 * s * s).exp() * (a + 2.0 * s * s).powf(-eta));
        sample_symmetric_decreasing(f, (0.5 * a).sqrt(), rng)
    }
}

/// Nodes covering `c ± half` with spacing 0.25 inside `c ± core`, 0.5 outside.
fn window_nodes(c: f64, half: f64, core: f64) -> Vec<f64> {
    let mut v = Vec::with_capacity(64);
    let mut u = -half;
    while u < half {
        v.push(c + u);
        u += if u.abs() < core { 0.25 } else { 0.5 };
    }
    v.push(c + half);
    v
}

/// Draw from a density on ℝ that is even and non-increasing in `|t|`.
///
/// `scale` is where the density may change on a small scale near zero; the
/// grid is graded geometrically down to an eighth of it.
fn sample_symmetric_decreasing(f: impl Fn(f64) -> Result<f64>, scale: f64, rng: &mut RngStream) -> Result<f64> {
    let mut nodes = vec![0.0];
    if scale < 0.25 {
        let mut r = scale / 8.0;
        while r < 0.25 {
            nodes.push(r);
            r *= 1.6;
        }
    }
    let mut r = 0.25;
    while r < 8.0 {
        nodes.push(r);
        r += if r < 4.0 { 0.25 } else { 0.5 };
    }
    nodes.push(8.0);
    let vals: Vec<f64> = nodes.iter().map(|&t| f(t)).collect::<Result<_>>()?;
    if !vals[0].is_finite() {
        return Err(Error::Singular("conditional density is unbounded at 0".into()));
    }
    let heights: Vec<f64> = vals[..vals.len() - 1].iter().map(|v| v * BOUND_SLACK).collect();
    let env = Envelope::Grid(GridTable::from_heights(&nodes, &heights)?);
    let t = rejection_sample(&f, &env, rng)?.value;
    Ok(rng.sign() * t)
}

/// One entry-chain draw at `η ∈ [0, 1]`.
pub fn sample_entries_gaussian(eta: f64, rng: &mut RngStream) -> Result<HermitianEntries> {
    GaussianEntrySampler::new(eta)?.sample(rng)
}
