//! The generalized Bessel weight: the interpolating function `φ_η`, the
//! Poisson–Wigner gap law, its saddle-point tail and the spectral density in
//! direct and reduced forms.

use crate::error::{domain, Error, Result};
use crate::numerics::{try_integrate, Domain, QuadratureSpec, Singular, TabulatedCdf};
use crate::specfun::{gamma, gamma_p, kummer_1f1_scaled};
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselWeightParams {
    pub eta: f64,
    pub alpha: f64,
    pub zeta: f64,
    pub b_norm: f64,
}

impl BesselWeightParams {
    pub fn new(eta: f64, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(domain(format!("Bessel weight needs eta in [0, 1], got {eta}")));
        }
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(domain(format!("alpha must be positive, got {alpha}")));
        }
        Ok(BesselWeightParams { eta, alpha, zeta: 2.0 * eta - 1.0, b_norm: 1.0 })
    }

    /// Exponent of the eigenvalue coupling, `2 - 2η = 1 - ζ`.
    pub fn beta(&self) -> f64 {
        2.0 - 2.0 * self.eta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMethod {
    Direct,
    Reduced,
}

/// At `η = 1`, `φ` has a log singularity at 0; the integrands below skip
/// `|x| < TINY_X`, which carries mass below `1e-97`.
const TINY_X: f64 = 1e-100;

fn near_log_pole(x: f64, zeta: f64) -> bool {
    zeta >= 1.0 && x.abs() < TINY_X
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default().with_rel_tol(1e-11).with_abs_tol(1e-300)
}

fn outer_spec() -> QuadratureSpec {
    QuadratureSpec::default().with_rel_tol(1e-9).with_abs_tol(1e-300)
}

/// Integrate over `t ∈ (0, ∞)` split at `8α`, with the `t → 0` end declared
/// singular when `singular` holds.
fn t_integral(f: impl FnMut(f64) -> Result<f64>, alpha: f64, singular: bool, spec: &QuadratureSpec) -> Result<f64> {
    let mut f = f;
    let knee = 8.0 * alpha;
    let s = if singular { Singular::LOWER } else { Singular::NONE };
    let head = try_integrate(&mut f, Domain::Finite(0.0, knee), &spec.singular(s))?;
    let tail = try_integrate(&mut f, Domain::HalfLine(knee), spec)?;
    Ok(head.value + tail.value)
}

/// `φ(x) = B ∫_0^∞ t^{-ζ} exp(-t/(8α) - 2αx² t^{-ζ}) dt`.
pub fn phi(x: f64, p: &BesselWeightParams) -> Result<f64> {
    let z = p.zeta;
    let x2 = x * x;
    if near_log_pole(x, z) {
        return Err(Error::Singular("phi diverges at x = 0 for eta = 1".into()));
    }
    let a8 = 1.0 / (8.0 * p.alpha);
    let c = 2.0 * p.alpha * x2;
    let f = |t: f64| -> Result<f64> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        let tz = t.powf(-z);
        Ok((-z * t.ln() - t * a8 - c * tz).exp())
    };
    if z < 0.0 && c > 0.0 {
        // for large |x| the mass sits below t* = c^{1/ζ}, where c t^{-ζ} = 1
        let ts = c.powf(1.0 / z);
        if ts < 8.0 * p.alpha {
            let sp = spec();
            let mut f = f;
            let a = try_integrate(&mut f, Domain::Finite(0.0, ts), &sp)?.value;
            let b = try_integrate(&mut f, Domain::Finite(ts, 8.0 * p.alpha), &sp)?.value;
            let t = try_integrate(&mut f, Domain::HalfLine(8.0 * p.alpha), &sp)?.value;
            return Ok(p.b_norm * (a + b + t));
        }
    }
    Ok(p.b_norm * t_integral(f, p.alpha, z > 0.0, &spec())?)
}

/// Saddle-point tail shape `exp[-η (2η-1)^{-1+1/(2η)} (2α)^{-1+1/η} s^{1/η}]`,
/// valid for `η ∈ [1/2, 1]`.
pub fn gap_tail_bessel(s: f64, p: &BesselWeightParams) -> Result<f64> {
    let eta = p.eta;
    if eta < 0.5 {
        return Err(domain(format!("the saddle-point tail needs eta >= 1/2, got {eta}")));
    }
    let e1 = -1.0 + 1.0 / (2.0 * eta);
    let base = if e1 == 0.0 { 1.0 } else { (2.0 * eta - 1.0).powf(e1) };
    let a = eta * base * (2.0 * p.alpha).powf(-1.0 + 1.0 / eta);
    Ok((-a * s.abs().powf(1.0 / eta)).exp())
}

/// Evaluator with write-once normalization caches.
#[derive(Debug)]
pub struct BesselModel {
    p: BesselWeightParams,
    z_joint: OnceLock<f64>,
    z_reduced: OnceLock<f64>,
}

fn cached(cell: &OnceLock<f64>, f: impl FnOnce() -> Result<f64>) -> Result<f64> {
    if let Some(v) = cell.get() {
        return Ok(*v);
    }
    let v = f()?;
    Ok(*cell.get_or_init(|| v))
}

impl BesselModel {
    pub fn new(p: BesselWeightParams) -> Self {
        BesselModel { p, z_joint: OnceLock::new(), z_reduced: OnceLock::new() }
    }

    pub fn params(&self) -> &BesselWeightParams {
        &self.p
    }

    pub fn phi(&self, x: f64) -> Result<f64> {
        phi(x, &self.p)
    }

    /// `G(s) = ∫ φ(λ) φ(λ+s) dλ = 2 ∫_0^∞ φ(λ - s/2) φ(λ + s/2) dλ`.
    pub fn overlap(&self, s: f64) -> Result<f64> {
        let h = 0.5 * s.abs();
        let f = |l: f64| -> Result<f64> {
            let a = l - h;
            if near_log_pole(a, self.p.zeta) {
                return Ok(0.0);
            }
            Ok(self.phi(a)? * self.phi(l + h)?)
        };
        let log_sing = self.p.zeta >= 1.0;
        let sp = outer_spec();
        let mut total = 0.0;
        if h > 0.0 {
            let s1 = Singular { lower: false, upper: log_sing };
            total += try_integrate(f, Domain::Finite(0.0, h), &sp.singular(s1))?.value;
        }
        let s2 = if log_sing { Singular::LOWER } else { Singular::NONE };
        total += try_integrate(f, Domain::HalfLine(h), &sp.singular(s2))?.value;
        Ok(2.0 * total)
    }

    /// `∬ φ(λ₁) φ(λ₂) |λ₁-λ₂|^β`, from the Gaussian-mixture form of `φ`,
    /// which leaves a smooth double integral over the mixture variables.
    pub fn z_joint(&self) -> Result<f64> {
        cached(&self.z_joint, || {
            let p = self.p;
            let (z, beta) = (p.zeta, p.beta());
            let a8 = 1.0 / (8.0 * p.alpha);
            let inner = |t1: f64| -> Result<f64> {
                if t1 <= 0.0 {
                    return Ok(0.0);
                }
                let t1z = t1.powf(z);
                let g = |t2: f64| -> Result<f64> {
                    if t2 <= 0.0 {
                        return Ok(0.0);
                    }
                    let lw = -0.5 * z * (t1.ln() + t2.ln()) - (t1 + t2) * a8;
                    Ok(lw.exp() * (t1z + t2.powf(z)).powf(0.5 * beta))
                };
                t_integral(g, p.alpha, z > 0.0, &spec())
            };
            let i = t_integral(inner, p.alpha, z > 0.0, &outer_spec())?;
            let pref =
                p.b_norm * p.b_norm * PI.sqrt() * gamma(0.5 * (beta + 1.0))? * (2.0 * p.alpha).powf(-1.0 - 0.5 * beta);
            Ok(pref * i)
        })
    }

    /// Normalized gap density `s^β G(s) / Z_gap` with `Z_gap = Z_joint / 2`.
    pub fn gap_probability(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(domain(format!("spacing s = {s} must be non-negative")));
        }
        let beta = self.p.beta();
        let pw = if beta == 0.0 { 1.0 } else { s.powf(beta) };
        if pw == 0.0 {
            return Ok(0.0);
        }
        Ok(pw * self.overlap(s)? * 2.0 / self.z_joint()?)
    }

    /// Normalized eigenvalue jpd.
    pub fn jpd(&self, l1: f64, l2: f64) -> Result<f64> {
        let beta = self.p.beta();
        let d = (l1 - l2).abs();
        let pw = if beta == 0.0 { 1.0 } else { d.powf(beta) };
        Ok(self.phi(l1)? * self.phi(l2)? * pw / self.z_joint()?)
    }

    /// `H(λ) = ∫ φ(y) |λ - y|^β dy`.
    fn coupling(&self, lambda: f64) -> Result<f64> {
        let beta = self.p.beta();
        let f = |y: f64| -> Result<f64> {
            if near_log_pole(y, self.p.zeta) {
                return Ok(0.0);
            }
            let d = (lambda - y).abs();
            let pw = if beta == 0.0 { 1.0 } else { d.powf(beta) };
            Ok(self.phi(y)? * pw)
        };
        let log_sing = self.p.zeta >= 1.0;
        let sp = outer_spec();
        let (lo, hi) = if lambda < 0.0 { (lambda, 0.0) } else { (0.0, lambda) };
        let mut total = 0.0;
        // (-∞, lo]: mirror onto [-lo, ∞)
        let left = |u: f64| f(-u);
        let s_lo = Singular { lower: log_sing && lo == 0.0, upper: false };
        total += try_integrate(left, Domain::HalfLine(-lo), &sp.singular(s_lo))?.value;
        if hi > lo {
            let s_mid = Singular { lower: log_sing && lo == 0.0, upper: log_sing && hi == 0.0 };
            total += try_integrate(f, Domain::Finite(lo, hi), &sp.singular(s_mid))?.value;
        }
        let s_hi = Singular { lower: log_sing && hi == 0.0, upper: false };
        total += try_integrate(f, Domain::HalfLine(hi), &sp.singular(s_hi))?.value;
        Ok(total)
    }

    /// Single-integral form of the coupling,
    /// `R(λ) = ∫_0^∞ t^{-ζ²/2} e^{-t/(8α)} e^{-z} M(1-ζ/2, 1/2, z) dt`, `z = 2αλ² t^{-ζ}`.
    /// It equals `H(λ)` up to a `λ`-independent factor.
    pub fn reduced_coupling(&self, lambda: f64) -> Result<f64> {
        let p = self.p;
        let z = p.zeta;
        let a8 = 1.0 / (8.0 * p.alpha);
        let l2 = lambda * lambda;
        let f = |t: f64| -> Result<f64> {
            if t <= 0.0 {
                return Ok(0.0);
            }
            let arg = 2.0 * p.alpha * l2 * t.powf(-z);
            let m = kummer_1f1_scaled(1.0 - 0.5 * z, 0.5, arg)?;
            Ok((-0.5 * z * z * t.ln() - t * a8).exp() * m)
        };
        t_integral(f, p.alpha, z > 0.0, &spec())
    }

    fn unnormalized_reduced(&self, lambda: f64) -> Result<f64> {
        Ok(self.phi(lambda)? * self.reduced_coupling(lambda)?)
    }

    /// `∫ φ R dλ`, the normalization of the reduced form.
    pub fn z_reduced(&self) -> Result<f64> {
        cached(&self.z_reduced, || {
            let log_sing = self.p.zeta >= 1.0;
            let f = |l: f64| if near_log_pole(l, self.p.zeta) { Ok(0.0) } else { self.unnormalized_reduced(l) };
            let s = if log_sing { Singular::LOWER } else { Singular::NONE };
            Ok(2.0 * try_integrate(f, Domain::HalfLine(0.0), &outer_spec().singular(s))?.value)
        })
    }

    pub fn spectral_density(&self, lambda: f64, method: DensityMethod) -> Result<f64> {
        match method {
            DensityMethod::Direct => Ok(self.phi(lambda)? * self.coupling(lambda)? / self.z_joint()?),
            DensityMethod::Reduced => Ok(self.unnormalized_reduced(lambda)? / self.z_reduced()?),
        }
    }

    /// Upper end of a spacing range that holds all but a negligible tail.
    pub fn spacing_cutoff(&self) -> f64 {
        let eta = self.p.eta.max(0.5);
        let q = BesselWeightParams { eta, ..self.p };
        // solve A s^{1/η} = 40 for the tail shape, padded
        let a = -gap_tail_bessel(1.0, &q).unwrap_or(f64::MIN_POSITIVE).ln();
        1.25 * (40.0 / a).powf(eta) + 2.0
    }

    /// `∫_0^S P(s) ds` from the mixture form of `φ`: per mixture pair the
    /// spacing integral is an incomplete gamma function, leaving a smooth
    /// double integral over `t₁, t₂`.
    pub fn gap_distribution(&self, s_max: f64) -> Result<f64> {
        if !(s_max >= 0.0) {
            return Err(domain(format!("spacing s = {s_max} must be non-negative")));
        }
        if s_max == 0.0 {
            return Ok(0.0);
        }
        let p = self.p;
        let (z, beta) = (p.zeta, p.beta());
        let h = 0.5 * (beta + 1.0);
        let a8 = 1.0 / (8.0 * p.alpha);
        let s2 = s_max * s_max;
        let inner = |t1: f64| -> Result<f64> {
            if t1 <= 0.0 {
                return Ok(0.0);
            }
            let (u1, l1) = (t1.powf(z), t1.ln());
            let g = |t2: f64| -> Result<f64> {
                if t2 <= 0.0 {
                    return Ok(0.0);
                }
                // c = 2α t^{-ζ}; γ = c₁c₂/(c₁+c₂) = 2α/(t₁^ζ + t₂^ζ)
                let (u2, l2) = (t2.powf(z), t2.ln());
                let ln_sum_c = (2.0 * p.alpha).ln() + (1.0 / u1 + 1.0 / u2).ln();
                let ln_gm = (2.0 * p.alpha).ln() - (u1 + u2).ln();
                let lw = -z * (l1 + l2) - (t1 + t2) * a8 - 0.5 * ln_sum_c - h * ln_gm;
                let w = lw.exp();
                if w == 0.0 {
                    return Ok(0.0);
                }
                let arg = ln_gm.exp() * s2;
                let pg = if arg.is_finite() { gamma_p(h, arg)? } else { 1.0 };
                Ok(w * pg)
            };
            t_integral(g, p.alpha, z > 0.0, &spec())
        };
        let i = t_integral(inner, p.alpha, z > 0.0, &outer_spec())?;
        let pref = p.b_norm * p.b_norm * PI.sqrt() * gamma(h)?;
        Ok((pref * i / self.z_joint()?).min(1.0))
    }

    /// CDF of the gap law on `[0, spacing_cutoff]`, interpolated from
    /// `nodes + 1` values of [`BesselModel::gap_distribution`].
    ///
    /// Nodes are spaced quadratically, since the CDF starts like `s^{β+1}`,
    /// and the cubic pieces use the exact density as slope.
    pub fn gap_cdf(&self, nodes: usize) -> Result<TabulatedCdf> {
        let hi = self.spacing_cutoff();
        let xs: Vec<f64> = (0..=nodes).map(|i| hi * (i as f64 / nodes as f64).powi(2)).collect();
        let vals: Vec<f64> = xs.iter().map(|&s| self.gap_distribution(s)).collect::<Result<_>>()?;
        let dens: Vec<f64> = xs.iter().map(|&s| self.gap_probability(s)).collect::<Result<_>>()?;
        Ok(TabulatedCdf::from_nodes_with_density(&xs, vals, dens)?)
    }

    /// Tabulated CDF of the spectral density on `[-L, L]`.
    pub fn density_cdf(&self, half_width: f64, cells: usize, method: DensityMethod) -> Result<TabulatedCdf> {
        let sing: &[f64] = if self.p.zeta >= 1.0 { &[0.0] } else { &[] };
        TabulatedCdf::new(|l| self.spectral_density(l, method), -half_width, half_width, cells, sing)
    }
}

/// Result of fitting `ln P(s) = d + c ln s - A s^p` on a spacing window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailFit {
    pub exponent: f64,
    pub coefficient: f64,
    pub log_power: f64,
    pub constant: f64,
    pub residual: f64,
}

fn solve3(mut m: [[f64; 3]; 3], mut v: [f64; 3]) -> [f64; 3] {
    for k in 0..3 {
        let piv = (k..3).max_by(|&i, &j| m[i][k].abs().total_cmp(&m[j][k].abs())).unwrap_or(k);
        m.swap(k, piv);
        v.swap(k, piv);
        for i in k + 1..3 {
            let f = m[i][k] / m[k][k];
            for j in k..3 {
                m[i][j] -= f * m[k][j];
            }
            v[i] -= f * v[k];
        }
    }
    let mut c = [0.0; 3];
    for i in (0..3).rev() {
        let mut acc = v[i];
        for j in i + 1..3 {
            acc -= m[i][j] * c[j];
        }
        c[i] = acc / m[i][i];
    }
    c
}

fn fit_at(p: f64, s: &[f64], y: &[f64]) -> ([f64; 3], f64) {
    let rows: Vec<[f64; 3]> = s.iter().map(|&s| [1.0, s.ln(), -s.powf(p)]).collect();
    let mut a = [[0.0; 3]; 3];
    let mut b = [0.0; 3];
    for (r, &yv) in rows.iter().zip(y) {
        for i in 0..3 {
            b[i] += r[i] * yv;
            for j in 0..3 {
                a[i][j] += r[i] * r[j];
            }
        }
    }
    let c = solve3(a, b);
    let res = rows
        .iter()
        .zip(y)
        .map(|(r, &yv)| {
            let e = c[0] * r[0] + c[1] * r[1] + c[2] * r[2] - yv;
            e * e
        })
        .sum();
    (c, res)
}

/// Fit the stretched-exponential tail of `ln P` on the points `(s, ln P)`.
///
/// The algebraic prefactor the saddle-point formula leaves out is absorbed
/// by the `c ln s + d` terms, so only the exponent is meaningful.
pub fn fit_tail_exponent(s: &[f64], log_p: &[f64]) -> Result<TailFit> {
    if s.len() < 5 || s.len() != log_p.len() {
        return Err(domain("tail fit needs at least five matched points"));
    }
    let mut best = (f64::INFINITY, 1.0);
    let mut p = 0.5;
    while p <= 3.0 {
        let (_, r) = fit_at(p, s, log_p);
        if r < best.0 {
            best = (r, p);
        }
        p += 0.01;
    }
    // golden-section refinement around the grid minimum
    let (mut lo, mut hi) = (best.1 - 0.01, best.1 + 0.01);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..60 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if fit_at(a, s, log_p).1 < fit_at(b, s, log_p).1 {
            hi = b;
        } else {
            lo = a;
        }
    }
    let p = 0.5 * (lo + hi);
    let (c, r) = fit_at(p, s, log_p);
    Ok(TailFit { exponent: p, coefficient: c[2], log_power: c[1], constant: c[0], residual: r })
}

impl BesselModel {
    /// Tail fit of this model's gap law on `n` equally spaced points of `[lo, hi]`.
    pub fn tail_fit(&self, lo: f64, hi: f64, n: usize) -> Result<TailFit> {
        let s: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        let y = s.iter().map(|&v| Ok(self.gap_probability(v)?.ln())).collect::<Result<Vec<f64>>>()?;
        fit_tail_exponent(&s, &y)
    }
}

pub fn gap_probability_bessel(s: f64, p: &BesselWeightParams) -> Result<f64> {
    BesselModel::new(*p).gap_probability(s)
}

pub fn spectral_density_bessel(lambda: f64, p: &BesselWeightParams, method: DensityMethod) -> Result<f64> {
    BesselModel::new(*p).spectral_density(lambda, method)
}
