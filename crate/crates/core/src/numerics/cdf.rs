use super::quad::{try_integrate, Domain, QuadratureSpec};
use super::NumericsError;

/// Cumulative distribution of a density on `[lo, hi]`, from per-cell quadrature
/// on a uniform grid. Between nodes it uses cubic Hermite interpolation when
/// the density is finite at both ends of the cell, linear otherwise. The
/// table is renormalized so that `cdf(hi) = 1`.
#[derive(Debug, Clone)]
pub struct TabulatedCdf {
    lo: f64,
    hi: f64,
    step: f64,
    // node abscissae when the grid is not uniform
    xs: Option<Vec<f64>>,
    cum: Vec<f64>,
    pdf: Vec<f64>,
    mass: f64,
}

impl TabulatedCdf {
    pub fn new<E: From<NumericsError>>(
        mut pdf: impl FnMut(f64) -> Result<f64, E>,
        lo: f64,
        hi: f64,
        cells: usize,
        singular_points: &[f64],
    ) -> Result<Self, E> {
        if !(lo < hi) || cells == 0 {
            return Err(NumericsError::Invalid(format!("cdf table on ({lo}, {hi}) with {cells} cells")).into());
        }
        let step = (hi - lo) / cells as f64;
        let spec = QuadratureSpec::default().with_rel_tol(1e-10).with_abs_tol(1e-300);
        let mut cum = Vec::with_capacity(cells + 1);
        let mut nodes_pdf = Vec::with_capacity(cells + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for i in 0..=cells {
            let x = lo + i as f64 * step;
            let is_singular = singular_points.iter().any(|&p| (p - x).abs() < 1e-12 * step);
            let v = if is_singular { f64::INFINITY } else { pdf(x)? };
            nodes_pdf.push(v);
            if i == cells {
                break;
            }
            let a = x;
            let b = lo + (i + 1) as f64 * step;
            let sing = super::Singular {
                lower: singular_points.iter().any(|&p| (p - a).abs() < 1e-12 * step),
                upper: singular_points.iter().any(|&p| (p - b).abs() < 1e-12 * step),
            };
            let r = try_integrate(&mut pdf, Domain::Finite(a, b), &spec.singular(sing))?;
            acc += r.value;
            cum.push(acc);
        }
        Ok(TabulatedCdf { lo, hi, step, xs: None, cum, pdf: nodes_pdf, mass: acc })
    }

    /// Table from CDF values on a uniform grid over `[lo, hi]`, with
    /// monotone (Fritsch–Carlson) slopes in place of density values.
    pub fn from_values(lo: f64, hi: f64, cum: Vec<f64>) -> Result<Self, NumericsError> {
        if !(lo < hi) || cum.len() < 2 {
            return Err(NumericsError::Invalid("cdf values need lo < hi and at least two nodes".into()));
        }
        let n = cum.len();
        let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        let mut t = Self::from_nodes(&xs, cum)?;
        t.xs = None;
        Ok(t)
    }

    /// Table from CDF values at increasing nodes `xs`, with monotone
    /// piecewise-cubic interpolation. Clustering nodes where the CDF has a
    /// power-law onset keeps the interpolant accurate there.
    pub fn from_nodes(xs: &[f64], cum: Vec<f64>) -> Result<Self, NumericsError> {
        let n = cum.len();
        if n < 2 || xs.len() != n || cum.iter().chain(xs).any(|v| !v.is_finite()) {
            return Err(NumericsError::Invalid("cdf values need at least two finite, matched nodes".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(NumericsError::Invalid("cdf nodes must be strictly increasing".into()));
        }
        if cum.windows(2).any(|w| w[1] < w[0]) {
            return Err(NumericsError::Invalid("cdf values must be non-decreasing".into()));
        }
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let d: Vec<f64> = cum.windows(2).zip(&h).map(|(w, h)| (w[1] - w[0]) / h).collect();
        let mut m = vec![0.0; n];
        m[0] = d[0];
        m[n - 1] = d[n - 2];
        for i in 1..n - 1 {
            m[i] = if d[i - 1] * d[i] <= 0.0 {
                0.0
            } else {
                // weighted harmonic mean, the non-uniform Fritsch–Carlson form
                let (w1, w2) = (2.0 * h[i] + h[i - 1], h[i] + 2.0 * h[i - 1]);
                (w1 + w2) / (w1 / d[i - 1] + w2 / d[i])
            };
        }
        Self::from_nodes_with_density(xs, cum, m)
    }

    /// Table from CDF values and exact density values at increasing nodes;
    /// cubic Hermite between them.
    pub fn from_nodes_with_density(xs: &[f64], cum: Vec<f64>, pdf: Vec<f64>) -> Result<Self, NumericsError> {
        let n = cum.len();
        if n < 2 || xs.len() != n || pdf.len() != n || cum.iter().chain(xs).any(|v| !v.is_finite()) {
            return Err(NumericsError::Invalid("cdf values need at least two finite, matched nodes".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(NumericsError::Invalid("cdf nodes must be strictly increasing".into()));
        }
        let base = cum[0];
        let cum: Vec<f64> = cum.iter().map(|v| v - base).collect();
        let mass = cum[n - 1];
        if !(mass > 0.0) {
            return Err(NumericsError::Invalid("cdf values carry no mass".into()));
        }
        let (lo, hi) = (xs[0], xs[n - 1]);
        Ok(TabulatedCdf { lo, hi, step: (hi - lo) / (n - 1) as f64, xs: Some(xs.to_vec()), cum, pdf, mass })
    }

    /// Mass of the density on the tabulated range before renormalization.
    pub fn raw_mass(&self) -> f64 {
        self.mass
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.lo {
            return 0.0;
        }
        if x >= self.hi {
            return 1.0;
        }
        let (i, h, tau) = match &self.xs {
            None => {
                let u = (x - self.lo) / self.step;
                let i = (u.floor() as usize).min(self.cum.len() - 2);
                (i, self.step, u - i as f64)
            }
            Some(xs) => {
                let i = (xs.partition_point(|&v| v <= x) - 1).min(xs.len() - 2);
                let h = xs[i + 1] - xs[i];
                (i, h, (x - xs[i]) / h)
            }
        };
        let tau = tau.clamp(0.0, 1.0);
        let (f0, f1) = (self.cum[i], self.cum[i + 1]);
        let (d0, d1) = (self.pdf[i], self.pdf[i + 1]);
        let v = if d0.is_finite() && d1.is_finite() {
            let t2 = tau * tau;
            let t3 = t2 * tau;
            let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
            let h10 = t3 - 2.0 * t2 + tau;
            let h01 = -2.0 * t3 + 3.0 * t2;
            let h11 = t3 - t2;
            h00 * f0 + h10 * h * d0 + h01 * f1 + h11 * h * d1
        } else {
            f0 + tau * (f1 - f0)
        };
        (v / self.mass).clamp(0.0, 1.0)
    }
}
