use super::{Histogram, NumericsError};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GofStats {
    pub ks_distance: f64,
    /// Largest bin deviation of a histogram from the bin-averaged model pdf;
    /// zero when no histogram was supplied.
    pub sup_norm_vs_curve: f64,
    pub n: usize,
}

/// Kolmogorov–Smirnov distance `max(D+, D-)` between the empirical
/// distribution of `data` and `cdf`.
///
/// The empirical CDF is right-continuous and `cdf` is evaluated only at the
/// sample points, so `D- = max F(x_(i)) - (i-1)/n` sees a jump of `cdf` at a
/// sample point in full: `data = {0}` against the unit step at 0 gives 1.
pub fn ks_distance(data: &[f64], mut cdf: impl FnMut(f64) -> f64) -> Result<GofStats, NumericsError> {
    if data.is_empty() {
        return Err(NumericsError::EmptyData);
    }
    if data.iter().any(|x| x.is_nan()) {
        return Err(NumericsError::Invalid("NaN in data".into()));
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x).clamp(0.0, 1.0);
        let dp = (i as f64 + 1.0) / n - f;
        let dm = f - i as f64 / n;
        d = d.max(dp).max(dm);
    }
    Ok(GofStats { ks_distance: d.clamp(0.0, 1.0), sup_norm_vs_curve: 0.0, n: sorted.len() })
}

/// KS distance plus the sup-norm of `hist` against bin averages of the model
/// pdf, renormalized to the histogram range.
pub fn gof_stats(data: &[f64], mut cdf: impl FnMut(f64) -> f64, hist: &Histogram) -> Result<GofStats, NumericsError> {
    let mut g = ks_distance(data, &mut cdf)?;
    let edges = &hist.bin_edges;
    let lo = cdf(edges[0]);
    let hi = cdf(edges[edges.len() - 1]);
    let mass = hi - lo;
    if !(mass > 0.0) {
        return Err(NumericsError::Invalid("model has no mass on histogram range".into()));
    }
    let mut sup: f64 = 0.0;
    let mut prev = lo;
    for i in 0..hist.n_bins() {
        let next = cdf(edges[i + 1]);
        let model = (next - prev) / (mass * hist.width(i));
        sup = sup.max((hist.normalized_heights[i] - model).abs());
        prev = next;
    }
    g.sup_norm_vs_curve = sup;
    Ok(g)
}
