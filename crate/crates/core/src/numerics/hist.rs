use super::NumericsError;
use serde::Serialize;

/// Fixed-width histogram with explicit out-of-range accounting.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// In-range count, `Σ counts`.
    pub total: u64,
    pub below: u64,
    pub above: u64,
    /// Density normalization over the in-range data.
    pub normalized_heights: Vec<f64>,
}

impl Histogram {
    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    pub fn width(&self, i: usize) -> f64 {
        self.bin_edges[i + 1] - self.bin_edges[i]
    }

    pub fn centers(&self) -> Vec<f64> {
        self.bin_edges.windows(2).map(|e| 0.5 * (e[0] + e[1])).collect()
    }
}

/// Bin `data` into `n_bins` equal bins on `[lo, hi]`; the value `hi` falls in
/// the last bin.
///
/// ```
/// let h = etaue::numerics::build_histogram(&[0.5], 1, (0.0, 1.0)).unwrap();
/// assert_eq!(h.counts, vec![1]);
/// assert_eq!(h.normalized_heights, vec![1.0]);
/// ```
pub fn build_histogram(data: &[f64], n_bins: usize, range: (f64, f64)) -> Result<Histogram, NumericsError> {
    let (lo, hi) = range;
    if data.is_empty() {
        return Err(NumericsError::EmptyData);
    }
    if n_bins == 0 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(NumericsError::Invalid(format!("histogram with {n_bins} bins on ({lo}, {hi})")));
    }
    let width = (hi - lo) / n_bins as f64;
    let bin_edges: Vec<f64> = (0..=n_bins).map(|i| if i == n_bins { hi } else { lo + i as f64 * width }).collect();
    let mut counts = vec![0u64; n_bins];
    let (mut below, mut above) = (0, 0);
    for &x in data {
        if x.is_nan() {
            return Err(NumericsError::Invalid("NaN in histogram data".into()));
        }
        if x < lo {
            below += 1;
        } else if x > hi {
            above += 1;
        } else {
            let mut i = (((x - lo) / width) as usize).min(n_bins - 1);
            // floating-point edge corrections
            while i > 0 && x < bin_edges[i] {
                i -= 1;
            }
            while i + 1 < n_bins && x >= bin_edges[i + 1] {
                i += 1;
            }
            counts[i] += 1;
        }
    }
    let total: u64 = counts.iter().sum();
    let normalized_heights = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| if total == 0 { 0.0 } else { c as f64 / (total as f64 * (bin_edges[i + 1] - bin_edges[i])) })
        .collect();
    Ok(Histogram { bin_edges, counts, total, below, above, normalized_heights })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn out_of_range_reported() {
        let h = build_histogram(&[-1.0, 0.2, 0.7, 1.0, 3.0], 2, (0.0, 1.0)).unwrap();
        assert_eq!(h.counts, vec![1, 2]);
        assert_eq!((h.below, h.above, h.total), (1, 1, 3));
    }

    #[test]
    fn uniform_grid_is_flat() {
        let data: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let h = build_histogram(&data, 10, (0.0, 1.0)).unwrap();
        for &v in &h.normalized_heights {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_and_invalid() {
        assert_eq!(build_histogram(&[], 3, (0.0, 1.0)), Err(NumericsError::EmptyData));
        assert!(build_histogram(&[0.1], 0, (0.0, 1.0)).is_err());
        assert!(build_histogram(&[0.1], 2, (1.0, 1.0)).is_err());
    }
}
