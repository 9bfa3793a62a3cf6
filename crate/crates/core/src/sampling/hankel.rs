use crate::error::{domain, Result};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Double-double number `hi + lo`, about 32 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let (hi, lo) = quick_two_sum(p, e + (self.hi * o.lo + self.lo * o.hi));
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        // two Newton-style correction steps on the leading quotient
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// `M[i][j] = s_{i+j}` with `s_k = Σ λᵢ^k` and `s₀ = n`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelMomentMatrix {
    pub n: usize,
    /// `s_1 … s_{2(n-1)}`.
    pub power_sums: Vec<f64>,
    pub entries: Vec<Vec<f64>>,
    // the same power sums carried in double-double
    exact: Vec<Dd>,
}

impl HankelMomentMatrix {
    pub fn new(eigenvalues: &[f64]) -> Result<Self> {
        let n = eigenvalues.len();
        if !(2..=8).contains(&n) {
            return Err(domain(format!("power-sum determinant supports 2 <= n <= 8, got {n}")));
        }
        if eigenvalues.iter().any(|l| !l.is_finite()) {
            return Err(domain("eigenvalues must be finite"));
        }
        let kmax = 2 * (n - 1);
        let mut exact = vec![Dd::new(0.0); kmax + 1];
        for &l in eigenvalues {
            let l = Dd::new(l);
            let mut p = Dd::new(1.0);
            for s in exact.iter_mut() {
                *s = *s + p;
                p = p * l;
            }
        }
        let entries = (0..n).map(|i| (0..n).map(|j| exact[i + j].to_f64()).collect()).collect();
        let power_sums = exact[1..].iter().map(|s| s.to_f64()).collect();
        Ok(HankelMomentMatrix { n, power_sums, entries, exact })
    }

    /// Determinant by Gaussian elimination with partial pivoting in
    /// double-double; plain `f64` loses most digits to cancellation by `n = 5`.
    pub fn determinant(&self) -> f64 {
        let n = self.n;
        let mut a: Vec<Vec<Dd>> = (0..n).map(|i| (0..n).map(|j| self.exact[i + j]).collect()).collect();
        let mut det = Dd::new(1.0);
        for k in 0..n {
            let piv = (k..n).max_by(|&i, &j| a[i][k].hi.abs().total_cmp(&a[j][k].hi.abs())).unwrap();
            if a[piv][k].hi == 0.0 {
                return 0.0;
            }
            if piv != k {
                a.swap(piv, k);
                det = -det;
            }
            det = det * a[k][k];
            for i in k + 1..n {
                let m = a[i][k] / a[k][k];
                for j in k..n {
                    let v = a[k][j] * m;
                    a[i][j] = a[i][j] - v;
                }
            }
        }
        det.to_f64()
    }
}

/// `∏_{j<k} (λⱼ - λₖ)²`.
pub fn vandermonde_squared(eigenvalues: &[f64]) -> f64 {
    let mut p = 1.0;
    for j in 0..eigenvalues.len() {
        for k in j + 1..eigenvalues.len() {
            let d = eigenvalues[j] - eigenvalues[k];
            p *= d * d;
        }
    }
    p
}

/// Determinant of the power-sum Hankel matrix and the squared Vandermonde
/// product it should equal.
///
/// ```
/// let (det, vdm) = etaue::sampling::vandermonde_power_sum_det(&[0.0, 2.0], 2).unwrap();
/// assert_eq!((det, vdm), (4.0, 4.0));
/// ```
pub fn vandermonde_power_sum_det(eigenvalues: &[f64], n: usize) -> Result<(f64, f64)> {
    if eigenvalues.len() != n {
        return Err(domain(format!("expected {n} eigenvalues, got {}", eigenvalues.len())));
    }
    let m = HankelMomentMatrix::new(eigenvalues)?;
    Ok((m.determinant(), vandermonde_squared(eigenvalues)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::RngStream;

    #[test]
    fn double_double_arithmetic() {
        let third = Dd::new(1.0) / Dd::new(3.0);
        let r = third * Dd::new(3.0) - Dd::new(1.0);
        assert!(r.to_f64().abs() < 1e-31);
        let x = Dd::new(0.1);
        let e = x * x - Dd::new(0.1 * 0.1);
        // 0.1² in binary differs from the rounded product by a known residual
        assert_eq!(e.to_f64(), 0.1f64.mul_add(0.1, -(0.1 * 0.1)));
    }

    #[test]
    fn two_by_two() {
        let m = HankelMomentMatrix::new(&[0.0, 2.0]).unwrap();
        assert_eq!(m.entries, vec![vec![2.0, 2.0], vec![2.0, 4.0]]);
        // det = 2 s₂ - s₁² = vstar for n = 2
        let (a, b) = (0.3, -1.9);
        let (det, vdm) = vandermonde_power_sum_det(&[a, b], 2).unwrap();
        let s1: f64 = a + b;
        let s2 = a * a + b * b;
        assert!((det - (2.0 * s2 - s1 * s1)).abs() < 1e-14);
        assert!((det - vdm).abs() < 1e-14);
    }

    #[test]
    fn random_sets_agree() {
        let mut rng = RngStream::new(12, 0);
        for n in 2..=8 {
            for _ in 0..50 {
                let l: Vec<f64> = (0..n).map(|_| 4.0 * rng.uniform() - 2.0).collect();
                let (det, vdm) = vandermonde_power_sum_det(&l, n).unwrap();
                assert!(((det - vdm) / vdm).abs() < 1e-9, "n = {n}: {det} vs {vdm}");
            }
        }
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(vandermonde_power_sum_det(&[1.0], 1).is_err());
        assert!(vandermonde_power_sum_det(&[1.0; 9], 9).is_err());
        assert!(vandermonde_power_sum_det(&[1.0, 2.0], 3).is_err());
        let m = HankelMomentMatrix::new(&[1.0, 1.0, 3.0]).unwrap();
        assert_eq!(m.entries[0][0], 3.0);
        assert!(m.determinant().abs() < 1e-20);
    }
}
