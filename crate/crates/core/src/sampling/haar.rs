use super::rng::RngStream;
use crate::types::{HermitianEntries, SpectralPair};
use num_complex::Complex64;
use std::f64::consts::{PI, SQRT_2};

/// A 2×2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2(pub [[Complex64; 2]; 2]);

impl Unitary2 {
    pub fn adjoint(&self) -> Unitary2 {
        let m = self.0;
        Unitary2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn mul(&self, o: &Unitary2) -> Unitary2 {
        let (a, b) = (self.0, o.0);
        let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in r.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Unitary2(r)
    }

    /// `max |(U†U - I)_{ij}|`.
    pub fn unitarity_residual(&self) -> f64 {
        let p = self.adjoint().mul(self).0;
        let mut r: f64 = 0.0;
        for (i, row) in p.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let id = if i == j { 1.0 } else { 0.0 };
                r = r.max((v - id).norm());
            }
        }
        r
    }
}

/// Haar-distributed element of U(2): a uniform point `(a, b)` on the unit
/// 3-sphere gives the SU(2) element `[[a, -b̄], [b, ā]]`, times a uniform phase.
pub fn haar_unitary_2x2(rng: &mut RngStream) -> Unitary2 {
    let (a, b) = loop {
        let v = [rng.normal(), rng.normal(), rng.normal(), rng.normal()];
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-150 {
            break (Complex64::new(v[0] / n, v[1] / n), Complex64::new(v[2] / n, v[3] / n));
        }
    };
    let ph = Complex64::from_polar(1.0, 2.0 * PI * rng.uniform());
    Unitary2([[ph * a, -ph * b.conj()], [ph * b, ph * a.conj()]])
}

/// Entries of `U diag(l1, l2) U†`.
pub fn conjugate(u: &Unitary2, l1: f64, l2: f64) -> HermitianEntries {
    let m = u.0;
    let x = l1 * m[0][0].norm_sqr() + l2 * m[0][1].norm_sqr();
    let y = l1 * m[1][0].norm_sqr() + l2 * m[1][1].norm_sqr();
    let off = m[0][0] * m[1][0].conj() * l1 + m[0][1] * m[1][1].conj() * l2;
    HermitianEntries::new(x, y, SQRT_2 * off.re, SQRT_2 * off.im)
}

/// Complex Hermitian matrix with the given spectrum and Haar eigenvectors.
pub fn lift_unitary(p: &SpectralPair, rng: &mut RngStream) -> HermitianEntries {
    conjugate(&haar_unitary_2x2(rng), p.lambda1, p.lambda2)
}

/// Real symmetric matrix with the given spectrum and a uniform rotation; `s = 0`.
pub fn lift_real(p: &SpectralPair, rng: &mut RngStream) -> HermitianEntries {
    let (sn, cs) = (2.0 * PI * rng.uniform()).sin_cos();
    let (l1, l2) = (p.lambda1, p.lambda2);
    let x = l1 * cs * cs + l2 * sn * sn;
    let y = l1 * sn * sn + l2 * cs * cs;
    HermitianEntries::new(x, y, SQRT_2 * cs * sn * (l1 - l2), 0.0)
}
