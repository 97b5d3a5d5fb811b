//! Small dense real helpers for the Newton systems and variable elimination.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::{svd, CMatrix};

/// Cholesky factor of a symmetric positive definite matrix (row-major, n×n),
/// retrying with growing diagonal regularisation.
pub(crate) fn cholesky_regularized(h: &[f64], n: usize) -> Option<Vec<f64>> {
    let max_diag = (0..n).map(|i| h[i * n + i].abs()).fold(0.0, f64::max).max(1e-300);
    let mut shift = 0.0;
    for _ in 0..8 {
        if let Some(l) = cholesky(h, n, shift) {
            return Some(l);
        }
        shift = if shift == 0.0 { 1e-14 * max_diag } else { shift * 100.0 };
    }
    None
}

fn cholesky(h: &[f64], n: usize, shift: f64) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = h[j * n + j] + shift;
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let ljj = libm::sqrt(d);
        l[j * n + j] = ljj;
        for i in (j + 1)..n {
            let mut v = h[i * n + j];
            for k in 0..j {
                v -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = v / ljj;
        }
    }
    Some(l)
}

pub(crate) fn cholesky_solve(l: &[f64], n: usize, b: &[f64]) -> Vec<f64> {
    let mut y = b.to_vec();
    for i in 0..n {
        let mut v = y[i];
        for k in 0..i {
            v -= l[i * n + k] * y[k];
        }
        y[i] = v / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut v = y[i];
        for k in (i + 1)..n {
            v -= l[k * n + i] * y[k];
        }
        y[i] = v / l[i * n + i];
    }
    y
}

/// Splits the column space of `a` (m×n, row-major) via SVD.
pub(crate) struct RangeSplit {
    /// Orthonormal basis (columns, n×r) of the row space of `a`.
    pub range: Vec<Vec<f64>>,
    /// Orthonormal basis (n×(n−r)) of the null space of `a`.
    pub null: Vec<Vec<f64>>,
    /// Singular values of the range directions, matched to `range`.
    pub singular: Vec<f64>,
    /// Left singular vectors matched to `range` (length m each).
    pub left: Vec<Vec<f64>>,
}

pub(crate) fn range_split(a: &[Vec<f64>], n: usize, rel_tol: f64) -> RangeSplit {
    let m = a.len();
    if m == 0 || n == 0 {
        let null = (0..n).map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        return RangeSplit { range: Vec::new(), null, singular: Vec::new(), left: Vec::new() };
    }
    let mat = CMatrix::from_fn(m, n, |i, j| Complex64::new(a[i][j], 0.0));
    let dec = svd(&mat);
    let smax = dec.s.iter().copied().fold(0.0, f64::max);
    let mut range = Vec::new();
    let mut null = Vec::new();
    let mut singular = Vec::new();
    let mut left = Vec::new();
    for j in 0..n {
        let v: Vec<f64> = (0..n).map(|i| dec.v[(i, j)].re).collect();
        if smax > 0.0 && dec.s[j] > rel_tol * smax {
            range.push(v);
            singular.push(dec.s[j]);
            left.push((0..m).map(|i| dec.u[(i, j)].re).collect());
        } else {
            null.push(v);
        }
    }
    RangeSplit { range, null, singular, left }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}
