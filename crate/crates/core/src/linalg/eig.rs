//! Hermitian eigensolvers.
//!
//! Small matrices (d ≤ 8) use cyclic complex Jacobi; larger ones are reduced
//! to real symmetric tridiagonal form by Householder reflections and finished
//! with implicit-shift QL. Both paths return eigenvalues in ascending order.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::matrix::CMatrix;

/// Dimension up to which cyclic Jacobi is used.
pub const JACOBI_MAX_DIM: usize = 8;

/// Spectral decomposition `A = V diag(λ) V†`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary; column `k` is the eigenvector of `values[k]`.
    pub vectors: CMatrix,
}

impl EigenDecomposition {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// V diag(f(λ)) V†.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let fj = f(self.values[j]);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        scaled.matmul_adj(&self.vectors)
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|x| x)
    }
}

/// Eigendecomposition of a matrix assumed Hermitian (only the lower triangle
/// and the real part of the diagonal are trusted).
pub fn eigh(a: &CMatrix) -> EigenDecomposition {
    assert!(a.is_square());
    let n = a.rows();
    let (values, vectors) = if n <= JACOBI_MAX_DIM { jacobi(a) } else { tridiagonal_ql(a) };
    sort_ascending(values, vectors)
}

fn sort_ascending(values: Vec<f64>, vectors: CMatrix) -> EigenDecomposition {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    let sorted_values = order.iter().map(|&k| values[k]).collect();
    let sorted_vectors = CMatrix::from_fn(n, n, |i, j| vectors[(i, order[j])]);
    EigenDecomposition { values: sorted_values, vectors: sorted_vectors }
}

fn jacobi(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius_norm();
    if scale == 0.0 {
        return (vec![0.0; n], v);
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum();
        if libm::sqrt(off) <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let g = apq.norm();
                if g <= 1e-300 || g <= 1e-18 * scale {
                    continue;
                }
                // Phase step: make the (p,q) entry real and positive.
                let phase = apq / g;
                for r in 0..n {
                    m[(r, q)] *= phase.conj();
                    v[(r, q)] *= phase.conj();
                }
                for r in 0..n {
                    m[(q, r)] *= phase;
                }
                // Real rotation annihilating the (now real) off-diagonal pair.
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (2.0 * g);
                let t = if theta >= 0.0 {
                    1.0 / (theta + libm::sqrt(theta * theta + 1.0))
                } else {
                    -1.0 / (-theta + libm::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for r in 0..n {
                    let (mp, mq) = (m[(r, p)], m[(r, q)]);
                    m[(r, p)] = mp * c - mq * s;
                    m[(r, q)] = mp * s + mq * c;
                    let (vp, vq) = (v[(r, p)], v[(r, q)]);
                    v[(r, p)] = vp * c - vq * s;
                    v[(r, q)] = vp * s + vq * c;
                }
                for r in 0..n {
                    let (mp, mq) = (m[(p, r)], m[(q, r)]);
                    m[(p, r)] = mp * c - mq * s;
                    m[(q, r)] = mp * s + mq * c;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
            }
        }
    }
    ((0..n).map(|i| m[(i, i)].re).collect(), v)
}

fn tridiagonal_ql(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut q = CMatrix::identity(n);

    // Householder reduction: after step k, column k is zero below k+1.
    for k in 0..n.saturating_sub(2) {
        let norm_x = libm::sqrt(((k + 1)..n).map(|i| m[(i, k)].norm_sqr()).sum());
        if norm_x <= 1e-300 {
            continue;
        }
        let x0 = m[(k + 1, k)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm_x;
        let mut hv: Vec<Complex64> = ((k + 1)..n).map(|i| m[(i, k)]).collect();
        hv[0] -= alpha;
        let vnorm = libm::sqrt(hv.iter().map(|z| z.norm_sqr()).sum());
        if vnorm <= 1e-300 {
            continue;
        }
        for z in hv.iter_mut() {
            *z /= vnorm;
        }
        // M ← H M H with H = I − 2 v v† on indices k+1..n.
        let off = k + 1;
        // Left: rows. M[r,:] -= 2 v_r (v† M)[:]
        let mut vm = vec![Complex64::new(0.0, 0.0); n];
        for (ri, &vr) in hv.iter().enumerate() {
            let r = off + ri;
            for c in 0..n {
                vm[c] += vr.conj() * m[(r, c)];
            }
        }
        for (ri, &vr) in hv.iter().enumerate() {
            let r = off + ri;
            for c in 0..n {
                m[(r, c)] -= vr * vm[c] * 2.0;
            }
        }
        // Right: columns. M[:,c] -= 2 (M v)[:] v_c†
        let mut mv = vec![Complex64::new(0.0, 0.0); n];
        for r in 0..n {
            for (ci, &vc) in hv.iter().enumerate() {
                mv[r] += m[(r, off + ci)] * vc;
            }
        }
        for r in 0..n {
            for (ci, &vc) in hv.iter().enumerate() {
                m[(r, off + ci)] -= mv[r] * vc.conj() * 2.0;
            }
        }
        // Q ← Q H
        let mut qv = vec![Complex64::new(0.0, 0.0); n];
        for r in 0..n {
            for (ci, &vc) in hv.iter().enumerate() {
                qv[r] += q[(r, off + ci)] * vc;
            }
        }
        for r in 0..n {
            for (ci, &vc) in hv.iter().enumerate() {
                q[(r, off + ci)] -= qv[r] * vc.conj() * 2.0;
            }
        }
    }

    // Diagonal phase change making the sub-diagonal real and nonnegative.
    let mut d: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    let mut e = vec![0.0; n];
    let mut phase = Complex64::new(1.0, 0.0);
    for r in 0..n {
        q[(r, 0)] *= phase;
    }
    for k in 0..n.saturating_sub(1) {
        let sub = m[(k + 1, k)];
        let g = sub.norm();
        if g > 0.0 {
            phase *= sub / g;
        }
        e[k] = g;
        for r in 0..n {
            q[(r, k + 1)] *= phase;
        }
    }

    implicit_ql(&mut d, &mut e, &mut q);
    (d, q)
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix with diagonal `d`
/// and sub-diagonal `e[0..n-1]`, accumulating rotations into the columns of `z`.
fn implicit_ql(d: &mut [f64], e: &mut [f64], z: &mut CMatrix) {
    let n = d.len();
    if n < 2 {
        return;
    }
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r } else { -r });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..z.rows() {
                    let zi1 = z[(k, i + 1)];
                    let zi = z[(k, i)];
                    z[(k, i + 1)] = zi * s + zi1 * c;
                    z[(k, i)] = zi * c - zi1 * s;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}
