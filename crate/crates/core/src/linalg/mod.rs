//! Dense complex linear algebra for Hermitian matrices.

mod eig;
mod hermitian;
mod matrix;

pub use eig::{eigh, EigenDecomposition, JACOBI_MAX_DIM};
pub use hermitian::{DensityMatrix, HermitianMatrix, PsdCheck, SchattenP};
pub use matrix::{cholesky, svd, CMatrix, Svd};

/// Default tolerances. Absolute, for matrices of order-one operator norm.
pub mod tol {
    pub const HERMITICITY: f64 = 1e-10;
    pub const TRACE: f64 = 1e-9;
    pub const PSD: f64 = 1e-9;
    pub const EIG: f64 = 1e-10;
}

/// Orthonormal basis of the real space of d×d Hermitian matrices under
/// Tr[AB]: |j⟩⟨j|, then (|j⟩⟨k| + |k⟩⟨j|)/√2 and i(|j⟩⟨k| − |k⟩⟨j|)/√2 for j < k.
pub fn hermitian_basis(d: usize) -> alloc::vec::Vec<HermitianMatrix> {
    use num_complex::Complex64;
    let mut out = alloc::vec::Vec::with_capacity(d * d);
    for j in 0..d {
        let mut m = CMatrix::zeros(d, d);
        m[(j, j)] = Complex64::new(1.0, 0.0);
        out.push(HermitianMatrix::from_hermitian_part(&m));
    }
    let r = core::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in (j + 1)..d {
            let mut m = CMatrix::zeros(d, d);
            m[(j, k)] = Complex64::new(r, 0.0);
            m[(k, j)] = Complex64::new(r, 0.0);
            out.push(HermitianMatrix::from_hermitian_part(&m));
            let mut m = CMatrix::zeros(d, d);
            m[(j, k)] = Complex64::new(0.0, r);
            m[(k, j)] = Complex64::new(0.0, -r);
            out.push(HermitianMatrix::from_hermitian_part(&m));
        }
    }
    out
}

/// Coordinates of `h` in [`hermitian_basis`].
pub fn hermitian_coords(h: &HermitianMatrix) -> alloc::vec::Vec<f64> {
    let d = h.dim();
    let r = core::f64::consts::SQRT_2;
    let mut out = alloc::vec::Vec::with_capacity(d * d);
    for j in 0..d {
        out.push(h[(j, j)].re);
    }
    for j in 0..d {
        for k in (j + 1)..d {
            out.push(h[(j, k)].re * r);
            out.push(h[(j, k)].im * r);
        }
    }
    out
}
