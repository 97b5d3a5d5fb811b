use alloc::format;
use alloc::vec::Vec;
use core::ops::Deref;

use num_complex::Complex64;

use super::eig::{eigh, EigenDecomposition};
use super::matrix::CMatrix;
use super::tol;
use crate::error::{Error, Result};

/// Square complex matrix equal to its adjoint.
///
/// The validating constructor accepts deviations up to
/// [`tol::HERMITICITY`] (relative to the largest entry) and then stores the
/// exact Hermitian part, so every downstream computation sees an exactly
/// Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(CMatrix);

/// Schatten norms supported by [`HermitianMatrix::schatten_norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchattenP {
    One,
    Two,
    Infinity,
}

impl TryFrom<f64> for SchattenP {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        if p == 1.0 {
            Ok(Self::One)
        } else if p == 2.0 {
            Ok(Self::Two)
        } else if p == f64::INFINITY {
            Ok(Self::Infinity)
        } else {
            Err(Error::InvalidArgument(format!("unsupported Schatten p = {p}")))
        }
    }
}

/// Outcome of [`HermitianMatrix::is_psd`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsdCheck {
    pub is_psd: bool,
    /// Smallest eigenvalue.
    pub margin: f64,
}

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
        }
        if m.rows() == 0 {
            return Err(Error::InvalidArgument("empty matrix".into()));
        }
        let deviation = m.hermiticity_deviation();
        let scale = m.max_abs().max(1.0);
        if !(deviation <= tol::HERMITICITY * scale) {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(m.hermitian_part()))
    }

    /// Takes the Hermitian part without validation.
    pub fn from_hermitian_part(m: &CMatrix) -> Self {
        Self(m.hermitian_part())
    }

    pub fn zeros(d: usize) -> Self {
        Self(CMatrix::zeros(d, d))
    }

    pub fn identity(d: usize) -> Self {
        Self(CMatrix::identity(d))
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Self(CMatrix::from_real_diag(diag))
    }

    /// Projector |v⟩⟨v| (not normalised).
    pub fn projector(v: &[Complex64]) -> Self {
        Self(CMatrix::outer(v)).hermitized()
    }

    fn hermitized(self) -> Self {
        Self(self.0.hermitian_part())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn eig(&self) -> EigenDecomposition {
        eigh(&self.0)
    }

    pub fn trace_re(&self) -> f64 {
        self.0.trace().re
    }

    /// Tr[A B], real for Hermitian arguments.
    pub fn inner(&self, other: &Self) -> f64 {
        self.0.inner_re(&other.0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    pub fn axpy(&mut self, alpha: f64, other: &Self) {
        self.0.axpy(alpha, &other.0);
    }

    /// U A U†.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self(self.0.conjugate_by(u)).hermitized()
    }

    /// U† A U.
    pub fn conjugate_by_adjoint(&self, u: &CMatrix) -> Self {
        Self(u.adjoint().matmul(&self.0).matmul(u)).hermitized()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn schatten_norm(&self, p: SchattenP) -> f64 {
        match p {
            SchattenP::Two => self.0.frobenius_norm(),
            SchattenP::One => self.eig().values.iter().map(|v| v.abs()).sum(),
            SchattenP::Infinity => self.eig().values.iter().map(|v| v.abs()).fold(0.0, f64::max),
        }
    }

    pub fn is_psd(&self, tol: f64) -> PsdCheck {
        let margin = self.eig().min();
        PsdCheck { is_psd: margin >= -tol, margin }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eig().min()
    }
}

impl Deref for HermitianMatrix {
    type Target = CMatrix;
    fn deref(&self) -> &CMatrix {
        &self.0
    }
}

/// Positive semidefinite, unit-trace Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(HermitianMatrix);

impl DensityMatrix {
    /// Validates trace and positivity with the default tolerances.
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        let tr = h.trace_re();
        if !((tr - 1.0).abs() <= tol::TRACE) {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let lmin = h.min_eigenvalue();
        if !(lmin >= -tol::PSD) {
            return Err(Error::InvalidState(format!("smallest eigenvalue {lmin:e} is negative")));
        }
        Ok(Self(h))
    }

    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    /// Normalises a PSD Hermitian matrix by its trace.
    pub fn normalized(h: &HermitianMatrix) -> Result<Self> {
        let tr = h.trace_re();
        if !(tr > 0.0) {
            return Err(Error::InvalidState(format!("trace {tr} is not positive")));
        }
        Self::new(h.scale(1.0 / tr))
    }

    /// |ψ⟩⟨ψ|/⟨ψ|ψ⟩.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if psi.is_empty() || !(norm2 > 0.0) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let s = 1.0 / libm::sqrt(norm2);
        let v: Vec<Complex64> = psi.iter().map(|z| z * s).collect();
        Ok(Self(HermitianMatrix::projector(&v)))
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(HermitianMatrix::identity(d).scale(1.0 / d as f64))
    }

    /// Builds without validation; callers guarantee the invariants.
    pub(crate) fn from_trusted(h: HermitianMatrix) -> Self {
        Self(h)
    }

    pub fn as_hermitian(&self) -> &HermitianMatrix {
        &self.0
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// Tr[ρ²].
    pub fn purity(&self) -> f64 {
        let f = self.0.frobenius_norm();
        f * f
    }

    /// p ρ₁ + (1−p) ρ₂.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("mixing weight {p} outside [0,1]")));
        }
        Ok(Self(self.0.scale(p).add(&other.0.scale(1.0 - p))))
    }
}

impl Deref for DensityMatrix {
    type Target = HermitianMatrix;
    fn deref(&self) -> &HermitianMatrix {
        &self.0
    }
}
