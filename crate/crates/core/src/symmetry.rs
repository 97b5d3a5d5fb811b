//! Finite group representations, the group average (twirl), its fixed-point
//! subspace, and channels/instruments acting on states.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigh, hermitian_basis, hermitian_coords, CMatrix, DensityMatrix, HermitianMatrix};

/// Tolerance for unitarity, closure and idempotence of a representation.
pub const REP_TOL: f64 = 1e-9;
/// Eigenvalues of the twirl within this distance of 1 span the fixed space.
pub const FIXED_POINT_THRESHOLD: f64 = 1e-8;
/// Instrument outcomes with smaller probability are dropped.
pub const PROB_FLOOR: f64 = 1e-12;
/// Tolerance for trace preservation of channels.
pub const CHANNEL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    /// Z_d generated by the phase flip; its twirl is total dephasing.
    Cyclic,
    Trivial,
    General,
}

/// Orthonormal Hermitian basis (under Tr[AB]) of a twirl-invariant subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointBasis {
    pub dim: usize,
    pub elements: Vec<HermitianMatrix>,
}

impl FixedPointBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Σ_k x_k B_k.
    pub fn combine(&self, coords: &[f64]) -> HermitianMatrix {
        let mut out = HermitianMatrix::zeros(self.dim);
        for (b, &x) in self.elements.iter().zip(coords) {
            out.axpy(x, b);
        }
        out
    }

    /// Orthogonal-projection coordinates Tr[B_k X].
    pub fn coords(&self, x: &HermitianMatrix) -> Vec<f64> {
        self.elements.iter().map(|b| b.inner(x)).collect()
    }
}

/// Unitary representation {U_g} of a finite group (projective closure allowed).
#[derive(Debug, Clone)]
pub struct GroupRep {
    dim: usize,
    unitaries: Vec<CMatrix>,
    labels: Vec<String>,
    kind: RepKind,
    fixed: FixedPointBasis,
    complement: FixedPointBasis,
}

impl GroupRep {
    /// Validates unitarity, projective closure and idempotence of the induced
    /// twirl, then caches the fixed-point decomposition.
    pub fn new(unitaries: Vec<CMatrix>, labels: Option<Vec<String>>) -> Result<Self> {
        let first = unitaries.first().ok_or_else(|| Error::InvalidRep("empty unitary list".into()))?;
        let dim = first.rows();
        if dim == 0 {
            return Err(Error::InvalidRep("zero-dimensional representation".into()));
        }
        for (g, u) in unitaries.iter().enumerate() {
            if u.rows() != dim || u.cols() != dim {
                return Err(Error::InvalidRep(format!("element {g} is {}x{}, expected {dim}x{dim}", u.rows(), u.cols())));
            }
            let dev = (&u.matmul_adj(u) - &CMatrix::identity(dim)).frobenius_norm();
            if !(dev <= REP_TOL) {
                return Err(Error::InvalidRep(format!("element {g} is not unitary (deviation {dev:e})")));
            }
        }
        let labels = match labels {
            Some(l) if l.len() == unitaries.len() => l,
            Some(l) => {
                return Err(Error::InvalidRep(format!("{} labels for {} elements", l.len(), unitaries.len())));
            }
            None => (0..unitaries.len()).map(|g| format!("g{g}")).collect(),
        };
        check_projective_closure(&unitaries)?;
        let kind = if unitaries.len() == 1 { RepKind::Trivial } else { RepKind::General };
        Self::assemble(dim, unitaries, labels, kind)
    }

    /// {Z^k}_{k=0..d-1} with Z|j⟩ = e^{2πij/d}|j⟩.
    pub fn cyclic(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidRep("dimension must be positive".into()));
        }
        let unitaries = (0..d)
            .map(|k| {
                let phases: Vec<Complex64> = (0..d).map(|j| root_of_unity((j * k) % d, d)).collect();
                CMatrix::from_fn(d, d, |i, j| if i == j { phases[i] } else { Complex64::new(0.0, 0.0) })
            })
            .collect();
        let labels = (0..d).map(|k| format!("Z^{k}")).collect();
        Self::assemble(d, unitaries, labels, RepKind::Cyclic)
    }

    /// The single-element group; every state is symmetric.
    pub fn trivial(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidRep("dimension must be positive".into()));
        }
        Self::assemble(d, alloc::vec![CMatrix::identity(d)], alloc::vec!["e".to_string()], RepKind::Trivial)
    }

    fn assemble(dim: usize, unitaries: Vec<CMatrix>, labels: Vec<String>, kind: RepKind) -> Result<Self> {
        let mut rep = Self {
            dim,
            unitaries,
            labels,
            kind,
            fixed: FixedPointBasis { dim, elements: Vec::new() },
            complement: FixedPointBasis { dim, elements: Vec::new() },
        };
        let (fixed, complement) = match kind {
            RepKind::Cyclic => cyclic_split(dim),
            RepKind::Trivial => (FixedPointBasis { dim, elements: hermitian_basis(dim) }, FixedPointBasis { dim, elements: Vec::new() }),
            RepKind::General => rep.spectral_split()?,
        };
        rep.fixed = fixed;
        rep.complement = complement;
        Ok(rep)
    }

    /// Eigendecomposition of the twirl as a real-linear map on Hermitian
    /// matrices. Rejects maps that are not projectors.
    fn spectral_split(&self) -> Result<(FixedPointBasis, FixedPointBasis)> {
        let d = self.dim;
        let basis = hermitian_basis(d);
        let n = basis.len();
        let images: Vec<Vec<f64>> = basis.iter().map(|b| hermitian_coords(&self.twirl_unchecked(b))).collect();
        // images[j][i] = Tr[B_i E(B_j)]
        let t = CMatrix::from_fn(n, n, |i, j| Complex64::new(0.5 * (images[j][i] + images[i][j]), 0.0));
        let asym = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (images[j][i] - images[i][j]).abs())
            .fold(0.0, f64::max);
        if asym > REP_TOL * 10.0 {
            return Err(Error::InvalidRep(format!("twirl is not self-adjoint (deviation {asym:e})")));
        }
        let t2 = t.matmul(&t);
        let idem = (&t2 - &t).frobenius_norm();
        if !(idem <= REP_TOL * 10.0) {
            return Err(Error::InvalidRep(format!("induced twirl is not idempotent (deviation {idem:e})")));
        }
        let dec = eigh(&t);
        let mut fixed = Vec::new();
        let mut complement = Vec::new();
        for (k, &lambda) in dec.values.iter().enumerate() {
            let coords: Vec<f64> = (0..n).map(|i| dec.vectors[(i, k)].re).collect();
            let mut m = HermitianMatrix::zeros(d);
            for (c, b) in coords.iter().zip(&basis) {
                m.axpy(*c, b);
            }
            // The eigenvectors of a real symmetric matrix computed in complex
            // arithmetic may carry a global phase; renormalise the real part.
            let norm = libm::sqrt(m.inner(&m));
            let m = m.scale(1.0 / norm);
            if (lambda - 1.0).abs() <= FIXED_POINT_THRESHOLD {
                fixed.push(m);
            } else if lambda.abs() <= FIXED_POINT_THRESHOLD {
                complement.push(m);
            } else {
                return Err(Error::InvalidRep(format!("twirl eigenvalue {lambda} is neither 0 nor 1")));
            }
        }
        Ok((FixedPointBasis { dim: d, elements: fixed }, FixedPointBasis { dim: d, elements: complement }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.unitaries.len()
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Orthonormal basis of {X Hermitian : E(X) = X}.
    pub fn fixed_point_basis(&self) -> &FixedPointBasis {
        &self.fixed
    }

    /// Orthonormal basis of {X Hermitian : E(X) = 0}.
    pub fn complement_basis(&self) -> &FixedPointBasis {
        &self.complement
    }

    /// Whether all elements commute pairwise within `tol`.
    pub fn is_abelian(&self, tol: f64) -> bool {
        self.unitaries.iter().enumerate().all(|(i, a)| {
            self.unitaries[i + 1..].iter().all(|b| (&a.matmul(b) - &b.matmul(a)).frobenius_norm() <= tol)
        })
    }

    /// E(X) = (1/|G|) Σ_g U_g X U_g†.
    pub fn twirl(&self, x: &HermitianMatrix) -> Result<HermitianMatrix> {
        self.check_dim(x.dim())?;
        Ok(self.twirl_unchecked(x))
    }

    fn twirl_unchecked(&self, x: &HermitianMatrix) -> HermitianMatrix {
        match self.kind {
            RepKind::Cyclic => HermitianMatrix::from_real_diag(&x.diagonal()),
            RepKind::Trivial => x.clone(),
            RepKind::General => self.group_average(x),
        }
    }

    /// The literal group average, bypassing the dephasing shortcut.
    pub fn group_average(&self, x: &HermitianMatrix) -> HermitianMatrix {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for u in &self.unitaries {
            acc = &acc + &x.conjugate_by(u);
        }
        HermitianMatrix::from_hermitian_part(&acc.scale(1.0 / self.order() as f64))
    }

    /// ‖E(ρ) − ρ‖₂ ≤ tol.
    pub fn is_symmetric(&self, rho: &HermitianMatrix, tol: f64) -> Result<bool> {
        let e = self.twirl(rho)?;
        Ok(e.sub(rho).frobenius_norm() <= tol)
    }

    pub(crate) fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: d });
        }
        Ok(())
    }
}

fn root_of_unity(k: usize, d: usize) -> Complex64 {
    let theta = 2.0 * core::f64::consts::PI * k as f64 / d as f64;
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

/// Diagonal projectors and the off-diagonal part of the standard basis.
fn cyclic_split(d: usize) -> (FixedPointBasis, FixedPointBasis) {
    let mut basis = hermitian_basis(d);
    let complement = basis.split_off(d);
    (FixedPointBasis { dim: d, elements: basis }, FixedPointBasis { dim: d, elements: complement })
}

fn check_projective_closure(unitaries: &[CMatrix]) -> Result<()> {
    let d = unitaries[0].rows() as f64;
    for (g, ug) in unitaries.iter().enumerate() {
        for (h, uh) in unitaries.iter().enumerate() {
            let prod = ug.matmul(uh);
            // min over phases of ‖U_g U_h − e^{iφ} U_k‖₂² = 2d − 2|Tr[U_k† U_g U_h]|
            let best = unitaries
                .iter()
                .map(|uk| {
                    let overlap: Complex64 = uk.as_slice().iter().zip(prod.as_slice()).map(|(a, b)| a.conj() * b).sum();
                    libm::sqrt((2.0 * d - 2.0 * overlap.norm()).max(0.0))
                })
                .fold(f64::INFINITY, f64::min);
            if !(best <= REP_TOL * 10.0) {
                return Err(Error::InvalidRep(format!(
                    "set is not closed: U_{g} U_{h} is {best:e} away from every element"
                )));
            }
        }
    }
    Ok(())
}

/// Completely positive map in Kraus form ξ ↦ Σ_l K_l ξ K_l†.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    dim: usize,
    kraus: Vec<CMatrix>,
    trace_preserving: bool,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InvalidChannel("no Kraus operators".into()))?;
        let dim = first.rows();
        for k in &kraus {
            if k.rows() != dim || k.cols() != dim {
                return Err(Error::InvalidChannel(format!("Kraus operator is {}x{}, expected {dim}x{dim}", k.rows(), k.cols())));
            }
        }
        let mut completeness = CMatrix::zeros(dim, dim);
        for k in &kraus {
            completeness = &completeness + &k.adjoint().matmul(k);
        }
        let trace_preserving = (&completeness - &CMatrix::identity(dim)).frobenius_norm() <= CHANNEL_TOL;
        Ok(Self { dim, kraus, trace_preserving })
    }

    pub fn identity(d: usize) -> Self {
        Self { dim: d, kraus: alloc::vec![CMatrix::identity(d)], trace_preserving: true }
    }

    pub fn unitary(u: CMatrix) -> Result<Self> {
        Self::new(alloc::vec![u])
    }

    /// ξ ↦ Σ_g q_g U_g ξ U_g†.
    pub fn random_unitary(weights: &[f64], unitaries: &[CMatrix]) -> Result<Self> {
        if weights.len() != unitaries.len() {
            return Err(Error::DimensionMismatch { expected: unitaries.len(), found: weights.len() });
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::InvalidArgument("negative mixing weight".into()));
        }
        let kraus = weights
            .iter()
            .zip(unitaries)
            .filter(|(w, _)| **w > 0.0)
            .map(|(&w, u)| u.scale(libm::sqrt(w)))
            .collect();
        Self::new(kraus)
    }

    /// Total dephasing in the reference basis, Kraus operators |j⟩⟨j|.
    pub fn dephasing(d: usize) -> Self {
        let kraus = (0..d)
            .map(|j| {
                let mut p = CMatrix::zeros(d, d);
                p[(j, j)] = Complex64::new(1.0, 0.0);
                p
            })
            .collect();
        Self { dim: d, kraus, trace_preserving: true }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    pub fn apply(&self, x: &HermitianMatrix) -> HermitianMatrix {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            acc = &acc + &k.matmul(x.as_matrix()).matmul_adj(k);
        }
        HermitianMatrix::from_hermitian_part(&acc)
    }

    /// Heisenberg-picture map Σ_l K_l† X K_l.
    pub fn apply_adjoint(&self, x: &HermitianMatrix) -> HermitianMatrix {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for k in &self.kraus {
            acc = &acc + &k.adjoint().matmul(x.as_matrix()).matmul(k);
        }
        HermitianMatrix::from_hermitian_part(&acc)
    }

    /// Λ applied to a state; requires trace preservation.
    pub fn apply_state(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rho.dim() });
        }
        if !self.trace_preserving {
            return Err(Error::InvalidChannel("channel is not trace preserving".into()));
        }
        DensityMatrix::normalized(&self.apply(rho))
    }

    /// Kraus operators of `other ∘ self`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let kraus = other.kraus.iter().flat_map(|b| self.kraus.iter().map(move |a| b.matmul(a))).collect();
        Self::new(kraus)
    }
}

/// Λ(U_g B U_g†) = U_g Λ(B) U_g† for every g and every Hermitian basis element B.
pub fn is_covariant(rep: &GroupRep, channel: &QuantumChannel, tol: f64) -> Result<bool> {
    rep.check_dim(channel.dim())?;
    if !channel.is_trace_preserving() {
        return Err(Error::Precondition("covariance test requires a trace-preserving channel".into()));
    }
    let basis = hermitian_basis(rep.dim());
    for u in rep.unitaries() {
        for b in &basis {
            let lhs = channel.apply(&b.conjugate_by(u));
            let rhs = channel.apply(b).conjugate_by(u);
            if lhs.sub(&rhs).frobenius_norm() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether Γ maps the symmetric subspace into itself (checked on the fixed-point basis).
pub fn preserves_symmetric_operators(rep: &GroupRep, channel: &QuantumChannel, tol: f64) -> Result<bool> {
    rep.check_dim(channel.dim())?;
    for b in &rep.fixed_point_basis().elements {
        let out = channel.apply(b);
        if rep.twirl_unchecked(&out).sub(&out).frobenius_norm() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One branch of an instrument applied to a state.
#[derive(Debug, Clone)]
pub struct InstrumentOutcome {
    pub probability: f64,
    /// Γ_l(ρ)/p_l; `None` when p_l ≤ [`PROB_FLOOR`].
    pub state: Option<DensityMatrix>,
}

/// Applies every subchannel Γ_l of an instrument, returning (p_l, Γ_l(ρ)/p_l).
pub fn apply_instrument(instrument: &[QuantumChannel], rho: &DensityMatrix) -> Result<Vec<InstrumentOutcome>> {
    let d = rho.dim();
    if instrument.is_empty() {
        return Err(Error::InvalidChannel("empty instrument".into()));
    }
    let mut completeness = CMatrix::zeros(d, d);
    for ch in instrument {
        if ch.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: ch.dim() });
        }
        for k in ch.kraus() {
            completeness = &completeness + &k.adjoint().matmul(k);
        }
    }
    let dev = (&completeness - &CMatrix::identity(d)).frobenius_norm();
    if dev > CHANNEL_TOL {
        return Err(Error::InvalidChannel(format!("subchannels do not sum to a trace-preserving map (deviation {dev:e})")));
    }
    instrument
        .iter()
        .map(|ch| {
            let out = ch.apply(rho);
            let p = out.trace_re();
            if p <= PROB_FLOOR {
                Ok(InstrumentOutcome { probability: 0.0, state: None })
            } else {
                let state = DensityMatrix::from_trusted(out.scale(1.0 / p));
                Ok(InstrumentOutcome { probability: p, state: Some(state) })
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn plus() -> DensityMatrix {
        DensityMatrix::pure(&[c(1.0, 0.0), c(1.0, 0.0)]).unwrap()
    }

    fn swap4() -> CMatrix {
        // SWAP on C^2 ⊗ C^2, basis |00>,|01>,|10>,|11>
        let mut s = CMatrix::zeros(4, 4);
        s[(0, 0)] = c(1.0, 0.0);
        s[(1, 2)] = c(1.0, 0.0);
        s[(2, 1)] = c(1.0, 0.0);
        s[(3, 3)] = c(1.0, 0.0);
        s
    }

    fn qutrit() -> HermitianMatrix {
        let g = CMatrix::from_fn(3, 3, |i, j| c((i + 2 * j) as f64 * 0.37 - 0.5, (i as f64 - j as f64) * 0.21 + 0.1));
        let h = HermitianMatrix::from_hermitian_part(&g.matmul_adj(&g));
        h.scale(1.0 / h.trace_re())
    }

    #[test]
    fn cyclic_twirl_dephases_plus() {
        let z2 = GroupRep::cyclic(2).unwrap();
        let out = z2.twirl(&plus()).unwrap();
        assert!(out.sub(&HermitianMatrix::from_real_diag(&[0.5, 0.5])).max_abs() < 1e-15);
    }

    #[test]
    fn cyclic_average_equals_dephasing() {
        let z3 = GroupRep::cyclic(3).unwrap();
        let rho = qutrit();
        let avg = z3.group_average(&rho);
        let deph = z3.twirl(&rho).unwrap();
        assert!(avg.sub(&deph).max_abs() < 1e-15);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(deph[(i, j)], c(0.0, 0.0));
                } else {
                    assert_eq!(deph[(i, i)].re, rho[(i, i)].re);
                }
            }
        }
    }

    #[test]
    fn fixed_points_are_unchanged() {
        let z3 = GroupRep::cyclic(3).unwrap();
        let x = HermitianMatrix::from_real_diag(&[0.2, -1.0, 3.0]);
        assert_eq!(z3.twirl(&x).unwrap(), x);
    }

    #[test]
    fn symmetric_state_tests() {
        let z2 = GroupRep::cyclic(2).unwrap();
        let z3 = GroupRep::cyclic(3).unwrap();
        assert!(z3.is_symmetric(&DensityMatrix::maximally_mixed(3), 1e-12).unwrap());
        assert!(!z2.is_symmetric(&plus(), 1e-12).unwrap());
        assert!(z3.is_symmetric(&HermitianMatrix::from_real_diag(&[0.2, 0.3, 0.5]), 1e-12).unwrap());
    }

    #[test]
    fn fixed_point_basis_sizes() {
        let z3 = GroupRep::cyclic(3).unwrap();
        let fb = z3.fixed_point_basis();
        assert_eq!(fb.len(), 3);
        for (j, b) in fb.elements.iter().enumerate() {
            let mut want = [0.0; 3];
            want[j] = 1.0;
            assert_eq!(*b, HermitianMatrix::from_real_diag(&want));
        }
        assert_eq!(GroupRep::trivial(2).unwrap().fixed_point_basis().len(), 4);
        let swap = GroupRep::new(vec![CMatrix::identity(4), swap4()], None).unwrap();
        assert_eq!(swap.fixed_point_basis().len(), 10);
        assert_eq!(swap.complement_basis().len(), 6);
        for b in &swap.fixed_point_basis().elements {
            assert!(swap.group_average(b).sub(b).frobenius_norm() < 1e-12);
        }
        for b in &swap.complement_basis().elements {
            assert!(swap.group_average(b).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_group() {
        let h = CMatrix::from_fn(2, 2, |i, j| {
            let s = core::f64::consts::FRAC_1_SQRT_2;
            if i == 1 && j == 1 { c(-s, 0.0) } else { c(s, 0.0) }
        });
        // {1, H, Z}: H·Z is not in the set
        let z = CMatrix::from_real_diag(&[1.0, -1.0]);
        assert!(matches!(GroupRep::new(vec![CMatrix::identity(2), h, z], None), Err(Error::InvalidRep(_))));
        let not_unitary = CMatrix::from_real_diag(&[1.0, 2.0]);
        assert!(GroupRep::new(vec![not_unitary], None).is_err());
    }

    #[test]
    fn pauli_group_projective_closure() {
        let x = CMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let y = CMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]).unwrap();
        let z = CMatrix::from_real_diag(&[1.0, -1.0]);
        let rep = GroupRep::new(vec![CMatrix::identity(2), x, y, z], None).unwrap();
        // The Pauli twirl is the completely depolarising map: only the identity is fixed.
        assert_eq!(rep.fixed_point_basis().len(), 1);
        assert!(!rep.is_abelian(1e-12));
    }

    #[test]
    fn dephasing_is_covariant_hadamard_is_not() {
        let z2 = GroupRep::cyclic(2).unwrap();
        assert!(is_covariant(&z2, &QuantumChannel::dephasing(2), 1e-10).unwrap());
        let x = CMatrix::from_vec(2, 2, vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        // X Z = −Z X, so the bit flip commutes with conjugation by Z.
        let flip = QuantumChannel::random_unitary(&[0.7, 0.3], &[CMatrix::identity(2), x]).unwrap();
        assert!(is_covariant(&z2, &flip, 1e-10).unwrap());
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let had = CMatrix::from_vec(2, 2, vec![c(r, 0.0), c(r, 0.0), c(r, 0.0), c(-r, 0.0)]).unwrap();
        let mixed_had = QuantumChannel::random_unitary(&[0.7, 0.3], &[CMatrix::identity(2), had]).unwrap();
        assert!(!is_covariant(&z2, &mixed_had, 1e-10).unwrap());
        let z3 = GroupRep::cyclic(3).unwrap();
        let mix = QuantumChannel::random_unitary(&[0.5, 0.2, 0.3], z3.unitaries()).unwrap();
        assert!(is_covariant(&z3, &mix, 1e-10).unwrap());
    }

    #[test]
    fn instruments() {
        let rho = plus();
        let id = apply_instrument(&[QuantumChannel::identity(2)], &rho).unwrap();
        assert_eq!(id.len(), 1);
        assert!((id[0].probability - 1.0).abs() < 1e-15);
        let meas: Vec<QuantumChannel> = QuantumChannel::dephasing(2)
            .kraus()
            .iter()
            .map(|k| QuantumChannel::new(vec![k.clone()]).unwrap())
            .collect();
        let out = apply_instrument(&meas, &rho).unwrap();
        for (j, o) in out.iter().enumerate() {
            assert!((o.probability - 0.5).abs() < 1e-15);
            let mut want = [0.0; 2];
            want[j] = 1.0;
            assert_eq!(*o.state.as_ref().unwrap().as_hermitian(), HermitianMatrix::from_real_diag(&want));
        }
        // Incomplete instrument is rejected.
        assert!(apply_instrument(&meas[..1], &rho).is_err());
    }

    #[test]
    fn zero_probability_outcome_is_dropped() {
        let rho = DensityMatrix::new(HermitianMatrix::from_real_diag(&[1.0, 0.0])).unwrap();
        let meas: Vec<QuantumChannel> = QuantumChannel::dephasing(2)
            .kraus()
            .iter()
            .map(|k| QuantumChannel::new(vec![k.clone()]).unwrap())
            .collect();
        let out = apply_instrument(&meas, &rho).unwrap();
        assert_eq!(out[1].probability, 0.0);
        assert!(out[1].state.is_none());
    }
}
