//! States whose robustness of coherence equals their ℓ1 coherence.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::linalg::{CMatrix, DensityMatrix};

/// Entries at or below this magnitude count as zero.
pub const ZERO_ENTRY_TOL: f64 = 1e-10;
/// Allowed mismatch |e^{i(φ_i−φ_j)} ρ_ij − |ρ_ij|| on every edge.
pub const PHASE_TOL: f64 = 1e-9;
/// λ_max ≥ 1 − PURE_TOL counts as rank one.
pub const PURE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactClass {
    Pure,
    PhaseAlignable,
    GeneralizedX,
    None,
}

impl ExactClass {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Pure => "pure",
            Self::PhaseAlignable => "phase-alignable",
            Self::GeneralizedX => "generalized-x",
            Self::None => "none",
        }
    }
}

/// Classifies ρ, checking pure first, then the X pattern (d ≥ 3), then
/// phase alignability.
pub fn detect_exact_class(rho: &DensityMatrix) -> ExactClass {
    if rho.eig().max() >= 1.0 - PURE_TOL {
        return ExactClass::Pure;
    }
    let d = rho.dim();
    if d >= 3 && is_x_pattern(rho.as_matrix()) {
        return ExactClass::GeneralizedX;
    }
    if alignment_phases(rho.as_matrix()).is_some() {
        return ExactClass::PhaseAlignable;
    }
    ExactClass::None
}

fn is_x_pattern(m: &CMatrix) -> bool {
    let d = m.rows();
    (0..d).all(|i| (0..d).all(|j| i == j || i + j == d - 1 || m[(i, j)].norm() <= ZERO_ENTRY_TOL))
}

/// Phases φ with e^{i(φ_i − φ_j)} ρ_ij = |ρ_ij|, if they exist.
///
/// Breadth-first propagation over the graph of nonzero off-diagonal entries,
/// followed by a check of every edge (which covers all cycles).
pub fn alignment_phases(m: &CMatrix) -> Option<Vec<f64>> {
    let d = m.rows();
    let mut phase: Vec<Option<f64>> = vec![None; d];
    for root in 0..d {
        if phase[root].is_some() {
            continue;
        }
        phase[root] = Some(0.0);
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            let pi = phase[i].unwrap_or(0.0);
            for j in 0..d {
                if j == i || phase[j].is_some() || m[(i, j)].norm() <= ZERO_ENTRY_TOL {
                    continue;
                }
                phase[j] = Some(pi + m[(i, j)].arg());
                queue.push_back(j);
            }
        }
    }
    let phase: Vec<f64> = phase.into_iter().map(|p| p.unwrap_or(0.0)).collect();
    for i in 0..d {
        for j in (i + 1)..d {
            let v = m[(i, j)];
            if v.norm() <= ZERO_ENTRY_TOL {
                continue;
            }
            let rotated = v * Complex64::from_polar(1.0, phase[i] - phase[j]);
            if (rotated - Complex64::new(v.norm(), 0.0)).norm() > PHASE_TOL {
                return None;
            }
        }
    }
    Some(phase)
}

/// Diagonal unitary U = diag(e^{iφ_j}) making every entry of UρU† nonnegative.
pub fn alignment_unitary(phases: &[f64]) -> CMatrix {
    let d = phases.len();
    CMatrix::from_fn(d, d, |i, j| if i == j { Complex64::from_polar(1.0, phases[i]) } else { Complex64::new(0.0, 0.0) })
}
