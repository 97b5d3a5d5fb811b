//! Dense semidefinite programming.
//!
//! Problems are stated in linear-matrix-inequality form
//!
//! ```text
//! minimize / maximize   cᵀx + offset
//! subject to            F0_j + Σ_k x_k F_kj ⪰ 0     for every block j
//!                       A x = b                     (optional)
//! ```
//!
//! with complex Hermitian blocks. [`solve`] eliminates the equalities by a
//! null-space parametrisation, drops variables that no block depends on, and
//! runs a homogeneous self-dual primal-dual interior-point method with
//! Nesterov–Todd scaling and Mehrotra predictor-corrector steps.
//!
//! The dual of the minimisation form is
//!
//! ```text
//! maximize  −Σ_j Tr[F0_j Z_j] + offset   s.t.  Σ_j Tr[F_kj Z_j] = c_k,  Z_j ⪰ 0
//! ```
//!
//! (plus multipliers for the equalities), and [`SdpSolution::dual_blocks`]
//! holds the optimal `Z_j`.

mod compile;
mod dense;
mod solver;

use alloc::format;
use alloc::vec::Vec;

pub use compile::{
    compile_data_consistent_roa, compile_discrimination_povm, compile_roa_dual, compile_roa_primal,
    compile_roa_witness_dual, compile_witness_from_data, DataConsistentLayout, PovmLayout,
};
pub use solver::solve;

use crate::error::{Error, Result};
use crate::linalg::HermitianMatrix;

/// One affine LMI block `constant + Σ_k x_k coeffs[k] ⪰ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LmiBlock {
    pub constant: HermitianMatrix,
    pub coeffs: Vec<HermitianMatrix>,
}

impl LmiBlock {
    pub fn dim(&self) -> usize {
        self.constant.dim()
    }

    /// F0 + Σ x_k F_k.
    pub fn evaluate(&self, x: &[f64]) -> HermitianMatrix {
        let mut out = self.constant.clone();
        for (f, &xk) in self.coeffs.iter().zip(x) {
            if xk != 0.0 {
                out.axpy(xk, f);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

/// Linear equalities `A x = b`, `A` stored by rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearEqualities {
    pub rows: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub offset: f64,
    pub blocks: Vec<LmiBlock>,
    pub equalities: Option<LinearEqualities>,
    /// Optional starting point; used when it is strictly feasible.
    pub initial_x: Option<Vec<f64>>,
}

impl SdpProblem {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.blocks.is_empty() {
            return Err(Error::InvalidArgument("problem has no LMI blocks".into()));
        }
        for (j, b) in self.blocks.iter().enumerate() {
            if b.coeffs.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "block {j} has {} coefficient matrices for {n} variables",
                    b.coeffs.len()
                )));
            }
            for f in &b.coeffs {
                if f.dim() != b.dim() {
                    return Err(Error::DimensionMismatch { expected: b.dim(), found: f.dim() });
                }
            }
        }
        if let Some(eq) = &self.equalities {
            if eq.rows.len() != eq.rhs.len() {
                return Err(Error::DimensionMismatch { expected: eq.rows.len(), found: eq.rhs.len() });
            }
            for r in &eq.rows {
                if r.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: r.len() });
                }
            }
        }
        if let Some(x0) = &self.initial_x {
            if x0.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: x0.len() });
            }
        }
        Ok(())
    }

    /// Objective value in the problem's own sense.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().zip(x).map(|(c, x)| c * x).sum::<f64>() + self.offset
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpOptions {
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub max_iters: usize,
    /// τ/κ below this ratio (with a sign-consistent certificate) declares
    /// infeasibility.
    pub infeasibility_ratio: f64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self { gap_tol: 1e-8, feas_tol: 1e-8, max_iters: 100, infeasibility_ratio: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    /// No x satisfies the constraints.
    Infeasible,
    /// The objective is unbounded in the optimisation direction.
    Unbounded,
    NumericalFailure,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    pub status: SdpStatus,
    /// Primal variables (best iterate on failure).
    pub x: Vec<f64>,
    /// cᵀx + offset at `x`, in the problem's sense.
    pub primal_value: f64,
    /// Dual objective at the returned multipliers, in the problem's sense.
    pub dual_value: f64,
    /// Multipliers Z_j ⪰ 0, one per LMI block.
    pub dual_blocks: Vec<HermitianMatrix>,
    /// Slack matrices F0_j + Σ x_k F_kj.
    pub slack_blocks: Vec<HermitianMatrix>,
    /// Σ_j Tr[S_j Z_j].
    pub complementarity: f64,
    /// Relative primal residual of the LMI identity.
    pub primal_residual: f64,
    /// Relative dual residual of Σ_j Tr[F_kj Z_j] = c_k.
    pub dual_residual: f64,
    pub iterations: usize,
}

impl SdpSolution {
    pub fn gap(&self) -> f64 {
        (self.primal_value - self.dual_value).abs()
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }
}
