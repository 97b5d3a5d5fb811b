//! Robustness estimates from measured expectation values.

use alloc::vec::Vec;

use crate::error::Result;
use crate::linalg::{DensityMatrix, HermitianMatrix};
use crate::sdp::{compile_data_consistent_roa, compile_witness_from_data, solve, SdpOptions, SdpStatus};
use crate::symmetry::GroupRep;

/// Best witness W = Σ c_i O_i + m·1 expressible in the measured observables.
#[derive(Debug, Clone, PartialEq)]
pub struct DataWitness {
    pub status: SdpStatus,
    /// −(Σ c_i o_i + m), a lower bound on the robustness.
    pub value: f64,
    pub coefficients: Vec<f64>,
    pub identity_weight: f64,
    pub witness: HermitianMatrix,
    pub gap: f64,
}

pub fn witness_from_data(
    observables: &[HermitianMatrix],
    values: &[f64],
    rep: &GroupRep,
    opts: &SdpOptions,
) -> Result<DataWitness> {
    let problem = compile_witness_from_data(observables, values, rep)?;
    let sol = solve(&problem, opts)?;
    let k = observables.len();
    let mut w = HermitianMatrix::identity(rep.dim()).scale(sol.x[k]);
    for (o, &c) in observables.iter().zip(&sol.x) {
        w.axpy(c, o);
    }
    Ok(DataWitness {
        status: sol.status,
        value: sol.primal_value.max(0.0),
        coefficients: sol.x[..k].to_vec(),
        identity_weight: sol.x[k],
        witness: w,
        gap: sol.gap(),
    })
}

/// Least robustness over all states reproducing the data.
///
/// `value`, `state` and `sigma` are `None` when the data admit no physical
/// state (`status == Infeasible`).
#[derive(Debug, Clone, PartialEq)]
pub struct DataEstimate {
    pub status: SdpStatus,
    pub value: Option<f64>,
    /// A state consistent with the data attaining the value.
    pub state: Option<DensityMatrix>,
    pub sigma_tilde: Option<HermitianMatrix>,
    pub gap: f64,
}

pub fn estimate_from_data(
    observables: &[HermitianMatrix],
    values: &[f64],
    rep: &GroupRep,
    opts: &SdpOptions,
) -> Result<DataEstimate> {
    let (problem, layout) = compile_data_consistent_roa(observables, values, rep)?;
    let sol = solve(&problem, opts)?;
    if sol.status == SdpStatus::Infeasible {
        return Ok(DataEstimate { status: sol.status, value: None, state: None, sigma_tilde: None, gap: f64::NAN });
    }
    let rho = layout.rho(&sol.x);
    let tr = rho.trace_re();
    Ok(DataEstimate {
        status: sol.status,
        value: Some(sol.primal_value.max(0.0)),
        state: Some(DensityMatrix::from_trusted(rho.scale(1.0 / tr))),
        sigma_tilde: Some(layout.sigma(&sol.x)),
        gap: sol.gap(),
    })
}
