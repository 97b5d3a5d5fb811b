//! Monotonicity and convexity as checkable predicates.

use alloc::vec::Vec;

use super::robustness_value;
use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::sdp::SdpOptions;
use crate::symmetry::{apply_instrument, preserves_symmetric_operators, GroupRep, QuantumChannel, CHANNEL_TOL};

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub before: f64,
    /// Σ_l p_l · RoA(ρ_l).
    pub after_average: f64,
    /// (p_l, RoA(ρ_l)) per branch; zero-probability branches carry 0.
    pub outcomes: Vec<(f64, f64)>,
    /// after_average − before (positive means a violation).
    pub excess: f64,
}

impl MonotonicityReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.excess <= tol
    }
}

/// Average robustness after an instrument whose branches map symmetric
/// operators to symmetric operators. A single trace-preserving channel is a
/// one-branch instrument.
pub fn check_monotonicity(
    rep: &GroupRep,
    rho: &DensityMatrix,
    instrument: &[QuantumChannel],
    opts: &SdpOptions,
) -> Result<MonotonicityReport> {
    for (l, ch) in instrument.iter().enumerate() {
        if !preserves_symmetric_operators(rep, ch, 10.0 * CHANNEL_TOL)? {
            return Err(Error::Precondition(alloc::format!(
                "branch {l} does not map symmetric operators to symmetric operators"
            )));
        }
    }
    let before = robustness_value(rep, rho, opts)?;
    let mut outcomes = Vec::with_capacity(instrument.len());
    let mut after = 0.0;
    for out in apply_instrument(instrument, rho)? {
        let v = match &out.state {
            Some(s) => robustness_value(rep, s, opts)?,
            None => 0.0,
        };
        after += out.probability * v;
        outcomes.push((out.probability, v));
    }
    Ok(MonotonicityReport { before, after_average: after, outcomes, excess: after - before })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexityReport {
    /// RoA(pρ₁ + (1−p)ρ₂).
    pub mixture: f64,
    /// p·RoA(ρ₁) + (1−p)·RoA(ρ₂).
    pub average: f64,
    /// mixture − average (positive means a violation).
    pub excess: f64,
}

impl ConvexityReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.excess <= tol
    }
}

pub fn check_convexity(
    rep: &GroupRep,
    rho1: &DensityMatrix,
    rho2: &DensityMatrix,
    p: f64,
    opts: &SdpOptions,
) -> Result<ConvexityReport> {
    let mix = rho1.mix(rho2, p)?;
    let mixture = robustness_value(rep, &mix, opts)?;
    let average = p * robustness_value(rep, rho1, opts)? + (1.0 - p) * robustness_value(rep, rho2, opts)?;
    Ok(ConvexityReport { mixture, average, excess: mixture - average })
}
