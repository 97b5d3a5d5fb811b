//! Closed-form values and bounds for the robustness of coherence.

use alloc::format;

use crate::error::{Error, Result};
use crate::linalg::{DensityMatrix, HermitianMatrix, SchattenP};
use crate::symmetry::GroupRep;

use super::exact::{detect_exact_class, ExactClass};

/// C_ℓ1(ρ) = Σ_{i≠j} |ρ_ij|.
pub fn l1_coherence(rho: &DensityMatrix) -> f64 {
    let d = rho.dim();
    let mut acc = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            acc += rho[(i, j)].norm();
        }
    }
    2.0 * acc
}

/// (C_ℓ1/(d−1), C_ℓ1), which bracket the robustness of coherence.
pub fn l1_sandwich(rho: &DensityMatrix) -> Result<(f64, f64)> {
    let d = rho.dim();
    if d < 2 {
        return Err(Error::InvalidArgument("the ℓ1 sandwich needs d ≥ 2".into()));
    }
    let c = l1_coherence(rho);
    Ok((c / (d - 1) as f64, c))
}

fn check_c_range(c: f64, d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("dimension {d} < 2")));
    }
    let cmax = (d - 1) as f64;
    // a few ulps of slack so C_ℓ1 of ψ⁺ computed in floating point is accepted
    if !(c >= 0.0 && c <= cmax * (1.0 + 4.0 * f64::EPSILON)) {
        return Err(Error::InvalidArgument(format!("C = {c} outside [0, {cmax}]")));
    }
    Ok(())
}

/// D(C, d) = (C+1)(d−1)(d−1−C), clamped at 0 against rounding.
fn big_d(c: f64, d: f64) -> f64 {
    ((c + 1.0) * (d - 1.0) * (d - 1.0 - c)).max(0.0)
}

/// Lower bound f(C, d) = dC² / ((d−1)(−C(d−2) + 2√D + d(d−2) + 2)).
pub fn f_lower_bound(c: f64, d: usize) -> Result<f64> {
    check_c_range(c, d)?;
    let df = d as f64;
    let c = c.min(df - 1.0);
    let denom = (df - 1.0) * (-c * (df - 2.0) + 2.0 * libm::sqrt(big_d(c, df)) + df * (df - 2.0) + 2.0);
    Ok(df * c * c / denom)
}

/// Largest diagonal entry compatible with C_ℓ1 = C:
/// p ≤ (−C(d−2) + 2√D + d² − 2d + 2)/d².
pub fn max_diag_entry_bound(c: f64, d: usize) -> Result<f64> {
    check_c_range(c, d)?;
    let df = d as f64;
    let c = c.min(df - 1.0);
    let p = (-c * (df - 2.0) + 2.0 * libm::sqrt(big_d(c, df)) + df * df - 2.0 * df + 2.0) / (df * df);
    Ok(p.min(1.0))
}

/// Largest C_ℓ1 compatible with a diagonal entry p: (√p + √(1−p)√(d−1))² − 1.
pub fn l1_bound_from_diag_entry(p: f64, d: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || d < 1 {
        return Err(Error::InvalidArgument(format!("diagonal entry {p} outside [0,1]")));
    }
    let s = libm::sqrt(p) + libm::sqrt(1.0 - p) * libm::sqrt((d - 1) as f64);
    Ok(s * s - 1.0)
}

/// The three purity-based lower bounds and the witness realising the first.
#[derive(Debug, Clone, PartialEq)]
pub struct PurityChain {
    /// ‖ρ−E(ρ)‖₂²/‖E(ρ)‖∞, ‖ρ−E(ρ)‖₂²/‖E(ρ)‖₂, ‖ρ−E(ρ)‖₂² (descending).
    pub values: [f64; 3],
    /// W = (E(ρ) − ρ)/‖E(ρ)‖∞, with −Tr[Wρ] = values[0].
    pub witness: HermitianMatrix,
}

pub fn bound_chain_purity(rep: &GroupRep, rho: &DensityMatrix) -> Result<PurityChain> {
    let e = rep.twirl(rho)?;
    let diff = e.sub(rho);
    let a = diff.frobenius_norm();
    let a = a * a;
    let n_inf = e.schatten_norm(SchattenP::Infinity);
    let n_two = e.schatten_norm(SchattenP::Two);
    Ok(PurityChain { values: [a / n_inf, a / n_two, a], witness: diff.scale(1.0 / n_inf) })
}

/// Every coherence bound evaluated for one state.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub dim: usize,
    pub l1_value: f64,
    pub l1_lower: f64,
    pub l1_upper: f64,
    pub purity_chain: [f64; 3],
    pub f_bound: f64,
    /// Upper bound on any diagonal entry given C_ℓ1.
    pub diag_entry_bound: f64,
    /// Exact robustness of coherence when the state is in a closed-form class.
    pub exact: Option<(f64, ExactClass)>,
}

pub fn bound_report(rho: &DensityMatrix) -> Result<BoundReport> {
    let d = rho.dim();
    let rep = GroupRep::cyclic(d)?;
    let (lower, upper) = l1_sandwich(rho)?;
    let chain = bound_chain_purity(&rep, rho)?;
    let c = upper.min((d - 1) as f64);
    let exact = match detect_exact_class(rho) {
        ExactClass::None => None,
        class => Some((upper, class)),
    };
    Ok(BoundReport {
        dim: d,
        l1_value: upper,
        l1_lower: lower,
        l1_upper: upper,
        purity_chain: chain.values,
        f_bound: f_lower_bound(c, d)?,
        diag_entry_bound: max_diag_entry_bound(c, d)?,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randgen::{maximally_coherent_state, rho_p_family};

    #[test]
    fn f_endpoints() {
        for d in 2..=10 {
            assert_eq!(f_lower_bound(0.0, d).unwrap(), 0.0);
            assert_eq!(f_lower_bound((d - 1) as f64, d).unwrap(), (d - 1) as f64);
        }
        assert!(f_lower_bound(-0.1, 3).is_err());
        assert!(f_lower_bound(2.5, 3).is_err());
    }

    #[test]
    fn diag_bound_endpoints() {
        for d in 2..=8 {
            assert_eq!(max_diag_entry_bound(0.0, d).unwrap(), 1.0);
            let df = d as f64;
            assert!((max_diag_entry_bound(df - 1.0, d).unwrap() - 1.0 / df).abs() < 1e-15);
        }
    }

    #[test]
    fn diag_bound_inverts_direct_form() {
        for d in 2..=6 {
            for k in 0..=20 {
                // p ≥ 1/d is the branch where the direct form is decreasing
                let p = 1.0 / d as f64 + (1.0 - 1.0 / d as f64) * k as f64 / 20.0;
                let c = l1_bound_from_diag_entry(p, d).unwrap().clamp(0.0, (d - 1) as f64);
                let back = max_diag_entry_bound(c, d).unwrap();
                assert!((back - p).abs() < 1e-7, "d={d} p={p} back={back}");
            }
        }
    }

    #[test]
    fn psi_plus_chain_first_value() {
        for d in 2..=6 {
            let rho = maximally_coherent_state(d).unwrap();
            let chain = bound_chain_purity(&GroupRep::cyclic(d).unwrap(), &rho).unwrap();
            assert!((chain.values[0] - (d - 1) as f64).abs() < 1e-12);
            assert!((-chain.witness.inner(&rho) - chain.values[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn sandwich_on_rho_p() {
        let rho = rho_p_family(4, 0.2).unwrap();
        let (lo, hi) = l1_sandwich(&rho).unwrap();
        assert!((lo - 0.2).abs() < 1e-15);
        assert!((hi - 0.6).abs() < 1e-15);
    }
}
