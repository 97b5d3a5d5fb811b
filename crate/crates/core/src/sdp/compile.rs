//! Compilers from the robustness and discrimination programs to [`SdpProblem`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{LinearEqualities, LmiBlock, SdpProblem, Sense};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_basis, hermitian_coords, DensityMatrix, HermitianMatrix};
use crate::symmetry::GroupRep;

/// Primal robustness program: min Tr σ̃ − 1 s.t. σ̃ ⪰ ρ, E(σ̃) = σ̃.
///
/// Variables are the coordinates of σ̃ in the fixed-point basis, so the
/// symmetry constraint is built in. The start point is σ̃ = 2·1.
pub fn compile_roa_primal(rep: &GroupRep, rho: &DensityMatrix) -> Result<SdpProblem> {
    rep.check_dim(rho.dim())?;
    let basis = &rep.fixed_point_basis().elements;
    let d = rho.dim();
    Ok(SdpProblem {
        sense: Sense::Minimize,
        objective: basis.iter().map(|b| b.trace_re()).collect(),
        offset: -1.0,
        blocks: vec![LmiBlock { constant: rho.as_hermitian().scale(-1.0), coeffs: basis.clone() }],
        equalities: None,
        initial_x: Some(rep.fixed_point_basis().coords(&HermitianMatrix::identity(d).scale(2.0))),
    })
}

/// Dual in X-form: max Tr[Xρ] − 1 s.t. X ⪰ 0, E(X) = 1.
///
/// X = 1 + Σ_k y_k C_k over the complement basis (E(C_k) = 0), which encodes
/// the equality exactly. Witness W = 1 − X.
pub fn compile_roa_dual(rep: &GroupRep, rho: &DensityMatrix) -> Result<SdpProblem> {
    rep.check_dim(rho.dim())?;
    let comp = &rep.complement_basis().elements;
    let d = rho.dim();
    Ok(SdpProblem {
        sense: Sense::Maximize,
        objective: comp.iter().map(|c| c.inner(rho)).collect(),
        offset: rho.trace_re() - 1.0,
        blocks: vec![LmiBlock { constant: HermitianMatrix::identity(d), coeffs: comp.clone() }],
        equalities: None,
        initial_x: Some(vec![0.0; comp.len()]),
    })
}

/// Witness dual: max −Tr[Wρ] s.t. W ⪯ 1, E(W) ⪰ 0.
///
/// Variables are the coordinates of W in [`hermitian_basis`].
pub fn compile_roa_witness_dual(rep: &GroupRep, rho: &DensityMatrix) -> Result<SdpProblem> {
    rep.check_dim(rho.dim())?;
    let d = rho.dim();
    let basis = hermitian_basis(d);
    let twirled = basis.iter().map(|h| rep.twirl(h)).collect::<Result<Vec<_>>>()?;
    Ok(SdpProblem {
        sense: Sense::Maximize,
        objective: basis.iter().map(|h| -h.inner(rho)).collect(),
        offset: 0.0,
        blocks: vec![
            LmiBlock { constant: HermitianMatrix::identity(d), coeffs: basis.iter().map(|h| h.scale(-1.0)).collect() },
            LmiBlock { constant: HermitianMatrix::zeros(d), coeffs: twirled },
        ],
        equalities: None,
        initial_x: Some(hermitian_coords(&HermitianMatrix::identity(d).scale(0.5))),
    })
}

fn check_observables(observables: &[HermitianMatrix], values: &[f64], d: usize) -> Result<()> {
    if observables.len() != values.len() {
        return Err(Error::DimensionMismatch { expected: observables.len(), found: values.len() });
    }
    for o in observables {
        if o.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: o.dim() });
        }
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("observable value {v} is not finite")));
    }
    Ok(())
}

/// Best witness built from measured observables:
/// max −(Σ c_i o_i + m) s.t. Σ c_i O_i + m·1 ⪯ 1, E(Σ c_i O_i + m·1) ⪰ 0.
///
/// Variables are (c_1, …, c_k, m).
pub fn compile_witness_from_data(
    observables: &[HermitianMatrix],
    values: &[f64],
    rep: &GroupRep,
) -> Result<SdpProblem> {
    if observables.is_empty() {
        return Err(Error::InvalidArgument("no observables supplied".into()));
    }
    let d = rep.dim();
    check_observables(observables, values, d)?;
    let id = HermitianMatrix::identity(d);
    let mut upper: Vec<HermitianMatrix> = observables.iter().map(|o| o.scale(-1.0)).collect();
    upper.push(id.scale(-1.0));
    let mut twirled = observables.iter().map(|o| rep.twirl(o)).collect::<Result<Vec<_>>>()?;
    twirled.push(id.clone());
    let mut objective: Vec<f64> = values.iter().map(|v| -v).collect();
    objective.push(-1.0);
    let mut start = vec![0.0; observables.len()];
    start.push(0.5);
    Ok(SdpProblem {
        sense: Sense::Maximize,
        objective,
        offset: 0.0,
        blocks: vec![
            LmiBlock { constant: id, coeffs: upper },
            LmiBlock { constant: HermitianMatrix::zeros(d), coeffs: twirled },
        ],
        equalities: None,
        initial_x: Some(start),
    })
}

/// Variable layout of [`compile_data_consistent_roa`]: σ̃ in fixed-point
/// coordinates followed by ρ in [`hermitian_basis`] coordinates.
#[derive(Debug, Clone)]
pub struct DataConsistentLayout {
    pub sigma_basis: Vec<HermitianMatrix>,
    pub rho_basis: Vec<HermitianMatrix>,
}

impl DataConsistentLayout {
    pub fn sigma(&self, x: &[f64]) -> HermitianMatrix {
        combine(&self.sigma_basis, &x[..self.sigma_basis.len()])
    }

    pub fn rho(&self, x: &[f64]) -> HermitianMatrix {
        combine(&self.rho_basis, &x[self.sigma_basis.len()..])
    }
}

fn combine(basis: &[HermitianMatrix], coords: &[f64]) -> HermitianMatrix {
    let d = basis.first().map_or(0, |b| b.dim());
    let mut out = HermitianMatrix::zeros(d);
    for (b, &x) in basis.iter().zip(coords) {
        out.axpy(x, b);
    }
    out
}

/// Smallest robustness over all states reproducing the data:
/// min Tr σ̃ − 1 s.t. σ̃ ⪰ ρ, E(σ̃) = σ̃, ρ ⪰ 0, Tr ρ = 1, Tr[O_i ρ] = o_i.
pub fn compile_data_consistent_roa(
    observables: &[HermitianMatrix],
    values: &[f64],
    rep: &GroupRep,
) -> Result<(SdpProblem, DataConsistentLayout)> {
    let d = rep.dim();
    check_observables(observables, values, d)?;
    let sigma_basis = rep.fixed_point_basis().elements.clone();
    let rho_basis = hermitian_basis(d);
    let ns = sigma_basis.len();
    let nr = rho_basis.len();

    let mut diff_coeffs = sigma_basis.clone();
    diff_coeffs.extend(rho_basis.iter().map(|h| h.scale(-1.0)));
    let mut rho_coeffs = vec![HermitianMatrix::zeros(d); ns];
    rho_coeffs.extend(rho_basis.iter().cloned());

    let mut rows = Vec::with_capacity(observables.len() + 1);
    let mut rhs = Vec::with_capacity(observables.len() + 1);
    let row_for = |o: &HermitianMatrix| {
        let mut r = vec![0.0; ns];
        r.extend(rho_basis.iter().map(|h| h.inner(o)));
        r
    };
    rows.push(row_for(&HermitianMatrix::identity(d)));
    rhs.push(1.0);
    for (o, &v) in observables.iter().zip(values) {
        rows.push(row_for(o));
        rhs.push(v);
    }

    let mut objective: Vec<f64> = sigma_basis.iter().map(|b| b.trace_re()).collect();
    objective.extend(core::iter::repeat_n(0.0, nr));
    let mut start = rep.fixed_point_basis().coords(&HermitianMatrix::identity(d).scale(2.0));
    start.extend(hermitian_coords(&HermitianMatrix::identity(d).scale(1.0 / d as f64)));

    let problem = SdpProblem {
        sense: Sense::Minimize,
        objective,
        offset: -1.0,
        blocks: vec![
            LmiBlock { constant: HermitianMatrix::zeros(d), coeffs: diff_coeffs },
            LmiBlock { constant: HermitianMatrix::zeros(d), coeffs: rho_coeffs },
        ],
        equalities: Some(LinearEqualities { rows, rhs }),
        initial_x: Some(start),
    };
    Ok((problem, DataConsistentLayout { sigma_basis, rho_basis }))
}

/// Variable layout of [`compile_discrimination_povm`]: M_1, …, M_{n−1} in
/// [`hermitian_basis`] coordinates; M_n = 1 − Σ_{g<n} M_g.
#[derive(Debug, Clone)]
pub struct PovmLayout {
    pub outcomes: usize,
    pub basis: Vec<HermitianMatrix>,
}

impl PovmLayout {
    pub fn elements(&self, x: &[f64]) -> Vec<HermitianMatrix> {
        let m = self.basis.len();
        let d = self.basis[0].dim();
        let mut out: Vec<HermitianMatrix> =
            (0..self.outcomes - 1).map(|g| combine(&self.basis, &x[g * m..(g + 1) * m])).collect();
        let mut last = HermitianMatrix::identity(d);
        for e in &out {
            last = last.sub(e);
        }
        out.push(last);
        out
    }
}

/// Optimal POVM for guessing which of `states` was prepared:
/// max Σ_g p_g Tr[ρ_g M_g] s.t. M_g ⪰ 0, Σ_g M_g = 1.
pub fn compile_discrimination_povm(
    states: &[DensityMatrix],
    priors: &[f64],
) -> Result<(SdpProblem, PovmLayout)> {
    let n = states.len();
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two states to discriminate".into()));
    }
    if priors.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: priors.len() });
    }
    if priors.iter().any(|p| !(*p >= 0.0)) {
        return Err(Error::InvalidArgument("priors must be nonnegative".into()));
    }
    let total: f64 = priors.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!("priors sum to {total}, not 1")));
    }
    let d = states[0].dim();
    for s in states {
        if s.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: s.dim() });
        }
    }
    let basis = hermitian_basis(d);
    let m = basis.len();
    let nv = (n - 1) * m;
    let last = states[n - 1].as_hermitian().scale(priors[n - 1]);

    let mut objective = Vec::with_capacity(nv);
    for g in 0..n - 1 {
        let weighted = states[g].as_hermitian().scale(priors[g]).sub(&last);
        objective.extend(basis.iter().map(|h| h.inner(&weighted)));
    }
    let zero = HermitianMatrix::zeros(d);
    let mut blocks = Vec::with_capacity(n);
    for g in 0..n - 1 {
        let coeffs = (0..nv).map(|k| if k / m == g { basis[k % m].clone() } else { zero.clone() }).collect();
        blocks.push(LmiBlock { constant: zero.clone(), coeffs });
    }
    blocks.push(LmiBlock {
        constant: HermitianMatrix::identity(d),
        coeffs: (0..nv).map(|k| basis[k % m].scale(-1.0)).collect(),
    });
    let start_one = hermitian_coords(&HermitianMatrix::identity(d).scale(1.0 / n as f64));
    let start = (0..n - 1).flat_map(|_| start_one.iter().copied()).collect();
    let problem = SdpProblem {
        sense: Sense::Maximize,
        objective,
        offset: last.trace_re(),
        blocks,
        equalities: None,
        initial_x: Some(start),
    };
    Ok((problem, PovmLayout { outcomes: n, basis }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primal_structure_for_cyclic() {
        let rep = GroupRep::cyclic(3).unwrap();
        let p = compile_roa_primal(&rep, &DensityMatrix::maximally_mixed(3)).unwrap();
        assert_eq!(p.num_vars(), 3);
        assert_eq!(p.blocks.len(), 1);
        assert_eq!(p.blocks[0].dim(), 3);
        p.validate().unwrap();
    }

    #[test]
    fn dual_structure_for_cyclic() {
        let rep = GroupRep::cyclic(4).unwrap();
        let p = compile_roa_dual(&rep, &DensityMatrix::maximally_mixed(4)).unwrap();
        assert_eq!(p.num_vars(), 12);
        for c in &p.blocks[0].coeffs {
            assert!(rep.twirl(c).unwrap().frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn povm_layout_completes_to_identity() {
        let s = [DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(2)];
        let (p, layout) = compile_discrimination_povm(&s, &[0.2, 0.3, 0.5]).unwrap();
        let els = layout.elements(p.initial_x.as_ref().unwrap());
        let mut sum = HermitianMatrix::zeros(2);
        for e in &els {
            sum = sum.add(e);
        }
        assert!(sum.sub(&HermitianMatrix::identity(2)).frobenius_norm() < 1e-14);
        assert!((els[2].trace_re() - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_priors() {
        let s = [DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(2)];
        assert!(compile_discrimination_povm(&s, &[0.5, 0.6]).is_err());
        assert!(compile_discrimination_povm(&s, &[1.2, -0.2]).is_err());
    }
}
