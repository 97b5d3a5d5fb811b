mod common;

use coherence_forge_core::linalg::hermitian_basis;
use coherence_forge_core::sdp::{solve, LinearEqualities, LmiBlock, Sense};
use coherence_forge_core::{CMatrix, HermitianMatrix, SdpOptions, SdpProblem, SdpStatus};
use common::{c, charpoly_eigenvalues};
use proptest::prelude::*;

fn hermitian(d: usize) -> impl Strategy<Value = HermitianMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * d * d).prop_map(move |v| {
        HermitianMatrix::from_hermitian_part(&CMatrix::from_fn(d, d, |i, j| c(v[i * d + j], v[d * d + i * d + j])))
    })
}

/// λ_max(A) = min t s.t. t·1 − A ⪰ 0.
fn lambda_max_problem(a: &HermitianMatrix) -> SdpProblem {
    SdpProblem {
        sense: Sense::Minimize,
        objective: vec![1.0],
        offset: 0.0,
        blocks: vec![LmiBlock { constant: a.scale(-1.0), coeffs: vec![HermitianMatrix::identity(a.dim())] }],
        equalities: None,
        initial_x: None,
    }
}

/// λ_min(A) = min Tr[AX] s.t. X ⪰ 0, Tr X = 1, written over Hermitian coordinates.
fn lambda_min_problem(a: &HermitianMatrix) -> SdpProblem {
    let d = a.dim();
    let basis = hermitian_basis(d);
    SdpProblem {
        sense: Sense::Minimize,
        objective: basis.iter().map(|b| b.inner(a)).collect(),
        offset: 0.0,
        blocks: vec![LmiBlock { constant: HermitianMatrix::zeros(d), coeffs: basis.clone() }],
        equalities: Some(LinearEqualities { rows: vec![basis.iter().map(|b| b.trace_re()).collect()], rhs: vec![1.0] }),
        initial_x: None,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn largest_eigenvalue_by_lmi(a in (2usize..=4).prop_flat_map(hermitian)) {
        let sol = solve(&lambda_max_problem(&a), &SdpOptions::default()).unwrap();
        prop_assert_eq!(sol.status, SdpStatus::Optimal);
        let oracle = *charpoly_eigenvalues(&a).last().unwrap();
        prop_assert!((sol.primal_value - oracle).abs() < 1e-7);
        prop_assert!(sol.gap() < 1e-7);
    }

    #[test]
    fn smallest_eigenvalue_with_equality(a in (2usize..=4).prop_flat_map(hermitian)) {
        let sol = solve(&lambda_min_problem(&a), &SdpOptions::default()).unwrap();
        prop_assert_eq!(sol.status, SdpStatus::Optimal);
        prop_assert!((sol.primal_value - charpoly_eigenvalues(&a)[0]).abs() < 1e-7);
        prop_assert!(sol.complementarity.abs() < 1e-7);
    }
}

#[test]
fn contradictory_blocks_are_infeasible() {
    // x ≥ 1 and x ≤ −1
    let one = HermitianMatrix::identity(1);
    let p = SdpProblem {
        sense: Sense::Minimize,
        objective: vec![1.0],
        offset: 0.0,
        blocks: vec![
            LmiBlock { constant: one.scale(-1.0), coeffs: vec![one.clone()] },
            LmiBlock { constant: one.scale(-1.0), coeffs: vec![one.scale(-1.0)] },
        ],
        equalities: None,
        initial_x: None,
    };
    assert_eq!(solve(&p, &SdpOptions::default()).unwrap().status, SdpStatus::Infeasible);
}

#[test]
fn inconsistent_equalities_are_infeasible() {
    let mut p = lambda_min_problem(&HermitianMatrix::identity(2));
    let row = p.equalities.as_ref().unwrap().rows[0].clone();
    p.equalities = Some(LinearEqualities { rows: vec![row.clone(), row], rhs: vec![1.0, 2.0] });
    assert_eq!(solve(&p, &SdpOptions::default()).unwrap().status, SdpStatus::Infeasible);
}

#[test]
fn malformed_problem_is_rejected() {
    let mut p = lambda_max_problem(&HermitianMatrix::identity(2));
    p.objective.push(0.0);
    assert!(solve(&p, &SdpOptions::default()).is_err());
}

#[test]
fn iteration_cap_reports_failure() {
    let a = HermitianMatrix::from_real_diag(&[0.3, -0.2, 0.9]);
    let opts = SdpOptions { max_iters: 1, ..SdpOptions::default() };
    assert_eq!(solve(&lambda_min_problem(&a), &opts).unwrap().status, SdpStatus::NumericalFailure);
}
