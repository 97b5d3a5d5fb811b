mod common;

use coherence_forge_core::randgen::{random_covariant_channel, random_density_matrix, SeededSource};
use coherence_forge_core::symmetry::{is_covariant, preserves_symmetric_operators, CHANNEL_TOL};
use coherence_forge_core::{CMatrix, Complex64, GroupRep, HermitianMatrix, QuantumChannel};
use common::c;
use proptest::prelude::*;

fn hermitian(d: usize) -> impl Strategy<Value = HermitianMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * d * d).prop_map(move |v| {
        HermitianMatrix::from_hermitian_part(&CMatrix::from_fn(d, d, |i, j| c(v[i * d + j], v[d * d + i * d + j])))
    })
}

/// Z_2 × Z_2 acting on a qubit by the Paulis (projectively).
fn pauli_group() -> GroupRep {
    let id = CMatrix::identity(2);
    let x = CMatrix::from_vec(2, 2, vec![c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap();
    let y = CMatrix::from_vec(2, 2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap();
    let z = CMatrix::from_vec(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]).unwrap();
    GroupRep::new(vec![id, x, y, z], None).unwrap()
}

proptest! {
    #[test]
    fn cyclic_twirl_is_dephasing(d in 2usize..=6, seed in any::<u64>()) {
        let rep = GroupRep::cyclic(d).unwrap();
        let rho = random_density_matrix(d, d, &mut SeededSource::new(seed)).unwrap();
        let t = rep.twirl(&rho).unwrap();
        for i in 0..d {
            for j in 0..d {
                let want = if i == j { rho[(i, i)] } else { Complex64::new(0.0, 0.0) };
                prop_assert!((t[(i, j)] - want).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn twirl_is_an_orthogonal_projector((h, k) in (2usize..=5).prop_flat_map(|d| (hermitian(d), hermitian(d)))) {
        let rep = GroupRep::cyclic(h.dim()).unwrap();
        let th = rep.twirl(&h).unwrap();
        // idempotent
        prop_assert!(rep.twirl(&th).unwrap().sub(&th).frobenius_norm() < 1e-12);
        // self-adjoint under Tr[AB]
        let tk = rep.twirl(&k).unwrap();
        prop_assert!((th.inner(&k) - h.inner(&tk)).abs() < 1e-12);
        // trace preserving
        prop_assert!((th.trace_re() - h.trace_re()).abs() < 1e-12);
    }

    #[test]
    fn pauli_twirl_is_fully_depolarising(h in hermitian(2)) {
        let rep = pauli_group();
        let t = rep.twirl(&h).unwrap();
        let want = HermitianMatrix::identity(2).scale(h.trace_re() / 2.0);
        prop_assert!(t.sub(&want).frobenius_norm() < 1e-12);
    }

    #[test]
    fn fixed_point_basis_spans_the_twirl_image(h in (2usize..=5).prop_flat_map(hermitian)) {
        let rep = GroupRep::cyclic(h.dim()).unwrap();
        let basis = rep.fixed_point_basis();
        prop_assert_eq!(basis.len(), h.dim());
        let t = rep.twirl(&h).unwrap();
        prop_assert!(basis.combine(&basis.coords(&t)).sub(&t).frobenius_norm() < 1e-12);
    }

    #[test]
    fn sampled_covariant_channels_are_covariant(seed in any::<u64>(), d in 2usize..=4) {
        let rep = GroupRep::cyclic(d).unwrap();
        let ch = random_covariant_channel(&rep, 0.5, &mut SeededSource::new(seed)).unwrap();
        prop_assert!(ch.is_trace_preserving());
        prop_assert!(is_covariant(&rep, &ch, CHANNEL_TOL).unwrap());
        prop_assert!(preserves_symmetric_operators(&rep, &ch, 10.0 * CHANNEL_TOL).unwrap());
    }
}

#[test]
fn pauli_fixed_space_is_the_identity() {
    let rep = pauli_group();
    assert_eq!(rep.fixed_point_basis().len(), 1);
    assert_eq!(rep.complement_basis().len(), 3);
}

#[test]
fn dephasing_covariant_fourier_not() {
    let rep = GroupRep::cyclic(3).unwrap();
    assert!(is_covariant(&rep, &QuantumChannel::dephasing(3), CHANNEL_TOL).unwrap());
    // the discrete Fourier transform maps |0⟩⟨0| to ψ⁺
    let w = std::f64::consts::TAU / 3.0;
    let f = CMatrix::from_fn(3, 3, |i, j| Complex64::from_polar(1.0 / 3f64.sqrt(), w * (i * j) as f64));
    let ch = QuantumChannel::unitary(f).unwrap();
    assert!(!is_covariant(&rep, &ch, CHANNEL_TOL).unwrap());
    assert!(!preserves_symmetric_operators(&rep, &ch, CHANNEL_TOL).unwrap());
}

#[test]
fn non_closed_set_is_rejected() {
    let t = CMatrix::identity(2);
    let s = CMatrix::from_vec(2, 2, vec![c(1., 0.), c(0., 0.), c(0., 0.), Complex64::from_polar(1.0, 0.3)]).unwrap();
    assert!(GroupRep::new(vec![t, s], None).is_err());
}
