mod common;

use coherence_forge_core::randgen::{
    maximally_coherent_state, random_covariant_channel, random_density_matrix, random_state_vector, rho_p_family,
    SeededSource,
};
use coherence_forge_core::robustness::{
    bound_chain_purity, check_convexity, check_monotonicity, estimate_from_data, f_lower_bound, l1_coherence,
    robustness_of_asymmetry, robustness_of_asymmetry_with, robustness_of_coherence, robustness_value,
    witness_from_data, CoherenceOptions, DualForm,
};
use coherence_forge_core::{CMatrix, DensityMatrix, GroupRep, HermitianMatrix, SdpOptions, SdpStatus};
use common::{abs_sum_squared_minus_one, c, roc_bisection};
use proptest::prelude::*;

fn opts() -> SdpOptions {
    SdpOptions::default()
}

fn paulis() -> Vec<HermitianMatrix> {
    let m = |v: [(f64, f64); 4]| {
        HermitianMatrix::new(CMatrix::from_vec(2, 2, v.iter().map(|&(a, b)| c(a, b)).collect()).unwrap()).unwrap()
    };
    vec![
        m([(1., 0.), (0., 0.), (0., 0.), (1., 0.)]),
        m([(0., 0.), (1., 0.), (1., 0.), (0., 0.)]),
        m([(0., 0.), (0., -1.), (0., 1.), (0., 0.)]),
        m([(1., 0.), (0., 0.), (0., 0.), (-1., 0.)]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn coherence_respects_every_bound(seed in any::<u64>(), d in 2usize..=4, rank in 1usize..=4) {
        let rho = random_density_matrix(d, rank.min(d), &mut SeededSource::new(seed)).unwrap();
        let v = robustness_of_asymmetry(&GroupRep::cyclic(d).unwrap(), &rho, &opts()).unwrap();
        prop_assert!(v.is_optimal());
        let cl1 = l1_coherence(&rho);
        prop_assert!(v.value <= cl1 + 1e-7);
        prop_assert!(v.value >= cl1 / (d - 1) as f64 - 1e-7);
        prop_assert!(f_lower_bound(cl1.min((d - 1) as f64), d).unwrap() <= v.value + 1e-6);
        let chain = bound_chain_purity(&GroupRep::cyclic(d).unwrap(), &rho).unwrap().values;
        prop_assert!(chain[0] <= v.value + 1e-6);
    }

    #[test]
    fn certificate_is_feasible_and_tight(seed in any::<u64>(), d in 2usize..=4) {
        let rho = random_density_matrix(d, d, &mut SeededSource::new(seed)).unwrap();
        for form in [DualForm::XForm, DualForm::Witness] {
            let cert = robustness_of_asymmetry_with(&GroupRep::cyclic(d).unwrap(), &rho, &opts(), form).unwrap();
            let r = cert.residuals;
            prop_assert!(r.dominance >= -1e-7);
            prop_assert!(r.witness_upper >= -1e-7);
            prop_assert!(r.witness_twirl >= -1e-7);
            prop_assert!(r.sigma_symmetry < 1e-9);
            prop_assert!(r.gap <= 1e-6 * (1.0 + cert.value));
            if let Some(p) = r.pseudomixture {
                prop_assert!(p < 1e-9);
            }
        }
    }

    #[test]
    fn closed_form_agrees_with_sdp_for_pure_states(seed in any::<u64>(), d in 2usize..=5) {
        let psi = random_state_vector(d, &mut SeededSource::new(seed)).unwrap();
        let rho = DensityMatrix::pure(&psi).unwrap();
        let sdp = robustness_value(&GroupRep::cyclic(d).unwrap(), &rho, &opts()).unwrap();
        prop_assert!((sdp - abs_sum_squared_minus_one(&psi)).abs() < 1e-6);
        let fast = robustness_of_coherence(&rho, &CoherenceOptions::default()).unwrap();
        prop_assert!((fast.value - abs_sum_squared_minus_one(&psi)).abs() < 1e-12);
    }

    #[test]
    fn monotone_under_covariant_channels(seed in any::<u64>(), d in 2usize..=3) {
        let rep = GroupRep::cyclic(d).unwrap();
        let mut src = SeededSource::new(seed);
        let rho = random_density_matrix(d, d, &mut src).unwrap();
        let ch = random_covariant_channel(&rep, 0.7, &mut src).unwrap();
        let r = check_monotonicity(&rep, &rho, &[ch], &opts()).unwrap();
        prop_assert!(r.holds(1e-7), "excess {}", r.excess);
    }

    #[test]
    fn convex_in_the_state(seed in any::<u64>(), d in 2usize..=3, p in 0.0f64..=1.0) {
        let rep = GroupRep::cyclic(d).unwrap();
        let mut src = SeededSource::new(seed);
        let a = random_density_matrix(d, 1, &mut src).unwrap();
        let b = random_density_matrix(d, d, &mut src).unwrap();
        prop_assert!(check_convexity(&rep, &a, &b, p, &opts()).unwrap().holds(1e-7));
    }
}

#[test]
fn matches_bisection_oracle() {
    let mut s = SeededSource::new(2024);
    for d in [2, 2, 2, 3, 3, 3] {
        let rho = random_density_matrix(d, d, &mut s).unwrap();
        let sdp = robustness_value(&GroupRep::cyclic(d).unwrap(), &rho, &opts()).unwrap();
        let oracle = roc_bisection(&rho);
        assert!((sdp - oracle).abs() < 1e-6, "d={d}: {sdp} vs {oracle}");
    }
}

#[test]
fn maximal_states() {
    for d in 2..=6 {
        let v = robustness_value(&GroupRep::cyclic(d).unwrap(), &maximally_coherent_state(d).unwrap(), &opts()).unwrap();
        assert!((v - (d - 1) as f64).abs() < 1e-6);
    }
}

#[test]
fn rho_p_family_values() {
    for d in 3..=5 {
        let rep = GroupRep::cyclic(d).unwrap();
        for k in 0..=4 {
            let p = k as f64 / (4.0 * (d - 1) as f64);
            let rho = rho_p_family(d, p).unwrap();
            assert!((robustness_value(&rep, &rho, &opts()).unwrap() - p).abs() < 1e-6);
        }
    }
}

#[test]
fn pauli_group_asymmetry_is_spectral() {
    // twirl over the Paulis depolarises, so RoA = 2 λ_max − 1
    let ps = paulis();
    let rep = GroupRep::new(ps.iter().map(|p| p.as_matrix().clone()).collect(), None).unwrap();
    let mut s = SeededSource::new(8);
    for _ in 0..10 {
        let rho = random_density_matrix(2, 2, &mut s).unwrap();
        let m = rho.as_matrix();
        let (a, b, off) = (m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)].norm());
        let lmax = 0.5 * (a + b) + (0.25 * (a - b).powi(2) + off * off).sqrt();
        let v = robustness_of_asymmetry(&rep, &rho, &opts()).unwrap();
        assert!((v.value - (2.0 * lmax - 1.0)).abs() < 1e-6);
    }
}

#[test]
fn trivial_group_has_no_asymmetry() {
    let rho = random_density_matrix(3, 2, &mut SeededSource::new(3)).unwrap();
    assert!(robustness_value(&GroupRep::trivial(3).unwrap(), &rho, &opts()).unwrap() < 1e-7);
}

#[test]
fn data_programs_with_complete_qubit_data() {
    let rep = GroupRep::cyclic(2).unwrap();
    let obs = paulis();
    let mut s = SeededSource::new(77);
    for _ in 0..10 {
        let rho = random_density_matrix(2, 2, &mut s).unwrap();
        let vals: Vec<f64> = obs.iter().map(|o| o.inner(&rho)).collect();
        let exact = 2.0 * rho[(0, 1)].norm();
        let w = witness_from_data(&obs, &vals, &rep, &opts()).unwrap();
        assert_eq!(w.status, SdpStatus::Optimal);
        assert!((w.value - exact).abs() < 1e-6);
        let e = estimate_from_data(&obs, &vals, &rep, &opts()).unwrap();
        assert!((e.value.unwrap() - exact).abs() < 1e-6);
        assert!(e.state.unwrap().sub(&rho).frobenius_norm() < 1e-6);
    }
}

#[test]
fn partial_data_brackets_the_truth() {
    // with only ⟨X⟩ the witness bound is a lower bound and the estimate the
    // least robustness over compatible states; both stay below the truth
    let rep = GroupRep::cyclic(2).unwrap();
    let obs = vec![paulis()[1].clone()];
    let rho = random_density_matrix(2, 2, &mut SeededSource::new(5)).unwrap();
    let vals = vec![obs[0].inner(&rho)];
    let truth = 2.0 * rho[(0, 1)].norm();
    let w = witness_from_data(&obs, &vals, &rep, &opts()).unwrap();
    let e = estimate_from_data(&obs, &vals, &rep, &opts()).unwrap();
    assert!(w.value <= truth + 1e-7);
    assert!(e.value.unwrap() <= truth + 1e-7);
    assert!((w.value - vals[0].abs()).abs() < 1e-6);
}

#[test]
fn unphysical_data_is_infeasible() {
    let rep = GroupRep::cyclic(2).unwrap();
    // Bloch vector of length 1.5
    let vals = vec![1.0, 1.5, 0.0, 0.0];
    let e = estimate_from_data(&paulis(), &vals, &rep, &opts()).unwrap();
    assert_eq!(e.status, SdpStatus::Infeasible);
    assert!(e.value.is_none());
}
