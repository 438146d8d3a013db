mod common;

use common::rng;
use proptest::prelude::*;
use qload_core::datasets::iqp_state;
use qload_core::iqp::{
    iqp_entropy_formula, iqp_exact_load, iqp_residual_state, iqp_shot_recover, iqp_x_formula, pi8_spec,
    random_continuous_spec, random_grid_spec, shot_budget, ShotRecoveryOptions,
};
use qload_core::state::{pauli_expectation, Pauli};
use qload_core::{entanglement_measure, fidelity, StateVector};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn x_formula_matches_statevector(n in 2usize..=8, e in 0usize..=12, seed in any::<u64>()) {
        let e = e.min(n * (n - 1) / 2);
        let spec = random_continuous_spec(n, e, None, &mut rng(seed)).unwrap();
        let v = iqp_residual_state(&spec).unwrap();
        for q in 0..n {
            let x = iqp_x_formula(&spec, q).unwrap();
            prop_assert!((pauli_expectation(&v, Pauli::X, q).unwrap() - x).abs() < 1e-12);
            prop_assert!(pauli_expectation(&v, Pauli::Y, q).unwrap().abs() < 1e-12);
            prop_assert!(pauli_expectation(&v, Pauli::Z, q).unwrap().abs() < 1e-12);
        }
        let s = entanglement_measure(&v).unwrap().total;
        prop_assert!((s - iqp_entropy_formula(&spec).unwrap()).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn exact_load_certificate(n in 2usize..=8, e in 0usize..=10, k in 1usize..=3, seed in any::<u64>()) {
        let e = e.min(n * (n - 1) / 2);
        let spec = random_grid_spec(n, e, k, &mut rng(seed)).unwrap();
        let target = iqp_state(&spec).unwrap();
        let out = iqp_exact_load(&target, k, e).unwrap();
        prop_assert!(out.iterations() <= e);
        prop_assert_eq!(out.edge_set(), spec.edge_set());
        let loaded = qload_core::apply_circuit(&StateVector::zero(n), &out.circuit, &out.params).unwrap();
        prop_assert!(1.0 - fidelity(&target, &loaded).unwrap() < 1e-9);
        prop_assert!(out.infidelity < 1e-9);
    }
}

#[test]
fn single_edge_shot_recovery_meets_delta() {
    let delta = 0.05;
    let target = iqp_state(&pi8_spec(2, &[(0, 1)]).unwrap()).unwrap();
    let budget = shot_budget(2, 1, 1, delta, qload_core::iqp::SHOT_CONSTANT).unwrap();
    let mut ok = 0;
    for seed in 0..200 {
        let mut opts = ShotRecoveryOptions::new(1, delta, seed);
        opts.max_edges = Some(1);
        if let Ok(out) = iqp_shot_recover(&target, &opts) {
            if out.edge_set() == [(0, 1)] && out.infidelity < 1e-9 {
                ok += 1;
            }
            // One pair, one iteration: two angles × two qubits, then three
            // Pauli estimates per qubit for the product state.
            assert_eq!(out.shots_used, 4 * budget + 3 * 2 * budget);
        }
    }
    assert!(ok as f64 >= 200.0 * (1.0 - delta), "{ok}/200");
}

#[test]
fn empty_graph_recovers_nothing() {
    let target = iqp_state(&pi8_spec(4, &[]).unwrap()).unwrap();
    let out = iqp_shot_recover(&target, &ShotRecoveryOptions::new(1, 0.05, 1)).unwrap();
    assert!(out.edge_set().is_empty());
    assert_eq!(out.iterations(), 0);
}
