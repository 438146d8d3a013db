mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use qload_core::datasets::{
    dense_ground_state, ground_state, kernel_matrix, magnetization, random_circuit_state, random_circuit_state_2d,
    random_mps_state, SpinHamiltonianSpec,
};
use qload_core::fidelity;

#[test]
fn lanczos_matches_dense() {
    let mut specs = Vec::new();
    for n in [2usize, 3, 5, 8, 10] {
        for (j, g) in [(1.0, 1.0), (1.0, 0.5), (0.8, 1.0), (1.0, 2.0)] {
            specs.push(SpinHamiltonianSpec::tfim_chain(n, j, g));
        }
    }
    specs.push(SpinHamiltonianSpec::tfim_chain(11, 1.0, 1.2));
    specs.push(SpinHamiltonianSpec::tfim_chain(12, 1.0, 1.0));
    for (r, c) in [(1usize, 2usize), (2, 2), (2, 3), (3, 3)] {
        specs.push(SpinHamiltonianSpec::xxz_grid(r, c, 1.0, 0.5));
    }
    for spec in specs {
        let lz = ground_state(&spec).unwrap();
        let de = dense_ground_state(&spec).unwrap();
        assert!((lz.energy - de.energy).abs() < 1e-8, "{spec:?}: {} vs {}", lz.energy, de.energy);
        assert!(lz.residual < 1e-8);
        // The pinning field selects a unique TFIM ground state; XXZ grids can
        // be degenerate, so only the energy is compared there.
        if matches!(spec.model, qload_core::datasets::Model::Tfim { .. }) {
            let f = fidelity(&lz.state, &de.state).unwrap();
            assert!(f >= 1.0 - 1e-10, "{spec:?}: fidelity {f}");
        }
    }
}

#[test]
fn tfim_magnetization_is_monotone_in_field() {
    let m: Vec<f64> = [0.5, 0.8, 1.0, 1.25, 2.0]
        .iter()
        .map(|&g| magnetization(&ground_state(&SpinHamiltonianSpec::tfim_chain(10, 1.0, g)).unwrap().state).unwrap())
        .collect();
    for w in m.windows(2) {
        assert!(w[1] > w[0], "{m:?}");
    }
    assert!(m[4] > 0.9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn generators_are_pure_in_seed(n in 2usize..=8, w in 0usize..=20, seed in any::<u64>()) {
        prop_assert_eq!(random_circuit_state(n, w, seed).unwrap(), random_circuit_state(n, w, seed).unwrap());
        prop_assert_eq!(random_circuit_state_2d(2, 3, 4, seed).unwrap(), random_circuit_state_2d(2, 3, 4, seed).unwrap());
        let a = random_mps_state(n, 2, &mut common::rng(seed)).unwrap();
        prop_assert_eq!(a, random_mps_state(n, 2, &mut common::rng(seed)).unwrap());
    }

    #[test]
    fn kernel_is_psd(n in 1usize..=5, seed in any::<u64>()) {
        let states: Vec<_> = (0..20).map(|i| common::state(n, seed.wrapping_add(i))).collect();
        let k = kernel_matrix(&states).unwrap();
        let m = DMatrix::from_row_slice(20, 20, &k);
        for i in 0..20 {
            prop_assert!((m[(i, i)] - 1.0).abs() < 1e-12);
            for j in 0..20 {
                prop_assert!(m[(i, j)] == m[(j, i)]);
                prop_assert!((0.0..=1.0 + 1e-12).contains(&m[(i, j)]));
            }
        }
        prop_assert!(m.symmetric_eigenvalues().min() >= -1e-10);
    }
}
