mod common;

use common::{random_circuit, random_product, rng, state};
use nalgebra::Matrix2;
use proptest::prelude::*;
use qload_core::entropy::{overlap_with, product_amplitudes};
use qload_core::linalg::C64;
use qload_core::noisy::{depolarize_global, DensityMatrix};
use qload_core::random::random_rdm1;
use qload_core::state::rdm1;
use qload_core::{
    apply_circuit, apply_circuit_adjoint, bound_f1, bound_f2, depol_entropy_bounds, entanglement_measure, fidelity,
    max_product_fidelity, product_params, StateVector,
};
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bound_envelope(n in 2usize..=6, p in 1usize..=30, seed in any::<u64>()) {
        let mut r = rng(seed);
        let target = state(n, seed ^ 7);
        let (c, params) = random_circuit(n, p, &mut r);
        let v = apply_circuit_adjoint(&target, &c, &params).unwrap();
        let s = entanglement_measure(&v).unwrap().total;
        let lo = bound_f1(s, n).unwrap();
        let hi = bound_f2(s).unwrap();
        for _ in 0..50 {
            let prod = random_product(n, &mut r);
            let loaded = apply_circuit(&prod, &c, &params).unwrap();
            prop_assert!(1.0 - fidelity(&target, &loaded).unwrap() >= lo - 1e-9);
        }
        let factors: Vec<[C64; 2]> = (0..n)
            .map(|q| {
                let pp = product_params(&rdm1(&v, q).unwrap());
                product_amplitudes(pp.beta, pp.gamma)
            })
            .collect();
        let loaded = apply_circuit(&StateVector::product(&factors).unwrap(), &c, &params).unwrap();
        prop_assert!(1.0 - fidelity(&target, &loaded).unwrap() <= hi + 1e-9);
    }
}

#[test]
fn max_product_fidelity_is_top_eigenvalue() {
    let mut r = rng(11);
    for _ in 0..1000 {
        let rho = random_rdm1(&mut r);
        let m = rho.matrix();
        let dense = Matrix2::new(m[0][0], m[0][1], m[1][0], m[1][1]);
        let top = dense.symmetric_eigenvalues().max();
        let mpf = max_product_fidelity(&rho).unwrap();
        assert!((mpf - top).abs() < 1e-10, "{mpf} vs {top}");
        let pp = product_params(&rho);
        assert!((overlap_with(&rho, &product_amplitudes(pp.beta, pp.gamma)) - top).abs() < 1e-9);
    }
}

#[test]
fn bounds_are_cubic_close_to_linearization() {
    let ln2 = std::f64::consts::LN_2;
    let grid = [1e-4, 1e-3, 1e-2];
    let c2 = grid.iter().map(|&s| (bound_f2(s).unwrap() - ln2 / 2.0 * s).abs() / (s * s * s)).fold(0.0, f64::max);
    assert!(c2 <= 1.0, "f2 constant {c2}");
    for n in [2usize, 4, 10] {
        let c1 = grid
            .iter()
            .map(|&s| (bound_f1(s, n).unwrap() - ln2 / (2.0 * n as f64) * s).abs() / (s * s * s))
            .fold(0.0, f64::max);
        assert!(c1 <= 1.0, "f1 constant {c1} at N={n}");
    }
}

fn random_density(n: usize, seed: u64) -> DensityMatrix {
    let mut r = rng(seed);
    if r.random_bool(0.5) {
        return DensityMatrix::from_pure(&state(n, seed)).unwrap();
    }
    let k = r.random_range(2..=4);
    let w: Vec<f64> = (0..k).map(|_| r.random::<f64>() + 1e-3).collect();
    let total: f64 = w.iter().sum();
    let parts: Vec<(f64, StateVector)> =
        w.iter().enumerate().map(|(i, x)| (x / total, state(n, seed.wrapping_add(i as u64 + 1)))).collect();
    DensityMatrix::from_mixture(&parts).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn depolarized_entropy_within_bounds(n in 2usize..=6, seed in any::<u64>()) {
        let rho = random_density(n, seed);
        let s = rho.total_entropy().unwrap();
        for p in [0.0, 0.05, 0.2, 0.5, 1.0] {
            let sp = depolarize_global(&rho, p).unwrap().total_entropy().unwrap();
            let (lo, hi) = depol_entropy_bounds(s, n, p).unwrap();
            prop_assert!(sp >= lo - 1e-9 && sp <= hi + 1e-9, "p={} S={} S'={} [{}, {}]", p, s, sp, lo, hi);
        }
    }
}
