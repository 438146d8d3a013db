mod common;

use common::{random_circuit, random_gate, rng, state};
use proptest::prelude::*;
use qload_core::aqer::{run_aqer, AqerConfig};
use qload_core::datasets::ghz;
use qload_core::noisy::{layered_bound_check, noisy_load_eval, random_layer, DensityMatrix, NoisePlacement};
use qload_core::{apply_circuit, fidelity, StateVector};
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn operations_stay_cptp(n in 2usize..=5, steps in 1usize..=30, seed in any::<u64>()) {
        let mut r = rng(seed);
        let mut rho = DensityMatrix::from_pure(&state(n, seed)).unwrap();
        for _ in 0..steps {
            match r.random_range(0..3) {
                0 => rho.evolve_in_place(&random_gate(r.random_range(0..7), n, &mut r)).unwrap(),
                1 => {
                    let a = r.random_range(0..n);
                    let b = (a + 1 + r.random_range(0..n - 1)) % n;
                    let qs: &[usize] = if r.random_bool(0.5) { &[a] } else { &[a, b] };
                    rho.depolarize_in_place(qs, r.random::<f64>()).unwrap();
                }
                _ => rho.depolarize_global_in_place(r.random::<f64>() * 0.2).unwrap(),
            }
        }
        prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
        prop_assert!(rho.hermiticity_deviation() < 1e-10);
        prop_assert!(rho.min_eigenvalue().unwrap() >= -1e-8);
    }

    #[test]
    fn noiseless_eval_matches_statevector(n in 2usize..=5, p in 1usize..=20, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (c, params) = random_circuit(n, p, &mut r);
        let target = state(n, seed ^ 1);
        let pure = 1.0 - fidelity(&target, &apply_circuit(&StateVector::zero(n), &c, &params).unwrap()).unwrap();
        for placement in [NoisePlacement::PerGate, NoisePlacement::PerLayer] {
            let dm = noisy_load_eval(&target, &c, &params, 0.0, 0.0, placement).unwrap();
            prop_assert!((dm - pure).abs() < 1e-10);
        }
    }
}

#[test]
fn layered_noisy_bounds_hold_on_four_qubits() {
    let mut r = rng(42);
    for i in 0..50 {
        let target = state(4, 1000 + i);
        let l = r.random_range(1..=4);
        let layers: Vec<_> = (0..l).map(|_| random_layer(4, &mut r).unwrap()).collect();
        let p = [0.0, 1e-3, 1e-2, 5e-2][i as usize % 4];
        let c = layered_bound_check(&target, &layers, p, 20, &mut r).unwrap();
        assert!(c.constructed <= c.upper + 1e-9, "{c:?}");
        assert!(c.constructed >= c.lower - 1e-9, "{c:?}");
        assert!(c.min_random >= c.lower - 1e-9, "{c:?}");
    }
}

#[test]
fn noise_hurts_the_ghz_loader() {
    let target = ghz(6).unwrap();
    let r = run_aqer(&target, &AqerConfig { t: 5, t3: 200, seed: 3, ..AqerConfig::default() }).unwrap();
    let clean = noisy_load_eval(&target, &r.circuit, &r.theta_star, 0.0, 0.0, NoisePlacement::PerGate).unwrap();
    assert!((clean - r.infidelity_final).abs() < 1e-10);
    let mut prev = clean;
    for (p1, p2) in [(1e-4, 1e-3), (1e-3, 1e-2), (1e-2, 5e-2)] {
        let noisy = noisy_load_eval(&target, &r.circuit, &r.theta_star, p1, p2, NoisePlacement::PerGate).unwrap();
        assert!(noisy > prev, "({p1}, {p2}): {noisy} vs {prev}");
        prev = noisy;
    }
}
