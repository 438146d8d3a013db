mod common;

use common::state;
use proptest::prelude::*;
use qload_core::aqer::{product_state, run_aqer, step1, step2, AqerConfig};
use qload_core::entropy::{overlap_with, product_amplitudes};
use qload_core::random::{substream, Stream};
use qload_core::state::rdm1;
use qload_core::{apply_circuit_adjoint, bound_f1, bound_f2, entanglement_measure, fidelity, max_product_fidelity, StateVector};

fn cfg(t: usize, seed: u64) -> AqerConfig {
    AqerConfig { t, t3: 60, seed, ..AqerConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn step1_descends(n in 2usize..=5, t in 1usize..=5, seed in any::<u64>()) {
        let c = cfg(t, seed);
        let out = step1(&state(n, seed), &c).unwrap();
        let mut prev = out.s_initial;
        for &s in &out.s_trace {
            prop_assert!(s <= prev + c.nm_tol);
            prev = s;
        }
    }

    #[test]
    fn loader_structure_and_bounds(n in 2usize..=5, t in 0usize..=4, seed in any::<u64>()) {
        let target = state(n, seed);
        let r = run_aqer(&target, &cfg(t, seed)).unwrap();
        prop_assert_eq!(r.theta_star.len(), 5 * t + 2 * n);
        prop_assert_eq!(r.g, t);

        let loaded = r.loaded_state().unwrap();
        let back = apply_circuit_adjoint(&loaded, &r.circuit, &r.theta_star).unwrap();
        prop_assert!((fidelity(&back, &StateVector::zero(n)).unwrap() - 1.0).abs() < 1e-10);

        let mut v = target.clone();
        for b in &r.blocks {
            b.apply(&mut v).unwrap();
        }
        let (beta, gamma) = step2(&v, None, &mut substream(0, Stream::Shots)).unwrap();
        for q in 0..n {
            let rho = rdm1(&v, q).unwrap();
            let got = overlap_with(&rho, &product_amplitudes(beta[q], gamma[q]));
            prop_assert!((got - max_product_fidelity(&rho).unwrap()).abs() < 1e-9);
        }
        let s = entanglement_measure(&v).unwrap().total;
        prop_assert!(r.infidelity_initial >= bound_f1(s, n).unwrap() - 1e-9);
        prop_assert!(r.infidelity_initial <= bound_f2(s).unwrap() + 1e-9);
        let direct = 1.0 - fidelity(&v, &product_state(&beta, &gamma).unwrap()).unwrap();
        prop_assert!((direct - r.infidelity_initial).abs() < 1e-10);
        prop_assert!(r.infidelity_final <= r.infidelity_initial + 1e-12);
    }

    #[test]
    fn exact_mode_is_bit_identical(n in 2usize..=4, seed in any::<u64>()) {
        let target = state(n, seed);
        let a = run_aqer(&target, &cfg(3, seed)).unwrap();
        let b = run_aqer(&target, &cfg(3, seed)).unwrap();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn shot_mode_is_deterministic_per_seed() {
    let target = state(3, 5);
    let c = AqerConfig { shots: Some(2000), ..cfg(2, 77) };
    assert_eq!(run_aqer(&target, &c).unwrap(), run_aqer(&target, &c).unwrap());
}
