mod common;

use common::{rng, state};
use proptest::prelude::*;
use qload_core::baselines::{
    aqce_run, environment, environment_update, gate_count_table, hec_build, hec_pairs, mps_loader, unit_fidelity,
    AqceInit, AqceOptions, Method,
};
use qload_core::datasets::{amplitude_encode_real, ghz, random_mps_state};
use qload_core::random::random_unitary4;
use qload_core::{GateKind, GateOp, StateVector};

fn unit_gate(u: &((usize, usize), qload_core::Mat4)) -> GateOp {
    GateOp::u2q(u.0 .0, u.0 .1, u.1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn aqce_update_is_optimal_on_its_pair(n in 2usize..=4, seed in any::<u64>()) {
        let target = state(n, seed);
        let opts = AqceOptions { units_per_expansion: 3, sweeps_per_expansion: 2, init: AqceInit::Zero, verify: false };
        let (st, _) = aqce_run(&target, 3, &opts).unwrap();
        let mut r = rng(seed ^ 1);
        for m in 0..st.unitaries.len() {
            let mut a = StateVector::zero(n);
            for u in &st.unitaries[..m] {
                a.apply_in_place(&unit_gate(u)).unwrap();
            }
            let mut b = target.clone();
            for u in st.unitaries[m + 1..].iter().rev() {
                b.apply_in_place(&unit_gate(u).inverse()).unwrap();
            }
            let (p, q) = st.unitaries[m].0;
            let (g, tr) = environment_update(&environment(b.amplitudes(), a.amplitudes(), p, q)).unwrap();
            let f = unit_fidelity(&b, &a, (p, q), &g).unwrap();
            prop_assert!((f - tr * tr).abs() < 1e-10);
            for _ in 0..1000 {
                let probe = unit_fidelity(&b, &a, (p, q), &random_unitary4(&mut r)).unwrap();
                prop_assert!(probe <= f + 1e-10);
            }
        }
    }

    #[test]
    fn aqce_trace_is_monotone_and_exact(seed in any::<u64>()) {
        let target = state(5, seed);
        let opts = AqceOptions { units_per_expansion: 2, sweeps_per_expansion: 3, init: AqceInit::Zero, verify: true };
        let (st, res) = aqce_run(&target, 4, &opts).unwrap();
        prop_assert_eq!(st.verified_fidelity.len(), st.fidelity_trace.len());
        for (a, b) in st.fidelity_trace.iter().zip(&st.verified_fidelity) {
            prop_assert!((a - b).abs() < 1e-10);
        }
        for w in st.fidelity_trace.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-10);
        }
        prop_assert!((1.0 - res.infidelity - st.fidelity_trace.last().unwrap()).abs() < 1e-10);
    }

    #[test]
    fn mps_single_layer_is_exact_on_bond_two(n in 2usize..=10, seed in any::<u64>()) {
        let target = random_mps_state(n, 2, &mut rng(seed)).unwrap();
        let (_, res) = mps_loader(&target, 1).unwrap();
        prop_assert!(res.infidelity < 1e-9, "{}", res.infidelity);
    }
}

#[test]
fn mps_single_layer_is_exact_on_ghz_and_w() {
    for n in 2..=10 {
        let (_, res) = mps_loader(&ghz(n).unwrap(), 1).unwrap();
        assert!(res.infidelity < 1e-9);
        let mut w = vec![0.0; 1 << n];
        for q in 0..n {
            w[1 << q] = 1.0;
        }
        let (_, res) = mps_loader(&amplitude_encode_real(&w).unwrap(), 1).unwrap();
        assert!(res.infidelity < 1e-9, "W state N={n}: {}", res.infidelity);
    }
}

#[test]
fn hec_cnot_pattern() {
    for n in 2..=12usize {
        for layers in 1..=6usize {
            let c = hec_build(n, layers).unwrap();
            let ops = c.ops();
            let mut cz = Vec::new();
            for (i, op) in ops.iter().enumerate() {
                if op.gate.kind() == GateKind::CZ {
                    let qs = op.gate.qubits();
                    // CNOT(c, t) = H(t)·CZ·H(t)
                    assert_eq!(ops[i - 1].gate, GateOp::h(qs[1]));
                    assert_eq!(ops[i + 1].gate, GateOp::h(qs[1]));
                    cz.push((qs[0], qs[1]));
                }
            }
            let mut expect = Vec::new();
            for i in 0..layers {
                // (2m, (2m+1)%N) with 2m ≤ N−1 on even layers,
                // (2m+1, (2m+2)%N) with 2m ≤ N−2 on odd layers.
                let layer: Vec<_> = if i % 2 == 0 {
                    (0..).map(|m| 2 * m).take_while(|&a| a < n).map(|a| (a, (a + 1) % n)).collect()
                } else {
                    (0..).map(|m| 2 * m).take_while(|&a| a + 2 <= n).map(|a| (a + 1, (a + 2) % n)).collect()
                };
                assert_eq!(hec_pairs(n, i), layer);
                expect.extend(layer);
            }
            assert_eq!(cz, expect, "N={n} layers={layers}");
            assert_eq!(cz.len(), gate_count_table(Method::Hec, n, layers).unwrap());
            assert_eq!(c.num_params().unwrap(), 2 * n * layers);
        }
    }
}
