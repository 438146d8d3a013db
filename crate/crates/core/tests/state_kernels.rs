mod common;

use common::{dense_gate, random_gate, rng, state, to_column};
use nalgebra::DMatrix;
use proptest::prelude::*;
use qload_core::linalg::C64;
use qload_core::state::{pauli_expectation, rdm1, rdm2, Pauli};
use qload_core::{apply_gate, GateKind};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn gates_preserve_norm(kind in 0usize..7, n in 2usize..=8, seed in any::<u64>()) {
        let s = state(n, seed);
        let g = random_gate(kind, n, &mut rng(seed ^ 0xabc));
        let out = apply_gate(&s, &g).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn kernel_matches_dense_matrix(kind in 0usize..7, n in 2usize..=4, seed in any::<u64>()) {
        let s = state(n, seed);
        let g = random_gate(kind, n, &mut rng(seed.wrapping_add(1)));
        prop_assert_eq!(g.kind(), GateKind::ALL[kind]);
        let expect = dense_gate(&g, n) * to_column(&s);
        let got = apply_gate(&s, &g).unwrap();
        for (a, b) in got.amplitudes().iter().zip(expect.iter()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn rdm2_traces_to_rdm1(n in 2usize..=7, seed in any::<u64>(), a in 0usize..7, b in 0usize..7) {
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b);
        let s = state(n, seed);
        let r2 = rdm2(&s, a, b).unwrap();
        let (ra, rb) = (rdm1(&s, a).unwrap(), rdm1(&s, b).unwrap());
        for (x, y) in [(r2.keep_first(), ra), (r2.keep_second(), rb)] {
            for r in 0..2 {
                for c in 0..2 {
                    prop_assert!((x.matrix()[r][c] - y.matrix()[r][c]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn pauli_expectation_matches_rdm(n in 1usize..=7, seed in any::<u64>(), q in 0usize..7) {
        let q = q % n;
        let s = state(n, seed);
        let rho = DMatrix::from_fn(2, 2, |r, c| rdm1(&s, q).unwrap().matrix()[r][c]);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let zero = C64::new(0.0, 0.0);
        let paulis = [
            (Pauli::X, DMatrix::from_row_slice(2, 2, &[zero, one, one, zero])),
            (Pauli::Y, DMatrix::from_row_slice(2, 2, &[zero, -i, i, zero])),
            (Pauli::Z, DMatrix::from_row_slice(2, 2, &[one, zero, zero, -one])),
        ];
        for (axis, m) in paulis {
            let expect = (&rho * m).trace().re;
            prop_assert!((pauli_expectation(&s, axis, q).unwrap() - expect).abs() < 1e-12);
        }
    }
}
