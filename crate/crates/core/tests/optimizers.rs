mod common;

use common::{random_circuit, rng, state};
use proptest::prelude::*;
use qload_core::optim::{
    adam, adjoint_gradient, infidelity_loss, nelder_mead, paramshift_gradient, AdamOptions, NelderMeadOptions,
};
use qload_core::random::{substream, Stream};

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn adjoint_matches_central_differences(n in 2usize..=6, p in 1usize..=40, seed in any::<u64>()) {
        let mut r = rng(seed);
        let target = state(n, seed ^ 3);
        let (c, params) = random_circuit(n, p, &mut r);
        let (_, g) = adjoint_gradient(&target, &c, &params).unwrap();
        let h = 1e-5;
        let fd: Vec<f64> = (0..p)
            .map(|j| {
                let mut a = params.clone();
                let mut b = params.clone();
                a[j] += h;
                b[j] -= h;
                (infidelity_loss(&target, &c, &a).unwrap() - infidelity_loss(&target, &c, &b).unwrap()) / (2.0 * h)
            })
            .collect();
        let diff: Vec<f64> = g.iter().zip(&fd).map(|(x, y)| x - y).collect();
        // Central differences carry ~1e-11 round-off, so vanishing gradients
        // are compared on an absolute floor.
        prop_assert!(norm(&diff) < 1e-6 * norm(&fd) + 1e-10, "{} vs {}", norm(&diff), norm(&fd));
    }

    #[test]
    fn exact_parameter_shift_matches_adjoint(n in 2usize..=6, p in 1usize..=40, seed in any::<u64>()) {
        let mut r = rng(seed);
        let target = state(n, seed ^ 5);
        let (c, params) = random_circuit(n, p, &mut r);
        let (la, ga) = adjoint_gradient(&target, &c, &params).unwrap();
        let (lp, gp) = paramshift_gradient(&target, &c, &params, None, &mut r).unwrap();
        prop_assert!((la - lp).abs() < 1e-10);
        for (a, b) in ga.iter().zip(&gp) {
            prop_assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn adam_with_shot_noise_is_deterministic() {
    let mut r = rng(21);
    let target = state(3, 22);
    let (c, params) = random_circuit(3, 8, &mut r);
    let run = || {
        let mut shots = substream(9, Stream::Shots);
        adam(
            |x, g| {
                let (l, grad) = paramshift_gradient(&target, &c, x, Some(500), &mut shots)?;
                g.copy_from_slice(&grad);
                Ok(l)
            },
            &params,
            &AdamOptions::new(0.05, 40),
        )
        .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.trace.len(), 41);
    assert!(a.trace.iter().zip(&b.trace).all(|(x, y)| x.0 == y.0 && x.1.to_bits() == y.1.to_bits()));
    assert_eq!(a.best_params, b.best_params);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn nelder_mead_best_value_never_increases(n in 2usize..=4, p in 1usize..=8, seed in any::<u64>()) {
        let mut r = rng(seed);
        let target = state(n, seed ^ 9);
        let (c, params) = random_circuit(n, p, &mut r);
        let res = nelder_mead(|x| infidelity_loss(&target, &c, x).unwrap(), &params, &NelderMeadOptions::new(1e-8, 300)).unwrap();
        for w in res.trace.windows(2) {
            prop_assert!(w[1].1 <= w[0].1);
        }
        prop_assert!(res.best_value <= infidelity_loss(&target, &c, &params).unwrap());
    }
}
