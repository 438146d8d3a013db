use alloc::vec;
use alloc::vec::Vec;

use super::OptResult;
use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamOptions {
    pub lr: f64,
    pub iters: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl AdamOptions {
    pub fn new(lr: f64, iters: usize) -> Self {
        Self { lr, iters, beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

impl Default for AdamOptions {
    fn default() -> Self {
        Self::new(1e-2, 2000)
    }
}

/// Adam over `loss_and_grad(x, grad_out) -> loss`. Takes `iters` steps and
/// evaluates every iterate including the last, returning the best seen.
pub fn adam(
    mut loss_and_grad: impl FnMut(&[f64], &mut [f64]) -> Result<f64>,
    x0: &[f64],
    opts: &AdamOptions,
) -> Result<OptResult> {
    if !(opts.lr > 0.0) {
        return Err(crate::error::invalid("Adam learning rate must be positive"));
    }
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut g = vec![0.0; n];
    let mut m = vec![0.0; n];
    let mut v = vec![0.0; n];
    let mut best_params = x.clone();
    let mut best_value = f64::INFINITY;
    let mut trace = Vec::with_capacity(opts.iters + 1);
    let (mut b1t, mut b2t) = (1.0, 1.0);
    for it in 0..=opts.iters {
        let loss = loss_and_grad(&x, &mut g)?;
        if !loss.is_finite() || g.iter().any(|gi| !gi.is_finite()) {
            return Err(Error::NonFinite("Adam loss or gradient"));
        }
        trace.push((it, loss));
        if loss < best_value {
            best_value = loss;
            best_params.copy_from_slice(&x);
        }
        if it == opts.iters {
            break;
        }
        b1t *= opts.beta1;
        b2t *= opts.beta2;
        for i in 0..n {
            m[i] = opts.beta1 * m[i] + (1.0 - opts.beta1) * g[i];
            v[i] = opts.beta2 * v[i] + (1.0 - opts.beta2) * g[i] * g[i];
            let mhat = m[i] / (1.0 - b1t);
            let vhat = v[i] / (1.0 - b2t);
            x[i] -= opts.lr * mhat / (math::sqrt(vhat) + opts.eps);
        }
    }
    Ok(OptResult { best_params, best_value, final_params: x, iterations: opts.iters, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let r = adam(
            |x, g| {
                g[0] = 2.0 * (x[0] - 0.5);
                g[1] = 2.0 * (x[1] + 0.25);
                Ok((x[0] - 0.5).powi(2) + (x[1] + 0.25).powi(2))
            },
            &[0.0, 0.0],
            &AdamOptions::new(0.05, 500),
        )
        .unwrap();
        assert!(r.best_value < 1e-4, "{}", r.best_value);
    }

    #[test]
    fn zero_gradient_keeps_start() {
        let r = adam(
            |_, g| {
                g.iter_mut().for_each(|x| *x = 0.0);
                Ok(1.0)
            },
            &[0.3, -0.7],
            &AdamOptions::default(),
        )
        .unwrap();
        assert_eq!(r.best_params, [0.3, -0.7]);
    }

    #[test]
    fn sine_descends_to_minus_one() {
        let r = adam(
            |x, g| {
                g[0] = math::cos(x[0]);
                Ok(libm::sin(x[0]))
            },
            &[1.0],
            &AdamOptions::new(0.01, 2000),
        )
        .unwrap();
        assert!(r.best_value < -0.999, "{}", r.best_value);
        assert!((r.best_params[0] + math::FRAC_PI_2).abs() < 0.05);
    }

    #[test]
    fn rejects_non_finite() {
        let r = adam(|_, _| Ok(f64::NAN), &[0.0], &AdamOptions::default());
        assert!(r.is_err());
    }
}
