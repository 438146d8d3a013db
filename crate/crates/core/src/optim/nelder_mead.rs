use alloc::vec;
use alloc::vec::Vec;

use super::OptResult;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Stop once the simplex value spread is below `tol` ...
    pub tol: f64,
    /// ... and every vertex lies within `xtol` (max-norm) of the best one.
    /// `f64::INFINITY` leaves the value spread as the only criterion.
    pub xtol: f64,
    pub max_iter: usize,
    /// Displacement of the initial vertices along each coordinate.
    pub step: f64,
}

impl NelderMeadOptions {
    pub fn new(tol: f64, max_iter: usize) -> Self {
        Self { tol, xtol: tol, max_iter, step: 0.1 }
    }
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self::new(1e-4, 500)
    }
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

/// Downhill simplex minimization from `x0`.
pub fn nelder_mead(
    mut objective: impl FnMut(&[f64]) -> f64,
    x0: &[f64],
    opts: &NelderMeadOptions,
) -> Result<OptResult> {
    if !(opts.tol > 0.0) {
        return Err(crate::error::invalid("Nelder-Mead tolerance must be positive"));
    }
    if x0.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("Nelder-Mead start point"));
    }
    let n = x0.len();
    let mut eval = |x: &[f64]| -> Result<f64> {
        let f = objective(x);
        if f.is_finite() {
            Ok(f)
        } else {
            Err(Error::NonFinite("Nelder-Mead objective"))
        }
    };
    let f0 = eval(x0)?;
    if n == 0 {
        return Ok(OptResult {
            best_params: Vec::new(),
            best_value: f0,
            final_params: Vec::new(),
            iterations: 0,
            trace: vec![(0, f0)],
        });
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.step;
        let f = eval(&x)?;
        simplex.push((x, f));
    }
    let mut trace = Vec::new();
    let mut centroid = vec![0.0; n];
    let mut iterations = 0;
    loop {
        // Stable sort keeps the earlier vertex first on ties.
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        trace.push((iterations, simplex[0].1));
        let fspread = simplex[n].1 - simplex[0].1;
        let xspread = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if (fspread < opts.tol && xspread <= opts.xtol) || iterations >= opts.max_iter {
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let worst = simplex[n].0.clone();
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst).map(|(c, w)| c + t * (c - w)).collect() };

        let xr = along(REFLECT);
        let fr = eval(&xr)?;
        if fr < simplex[0].1 {
            let xe = along(EXPAND);
            let fe = eval(&xe)?;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc, accept) = if fr < simplex[n].1 {
            let xc = along(REFLECT * CONTRACT);
            let fc = eval(&xc)?;
            let ok = fc <= fr;
            (xc, fc, ok)
        } else {
            let xc = along(-CONTRACT);
            let fc = eval(&xc)?;
            let ok = fc < simplex[n].1;
            (xc, fc, ok)
        };
        if accept {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for (x, f) in simplex[1..].iter_mut() {
            for (xi, bi) in x.iter_mut().zip(&best) {
                *xi = bi + SHRINK * (*xi - bi);
            }
            *f = eval(x)?;
        }
    }
    let (best_params, best_value) = simplex.swap_remove(0);
    Ok(OptResult { final_params: best_params.clone(), best_params, best_value, iterations, trace })
}
