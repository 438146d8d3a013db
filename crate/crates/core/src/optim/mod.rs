//! Minimizers and gradient engines for the infidelity loss.

mod adam;
mod gradient;
mod nelder_mead;

use alloc::vec::Vec;

pub use adam::{adam, AdamOptions};
pub use gradient::{adjoint_gradient, infidelity_loss, paramshift_gradient, shifted_fidelities, ShiftedFidelities};
pub use nelder_mead::{nelder_mead, NelderMeadOptions};

/// Outcome of a minimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    /// Last iterate, kept so noisy runs can re-check best-seen against it.
    pub final_params: Vec<f64>,
    pub iterations: usize,
    /// `(iteration, value)`; Adam records the loss at every iterate,
    /// Nelder–Mead the best simplex value.
    pub trace: Vec<(usize, f64)>,
}
