//! Approximate quantum state loading by entanglement reduction.
//!
//! The crate is `no_std` (with `alloc`). It contains a dense state-vector
//! simulator, the entropy-based bound functions, the three-step AQER loader,
//! the MPS/HEC/AQCE baselines, target-state generators, a density-matrix
//! noise backend and the IQP loaders. File formats and the command line live
//! in the companion `qload` crate.
//!
//! Conventions: qubit 0 is the least significant bit of a basis index;
//! `R_σ(θ) = e^{−iθσ/2}` and `RZZ(θ) = e^{−iθ Z⊗Z/2}`.

#![no_std]

extern crate alloc;

mod kernel;
mod math;

pub mod aqer;
pub mod baselines;
pub mod circuit;
pub mod datasets;
pub mod entropy;
pub mod error;
pub mod gate;
pub mod iqp;
pub mod linalg;
pub mod noisy;
pub mod optim;
pub mod random;
pub mod state;

pub use circuit::{apply_circuit, apply_circuit_adjoint, Circuit, Op};
pub use entropy::{
    bound_f1, bound_f2, depol_entropy_bounds, entanglement_measure, max_product_fidelity, noisy_bounds,
    product_params, renyi2, EntanglementReport, ProductParams,
};
pub use error::{Error, Result};
pub use gate::{GateKind, GateOp};
pub use linalg::{Mat2, Mat4, C64};
pub use state::{apply_gate, fidelity, pauli_expectation, rdm1, rdm2, shot_estimate, Pauli, Rdm1, Rdm2, StateVector};
