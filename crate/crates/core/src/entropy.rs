//! Rényi-2 entropies, the entanglement measure `S`, the infidelity bound
//! envelope `f1`/`f2`, closed-form optimal product states and the noisy and
//! depolarizing bound functions.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{c64, C64};
use crate::math;
use crate::state::{rdm1, Rdm1, Rdm2, StateVector};

/// Trace tolerance beyond which [`renyi2`] refuses its input.
pub const TRACE_TOL: f64 = 1e-6;
/// Largest purity excursion outside `[2^{-k}, 1]` absorbed by clamping.
pub const PURITY_CLAMP_TOL: f64 = 1e-10;

/// Density operators whose Rényi-2 entropy can be taken.
pub trait Reduced {
    fn subsystem_qubits(&self) -> usize;
    fn trace(&self) -> f64;
    fn purity(&self) -> f64;
}

impl Reduced for Rdm1 {
    fn subsystem_qubits(&self) -> usize {
        1
    }
    fn trace(&self) -> f64 {
        Rdm1::trace(self)
    }
    fn purity(&self) -> f64 {
        Rdm1::purity(self)
    }
}

impl Reduced for Rdm2 {
    fn subsystem_qubits(&self) -> usize {
        2
    }
    fn trace(&self) -> f64 {
        Rdm2::trace(self)
    }
    fn purity(&self) -> f64 {
        Rdm2::purity(self)
    }
}

/// `−log2 Tr[ρ²]`.
pub fn renyi2<R: Reduced + ?Sized>(rho: &R) -> Result<f64> {
    let tr = rho.trace();
    if !((tr - 1.0).abs() <= TRACE_TOL) {
        return Err(Error::InvalidDensityMatrix(alloc::format!("trace {tr}")));
    }
    let floor = math::exp2(-(rho.subsystem_qubits() as f64));
    renyi2_from_purity(rho.purity(), floor)
}

pub(crate) fn renyi2_from_purity(purity: f64, floor: f64) -> Result<f64> {
    if !(purity <= 1.0 + PURITY_CLAMP_TOL && purity >= floor - PURITY_CLAMP_TOL) {
        return Err(Error::InvalidDensityMatrix(alloc::format!("purity {purity}")));
    }
    Ok(-math::log2(purity.clamp(floor, 1.0)))
}

/// Single-qubit entropy straight from a Bloch vector length squared.
#[inline]
pub(crate) fn renyi2_qubit(rho: &Rdm1) -> f64 {
    -math::log2(rho.purity().clamp(0.5, 1.0))
}

/// Per-qubit entropies, their sum and the bound envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub per_qubit: Vec<f64>,
    pub total: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
}

pub fn entanglement_measure(state: &StateVector) -> Result<EntanglementReport> {
    let n = state.num_qubits();
    let per_qubit = (0..n).map(|q| renyi2(&rdm1(state, q)?)).collect::<Result<Vec<_>>>()?;
    let total: f64 = per_qubit.iter().sum();
    let total = total.min(n as f64);
    Ok(EntanglementReport { per_qubit, total, lower_bound: bound_f1(total, n)?, upper_bound: bound_f2(total)? })
}

/// Total `S` only.
pub fn total_entropy(state: &StateVector) -> Result<f64> {
    Ok(entanglement_measure(state)?.total)
}

fn check_s(s: f64) -> Result<()> {
    if !(s >= 0.0) {
        return Err(Error::Negative { name: "S", value: s });
    }
    Ok(())
}

/// `f1(S) = (1 − √(2^{1−S/N} − 1))/2`, the infidelity floor over product
/// states.
pub fn bound_f1(s: f64, n: usize) -> Result<f64> {
    check_s(s)?;
    if n == 0 {
        return Err(crate::error::invalid("N must be at least 1"));
    }
    let n = n as f64;
    if s > n * (1.0 + 1e-9) {
        return Err(crate::error::invalid(alloc::format!("S = {s} exceeds N = {n}")));
    }
    let inner = (math::exp2(1.0 - s / n) - 1.0).max(0.0);
    Ok((1.0 - math::sqrt(inner)) / 2.0)
}

/// `f2(S) = (1 − √(2^{1−S+⌊S⌋} − 1) + ⌊S⌋)/2`, achieved by the closed-form
/// product state. Not clamped; exceeds 1 for large `S`.
pub fn bound_f2(s: f64) -> Result<f64> {
    check_s(s)?;
    let fl = math::floor(s);
    let inner = (math::exp2(1.0 - s + fl) - 1.0).max(0.0);
    Ok((1.0 - math::sqrt(inner) + fl) / 2.0)
}

/// Largest overlap `max_φ ⟨φ|ρ|φ⟩ = (1 + √(2^{1−S} − 1))/2`.
pub fn max_product_fidelity(rho: &Rdm1) -> Result<f64> {
    let s = renyi2(rho)?;
    Ok((1.0 + math::sqrt((math::exp2(1.0 - s) - 1.0).max(0.0))) / 2.0)
}

/// Angles of the optimal single-qubit state `R_Z(β)R_Y(γ)|0⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductParams {
    pub beta: f64,
    pub gamma: f64,
    /// `ρ = I/2`: every pure state is optimal and `(0, 0)` is returned.
    pub degenerate: bool,
}

/// Below this Bloch radius the RDM is treated as `I/2`.
pub const DEGENERACY_TOL: f64 = 1e-14;

/// `β = arg ρ10`, `γ = π/2 − arcsin((ρ00−ρ11)/√(4|ρ10|² + (ρ00−ρ11)²))`.
pub fn product_params(rho: &Rdm1) -> ProductParams {
    let r10 = rho.rho10();
    let d = rho.rho00() - rho.rho11();
    let off = 2.0 * r10.norm();
    let radius = math::hypot(off, d);
    if radius <= DEGENERACY_TOL {
        return ProductParams { beta: 0.0, gamma: 0.0, degenerate: true };
    }
    // π/2 − arcsin(d/r) written as atan2 to keep precision near the poles.
    let gamma = math::atan2(off, d);
    let beta = if r10.norm() == 0.0 { 0.0 } else { math::atan2(r10.im, r10.re) };
    ProductParams { beta, gamma, degenerate: false }
}

/// Amplitudes of `R_Z(β)R_Y(γ)|0⟩ = (e^{−iβ/2}cos(γ/2), e^{iβ/2}sin(γ/2))`.
pub fn product_amplitudes(beta: f64, gamma: f64) -> [C64; 2] {
    let (s, c) = math::sincos(0.5 * gamma);
    let (sb, cb) = math::sincos(0.5 * beta);
    [c64(cb * c, -sb * c), c64(cb * s, sb * s)]
}

/// `⟨φ|ρ|φ⟩`.
pub fn overlap_with(rho: &Rdm1, phi: &[C64; 2]) -> f64 {
    let m = rho.matrix();
    let mut acc = c64(0.0, 0.0);
    for r in 0..2 {
        for c in 0..2 {
            acc += phi[r].conj() * m[r][c] * phi[c];
        }
    }
    acc.re
}

fn check_non_negative(name: &'static str, value: f64) -> Result<()> {
    if !(value >= 0.0) {
        return Err(Error::Negative { name, value });
    }
    Ok(())
}

/// Bounds for two `L`-layer circuits with per-layer noise channels at the
/// given diamond distances from the identity: `f1 − (L+1)(dM + dN)` and
/// `f2 + (L+1)(dM + dN)`. Unclamped.
pub fn noisy_bounds(s: f64, n: usize, layers: usize, dnorm_m: f64, dnorm_n: f64) -> Result<(f64, f64)> {
    check_non_negative("dnorm_M", dnorm_m)?;
    check_non_negative("dnorm_N", dnorm_n)?;
    let slack = (layers as f64 + 1.0) * (dnorm_m + dnorm_n);
    Ok((bound_f1(s, n)? - slack, bound_f2(s)? + slack))
}

/// Analytic diamond-distance bound `‖D_p − id‖◇ ≤ 2p`.
pub fn depolarizing_diamond_bound(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(2.0 * p)
}

/// Range of `S(D_p(ρ))` given `S(ρ)`:
/// `[(1 − p/ln4)S + Np/ln4, S + N·log2(2/(1+(1−p)²))]`.
pub fn depol_entropy_bounds(s_rho: f64, n: usize, p: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    check_s(s_rho)?;
    let ln4 = 2.0 * math::LN_2;
    let nf = n as f64;
    let lower = (1.0 - p / ln4) * s_rho + nf * p / ln4;
    let q = 1.0 - p;
    let upper = s_rho + nf * math::log2(2.0 / (1.0 + q * q));
    Ok((lower, upper))
}
