//! Dense state vectors, reduced density matrices, Pauli expectations and
//! shot-noise emulation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::gate::GateOp;
use crate::kernel::insert_zero_bit;
use crate::linalg::{c64, Mat2, Mat4, C64, ONE, ZERO};
use crate::math;

/// Norm tolerance enforced when a state is constructed from raw amplitudes.
pub const NORM_TOL: f64 = 1e-12;

/// Largest register the state-vector simulator accepts.
pub const MAX_QUBITS: usize = 26;

/// `2^N` complex amplitudes; qubit 0 is the least significant index bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0).expect("index 0 is always valid")
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits { got: num_qubits, limit: MAX_QUBITS });
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(crate::error::invalid(format!("basis index {index} >= {dim}")));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { num_qubits, amps })
    }

    /// Wraps amplitudes whose norm is already 1 within [`NORM_TOL`].
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let num_qubits = qubits_for_len(amps.len())?;
        let norm = l2_norm(&amps);
        if !((norm - 1.0).abs() <= NORM_TOL) {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { num_qubits, amps })
    }

    /// Wraps amplitudes after explicitly rescaling them to unit norm.
    pub fn from_amplitudes_normalized(mut amps: Vec<C64>) -> Result<Self> {
        let num_qubits = qubits_for_len(amps.len())?;
        let norm = l2_norm(&amps);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        for a in amps.iter_mut() {
            *a /= norm;
        }
        Ok(Self { num_qubits, amps })
    }

    /// Tensor product of single-qubit states; `factors[q]` is qubit `q`.
    pub fn product(factors: &[[C64; 2]]) -> Result<Self> {
        let n = factors.len();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::TooManyQubits { got: n, limit: MAX_QUBITS });
        }
        let mut amps = vec![ONE; 1usize << n];
        for (i, a) in amps.iter_mut().enumerate() {
            for (q, f) in factors.iter().enumerate() {
                *a *= f[(i >> q) & 1];
            }
        }
        Self::from_amplitudes_normalized(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        l2_norm(&self.amps)
    }

    /// Rescales to unit norm. Never called implicitly.
    pub fn renormalize(&mut self) -> Result<()> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        for a in self.amps.iter_mut() {
            *a /= n;
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_same(other)?;
        Ok(inner_raw(&self.amps, &other.amps))
    }

    pub fn apply_in_place(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.num_qubits)?;
        gate.apply_raw(&mut self.amps);
        Ok(())
    }

    pub fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits: self.num_qubits });
        }
        Ok(())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch { left: self.num_qubits, right: other.num_qubits });
        }
        Ok(())
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits { got: n, limit: MAX_QUBITS });
    }
    Ok(n)
}

pub(crate) fn l2_norm(amps: &[C64]) -> f64 {
    math::sqrt(amps.iter().map(|a| a.norm_sqr()).sum())
}

#[inline]
pub(crate) fn inner_raw(a: &[C64], b: &[C64]) -> C64 {
    let mut acc = ZERO;
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * y;
    }
    acc
}

/// Returns `U·state` as a new value.
pub fn apply_gate(state: &StateVector, gate: &GateOp) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply_in_place(gate)?;
    Ok(out)
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}

/// Single-qubit reduced density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rdm1 {
    m: Mat2,
}

/// Tolerances used when validating density matrices built by callers.
const RDM_TRACE_TOL: f64 = 1e-10;
const RDM_HERM_TOL: f64 = 1e-10;
const RDM_PSD_TOL: f64 = 1e-10;

impl Rdm1 {
    /// Validates trace, Hermiticity and eigenvalue range.
    pub fn new(m: Mat2) -> Result<Self> {
        let r = Self { m };
        let tr = m[0][0].re + m[1][1].re;
        if (tr - 1.0).abs() > RDM_TRACE_TOL || m[0][0].im.abs() > RDM_HERM_TOL || m[1][1].im.abs() > RDM_HERM_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        if (m[0][1] - m[1][0].conj()).norm() > RDM_HERM_TOL {
            return Err(Error::InvalidDensityMatrix("not Hermitian".into()));
        }
        let (lo, hi) = r.eigenvalues();
        if lo < -RDM_PSD_TOL || hi > 1.0 + RDM_PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!("eigenvalues ({lo}, {hi})")));
        }
        Ok(r)
    }

    pub(crate) fn from_raw(m: Mat2) -> Self {
        Self { m }
    }

    /// `(I + xX + yY + zZ)/2`, projected onto the Bloch ball when `|r| > 1`
    /// (nearest PSD matrix: clip the negative eigenvalue, renormalize).
    pub fn from_bloch_projected(x: f64, y: f64, z: f64) -> Self {
        let r = math::sqrt(x * x + y * y + z * z);
        let s = if r > 1.0 { 1.0 / r } else { 1.0 };
        let (x, y, z) = (x * s, y * s, z * s);
        Self {
            m: [[c64((1.0 + z) / 2.0, 0.0), c64(x / 2.0, -y / 2.0)], [c64(x / 2.0, y / 2.0), c64((1.0 - z) / 2.0, 0.0)]],
        }
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.m
    }

    pub fn rho00(&self) -> f64 {
        self.m[0][0].re
    }

    pub fn rho11(&self) -> f64 {
        self.m[1][1].re
    }

    /// `⟨1|ρ|0⟩`.
    pub fn rho10(&self) -> C64 {
        self.m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.m[0][0].re + self.m[1][1].re
    }

    pub fn purity(&self) -> f64 {
        self.rho00() * self.rho00() + self.rho11() * self.rho11() + 2.0 * self.rho10().norm_sqr()
    }

    /// Bloch vector `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)`.
    pub fn bloch(&self) -> [f64; 3] {
        let r10 = self.rho10();
        [2.0 * r10.re, 2.0 * r10.im, self.rho00() - self.rho11()]
    }

    /// `(λ_min, λ_max)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let t = self.trace();
        let d = self.rho00() - self.rho11();
        let r = math::sqrt(d * d + 4.0 * self.rho10().norm_sqr());
        ((t - r) / 2.0, (t + r) / 2.0)
    }
}

/// Two-qubit reduced density matrix; local index `2·bit(q1) + bit(q2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rdm2 {
    m: Mat4,
}

/// `I, X, Y, Z`.
fn pauli_matrix(a: usize) -> Mat2 {
    match a {
        0 => [[ONE, ZERO], [ZERO, ONE]],
        1 => [[ZERO, ONE], [ONE, ZERO]],
        2 => [[ZERO, c64(0.0, -1.0)], [c64(0.0, 1.0), ZERO]],
        _ => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

impl Rdm2 {
    pub(crate) fn from_raw(m: Mat4) -> Self {
        Self { m }
    }

    /// `c[a][b] = Tr(ρ·σ_a⊗σ_b)` with `σ = (I, X, Y, Z)`; `c[0][0]` is the trace.
    pub fn pauli_coefficients(&self) -> [[f64; 4]; 4] {
        let paulis = [0, 1, 2, 3].map(pauli_matrix);
        let mut c = [[0.0; 4]; 4];
        for (a, row) in c.iter_mut().enumerate() {
            let pa = &paulis[a];
            for (b, x) in row.iter_mut().enumerate() {
                let pb = &paulis[b];
                let mut acc = ZERO;
                for r in 0..4 {
                    for k in 0..4 {
                        // (σ_a⊗σ_b)[k][r]
                        acc += self.m[r][k] * pa[k >> 1][r >> 1] * pb[k & 1][r & 1];
                    }
                }
                *x = acc.re;
            }
        }
        c
    }

    /// `(1/4) Σ c_ab σ_a⊗σ_b` with `c[0][0]` forced to one, projected onto
    /// the density matrices: negative eigenvalues are clipped and the trace
    /// renormalized.
    pub fn from_pauli_projected(c: &[[f64; 4]; 4]) -> Result<Self> {
        let mut m = [[ZERO; 4]; 4];
        for (a, row) in c.iter().enumerate() {
            let pa = pauli_matrix(a);
            for (b, &cab) in row.iter().enumerate() {
                let cab = if a == 0 && b == 0 { 1.0 } else { cab };
                let pb = pauli_matrix(b);
                for (r, mrow) in m.iter_mut().enumerate() {
                    for (k, x) in mrow.iter_mut().enumerate() {
                        *x += pa[r >> 1][k >> 1] * pb[r & 1][k & 1] * (cab / 4.0);
                    }
                }
            }
        }
        // Hermitian A + iB as the real symmetric [[A, −B], [B, A]]; eigenvalue
        // clipping commutes with this embedding.
        let mut e = [0.0; 64];
        for r in 0..4 {
            for k in 0..4 {
                let (re, im) = (m[r][k].re, m[r][k].im);
                e[r * 8 + k] = re;
                e[(r + 4) * 8 + k + 4] = re;
                e[r * 8 + k + 4] = -im;
                e[(r + 4) * 8 + k] = im;
            }
        }
        let (vals, vecs) = crate::linalg::symmetric_eigen(&e, 8)?;
        if vals[0] >= 0.0 {
            return Ok(Self { m });
        }
        let mut p = [0.0; 64];
        for (i, &l) in vals.iter().enumerate().filter(|(_, &l)| l > 0.0) {
            for r in 0..8 {
                for k in 0..8 {
                    p[r * 8 + k] += l * vecs[r * 8 + i] * vecs[k * 8 + i];
                }
            }
        }
        let tr: f64 = (0..4).map(|i| p[i * 8 + i]).sum();
        if !(tr > 0.0) {
            return Err(Error::InvalidDensityMatrix("estimate has no positive part".into()));
        }
        for (r, row) in m.iter_mut().enumerate() {
            for (k, x) in row.iter_mut().enumerate() {
                *x = c64(p[r * 8 + k] / tr, p[(r + 4) * 8 + k] / tr);
            }
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.m
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.m[i][i].re).sum()
    }

    pub fn purity(&self) -> f64 {
        self.m.iter().flatten().map(|x| x.norm_sqr()).sum()
    }

    /// Traces out the second qubit, leaving the first.
    pub fn keep_first(&self) -> Rdm1 {
        let mut r = [[ZERO; 2]; 2];
        for (a, row) in r.iter_mut().enumerate() {
            for (b, x) in row.iter_mut().enumerate() {
                *x = self.m[2 * a][2 * b] + self.m[2 * a + 1][2 * b + 1];
            }
        }
        Rdm1::from_raw(r)
    }

    /// Traces out the first qubit, leaving the second.
    pub fn keep_second(&self) -> Rdm1 {
        let mut r = [[ZERO; 2]; 2];
        for (c, row) in r.iter_mut().enumerate() {
            for (d, x) in row.iter_mut().enumerate() {
                *x = self.m[c][d] + self.m[2 + c][2 + d];
            }
        }
        Rdm1::from_raw(r)
    }

    /// `U ρ U†`.
    pub fn conjugated_by(&self, u: &Mat4) -> Self {
        let mut tmp = [[ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = ZERO;
                for k in 0..4 {
                    acc += u[r][k] * self.m[k][c];
                }
                tmp[r][c] = acc;
            }
        }
        let mut out = [[ZERO; 4]; 4];
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = ZERO;
                for k in 0..4 {
                    acc += tmp[r][k] * u[c][k].conj();
                }
                out[r][c] = acc;
            }
        }
        Self { m: out }
    }
}

/// Exact partial trace onto qubit `q`.
pub fn rdm1(state: &StateVector, q: usize) -> Result<Rdm1> {
    state.check_qubit(q)?;
    let bit = 1usize << q;
    let (mut p0, mut p1, mut c10) = (0.0, 0.0, ZERO);
    for chunk in state.amps.chunks_exact(2 * bit) {
        let (lo, hi) = chunk.split_at(bit);
        for (a0, a1) in lo.iter().zip(hi) {
            p0 += a0.norm_sqr();
            p1 += a1.norm_sqr();
            c10 += a1 * a0.conj();
        }
    }
    Ok(Rdm1::from_raw([[c64(p0, 0.0), c10.conj()], [c10, c64(p1, 0.0)]]))
}

/// Exact partial trace onto qubits `(q1, q2)`.
pub fn rdm2(state: &StateVector, q1: usize, q2: usize) -> Result<Rdm2> {
    state.check_qubit(q1)?;
    state.check_qubit(q2)?;
    if q1 == q2 {
        return Err(Error::RepeatedQubit(q1));
    }
    Ok(Rdm2::from_raw(rdm2_raw(&state.amps, q1, q2)))
}

pub(crate) fn rdm2_raw(amps: &[C64], q1: usize, q2: usize) -> Mat4 {
    let (b1, b2) = (1usize << q1, 1usize << q2);
    let (lo, hi) = if q1 < q2 { (q1, q2) } else { (q2, q1) };
    let mut m = [[ZERO; 4]; 4];
    for i in 0..amps.len() / 4 {
        let base = insert_zero_bit(insert_zero_bit(i, lo), hi);
        let x = [amps[base], amps[base | b2], amps[base | b1], amps[base | b1 | b2]];
        for r in 0..4 {
            for c in r..4 {
                m[r][c] += x[r] * x[c].conj();
            }
        }
    }
    for r in 0..4 {
        for c in 0..r {
            m[r][c] = m[c][r].conj();
        }
    }
    m
}

/// Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// `⟨ψ|P_q|ψ⟩` evaluated directly on the amplitudes.
pub fn pauli_expectation(state: &StateVector, axis: Pauli, q: usize) -> Result<f64> {
    state.check_qubit(q)?;
    let bit = 1usize << q;
    let mut acc = 0.0;
    for chunk in state.amps.chunks_exact(2 * bit) {
        let (lo, hi) = chunk.split_at(bit);
        for (a0, a1) in lo.iter().zip(hi) {
            acc += match axis {
                // a0* a1 + a1* a0
                Pauli::X => 2.0 * (a0.conj() * a1).re,
                // a0*(−i a1) + a1*(i a0)
                Pauli::Y => 2.0 * (a0.conj() * a1).im,
                Pauli::Z => a0.norm_sqr() - a1.norm_sqr(),
            };
        }
    }
    Ok(acc.clamp(-1.0, 1.0))
}

/// Tolerance on `|exact| ≤ 1` for [`shot_estimate`].
pub const EXPECTATION_TOL: f64 = 1e-9;

/// Emulates `shots` projective measurements of a ±1 observable with mean
/// `exact`: draws `k ~ Binomial(M, (1+exact)/2)` and returns `2k/M − 1`.
pub fn shot_estimate<R: RngCore + ?Sized>(exact: f64, shots: u64, rng: &mut R) -> Result<f64> {
    if !(exact.abs() <= 1.0 + EXPECTATION_TOL) {
        return Err(Error::ExpectationOutOfRange(exact));
    }
    if shots == 0 {
        return Err(crate::error::invalid("shot count must be at least 1"));
    }
    let p = ((1.0 + exact) / 2.0).clamp(0.0, 1.0);
    let k = Binomial::new(shots, p).map_err(|_| Error::ProbabilityOutOfRange(p))?.sample(rng);
    Ok(2.0 * k as f64 / shots as f64 - 1.0)
}

/// Shot-estimated projector probability in `[0, 1]`.
pub fn shot_probability<R: RngCore + ?Sized>(exact: f64, shots: u64, rng: &mut R) -> Result<f64> {
    let e = shot_estimate(2.0 * exact - 1.0, shots, rng)?;
    Ok((1.0 + e) / 2.0)
}
