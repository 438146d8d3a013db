//! Density-matrix backend with depolarizing noise.
//!
//! `ρ` is stored as a vector over `2N` qubits, `ρ[r][c]` at index
//! `(r << N) | c`. A gate `U` on qubit `q` then acts as `U` on qubit `q + N`
//! and as `conj(U)` on qubit `q`, which reuses the state-vector kernels.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::aqer::{run_aqer_prefixes, AqerConfig};
use crate::circuit::Circuit;
use crate::entropy::{self, depol_entropy_bounds};
use crate::error::{invalid, Error, Result};
use crate::gate::GateOp;
use crate::kernel::insert_zero_bit;
use crate::linalg::{c64, hermitian_eigen, CMatrix, C64, ZERO};
use crate::random::{random_state, random_unitary4, substream, Stream};
use crate::state::{Rdm1, StateVector};

pub const MAX_DM_QUBITS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    data: Vec<C64>,
}

impl DensityMatrix {
    fn check_size(n: usize) -> Result<()> {
        if n == 0 {
            return Err(invalid("density matrix needs at least one qubit"));
        }
        if n > MAX_DM_QUBITS {
            return Err(Error::TooManyQubits { got: n, limit: MAX_DM_QUBITS });
        }
        Ok(())
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::from_pure(&StateVector::zero(n))
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        let n = psi.num_qubits();
        Self::check_size(n)?;
        let a = psi.amplitudes();
        let dim = a.len();
        let mut data = vec![ZERO; dim * dim];
        for (r, ar) in a.iter().enumerate() {
            for (c, ac) in a.iter().enumerate() {
                data[(r << n) | c] = ar * ac.conj();
            }
        }
        Ok(Self { n, data })
    }

    /// `Σ w_k |ψ_k⟩⟨ψ_k|` with non-negative weights summing to one.
    pub fn from_mixture(parts: &[(f64, StateVector)]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| invalid("empty mixture"))?;
        let mut out = Self::from_pure(&first.1)?;
        out.data.iter_mut().for_each(|x| *x *= first.0);
        for (w, psi) in &parts[1..] {
            if psi.num_qubits() != out.n {
                return Err(Error::DimensionMismatch { left: out.n, right: psi.num_qubits() });
            }
            let p = Self::from_pure(psi)?;
            out.data.iter_mut().zip(&p.data).for_each(|(x, y)| *x += y * *w);
        }
        let w: f64 = parts.iter().map(|p| p.0).sum();
        if parts.iter().any(|p| p.0 < 0.0) || (w - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDensityMatrix(alloc::format!("mixture weights sum to {w}")));
        }
        Ok(out)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn element(&self, r: usize, c: usize) -> C64 {
        self.data[(r << self.n) | c]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.element(i, i).re).sum()
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum()
    }

    /// `max |ρ − ρ†|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut m: f64 = 0.0;
        for r in 0..d {
            for c in r..d {
                m = m.max((self.element(r, c) - self.element(c, r).conj()).norm());
            }
        }
        m
    }

    /// Smallest eigenvalue by dense diagonalization (small `N` only).
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let d = self.dim();
        let m = CMatrix::from_fn(d, d, |r, c| self.element(r, c));
        let (ev, _) = hermitian_eigen(&m)?;
        Ok(ev[0])
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation_pure(&self, psi: &StateVector) -> Result<f64> {
        if psi.num_qubits() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: psi.num_qubits() });
        }
        let a = psi.amplitudes();
        let mut acc = ZERO;
        for (r, ar) in a.iter().enumerate() {
            let row = &self.data[r << self.n..(r + 1) << self.n];
            let mut t = ZERO;
            for (x, ac) in row.iter().zip(a) {
                t += x * ac;
            }
            acc += ar.conj() * t;
        }
        Ok(acc.re)
    }

    pub fn rdm1(&self, q: usize) -> Result<Rdm1> {
        if q >= self.n {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits: self.n });
        }
        let mut m = [[ZERO; 2]; 2];
        let bit = 1usize << q;
        for k in 0..self.dim() / 2 {
            let base = insert_zero_bit(k, q);
            for (a, row) in m.iter_mut().enumerate() {
                for (b, x) in row.iter_mut().enumerate() {
                    *x += self.element(base | (a * bit), base | (b * bit));
                }
            }
        }
        Ok(Rdm1::from_raw(m))
    }

    /// Entanglement measure `S(ρ) = Σ_n S(ρ_n)`.
    pub fn total_entropy(&self) -> Result<f64> {
        let mut s = 0.0;
        for q in 0..self.n {
            s += entropy::renyi2(&self.rdm1(q)?)?;
        }
        Ok(s)
    }

    /// `U ρ U†` in place.
    pub fn evolve_in_place(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.n)?;
        let n = self.n;
        gate.remap(|q| q + n).apply_raw(&mut self.data);
        gate.conjugate().apply_raw(&mut self.data);
        Ok(())
    }

    /// `(1−p) ρ + p · I_S/d_S ⊗ Tr_S ρ` on one or two qubits `S`.
    pub fn depolarize_in_place(&mut self, qubits: &[usize], p: f64) -> Result<()> {
        check_probability(p)?;
        match qubits.len() {
            1 | 2 => {}
            _ => return Err(invalid("local depolarizing acts on one or two qubits")),
        }
        for &q in qubits {
            if q >= self.n {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits: self.n });
            }
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::RepeatedQubit(qubits[0]));
        }
        if p == 0.0 {
            return Ok(());
        }
        let n = self.n;
        // Local offsets over S in the column and row halves.
        let mut bits: Vec<usize> = qubits.iter().flat_map(|&q| [q, q + n]).collect();
        bits.sort_unstable();
        let k = qubits.len();
        let d = 1usize << k;
        let offset = |s: usize, shift: usize| -> usize {
            qubits.iter().enumerate().map(|(i, &q)| ((s >> i) & 1) << (q + shift)).sum()
        };
        let col_off: Vec<usize> = (0..d).map(|s| offset(s, 0)).collect();
        let row_off: Vec<usize> = (0..d).map(|s| offset(s, n)).collect();
        let inv_d = 1.0 / d as f64;
        for base_k in 0..self.data.len() >> (2 * k) {
            let mut base = base_k;
            for &b in &bits {
                base = insert_zero_bit(base, b);
            }
            let mut t = ZERO;
            for s in 0..d {
                t += self.data[base | row_off[s] | col_off[s]];
            }
            for (s1, ro) in row_off.iter().enumerate() {
                for (s2, co) in col_off.iter().enumerate() {
                    let x = &mut self.data[base | ro | co];
                    *x *= 1.0 - p;
                    if s1 == s2 {
                        *x += t * (p * inv_d);
                    }
                }
            }
        }
        Ok(())
    }

    /// `(1−p) ρ + p I/2^N`.
    pub fn depolarize_global_in_place(&mut self, p: f64) -> Result<()> {
        check_probability(p)?;
        let d = self.dim();
        self.data.iter_mut().for_each(|x| *x *= 1.0 - p);
        let add = c64(p / d as f64, 0.0);
        for i in 0..d {
            self.data[(i << self.n) | i] += add;
        }
        Ok(())
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    Ok(())
}

pub fn evolve_unitary(dm: &DensityMatrix, gate: &GateOp) -> Result<DensityMatrix> {
    let mut out = dm.clone();
    out.evolve_in_place(gate)?;
    Ok(out)
}

pub fn depolarize(dm: &DensityMatrix, qubits: &[usize], p: f64) -> Result<DensityMatrix> {
    let mut out = dm.clone();
    out.depolarize_in_place(qubits, p)?;
    Ok(out)
}

pub fn depolarize_global(dm: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    let mut out = dm.clone();
    out.depolarize_global_in_place(p)?;
    Ok(out)
}

/// Where depolarizing noise is inserted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoisePlacement {
    /// After every gate, on that gate's support.
    #[default]
    PerGate,
    /// After every ASAP layer, on all qubits: `p2` when the layer holds a
    /// two-qubit gate, else `p1`.
    PerLayer,
}

/// ASAP layer index of each op.
pub fn asap_layers(circuit: &Circuit) -> Vec<usize> {
    let mut front = vec![0usize; circuit.num_qubits()];
    circuit
        .ops()
        .iter()
        .map(|op| {
            let qs = op.gate.qubits();
            let l = qs.iter().map(|&q| front[q]).max().unwrap_or(0);
            for &q in qs {
                front[q] = l + 1;
            }
            l
        })
        .collect()
}

/// Runs `circuit(params)` on `|0…0⟩⟨0…0|` with depolarizing noise and returns
/// `1 − ⟨target|ρ_out|target⟩`.
pub fn noisy_load_eval(
    target: &StateVector,
    circuit: &Circuit,
    params: &[f64],
    p1: f64,
    p2: f64,
    placement: NoisePlacement,
) -> Result<f64> {
    check_probability(p1)?;
    check_probability(p2)?;
    let n = circuit.num_qubits();
    let mut rho = DensityMatrix::zero(n)?;
    let bound = circuit.bind(params)?;
    match placement {
        NoisePlacement::PerGate => {
            for op in bound.ops() {
                rho.evolve_in_place(&op.gate)?;
                let p = if op.gate.kind().is_two_qubit() { p2 } else { p1 };
                rho.depolarize_in_place(op.gate.qubits(), p)?;
            }
        }
        NoisePlacement::PerLayer => {
            let layers = asap_layers(&bound);
            let depth = layers.iter().map(|l| l + 1).max().unwrap_or(0);
            for l in 0..depth {
                let mut two = false;
                for (op, _) in bound.ops().iter().zip(&layers).filter(|(_, &ol)| ol == l) {
                    rho.evolve_in_place(&op.gate)?;
                    two |= op.gate.kind().is_two_qubit();
                }
                rho.depolarize_global_in_place(if two { p2 } else { p1 })?;
            }
        }
    }
    Ok(1.0 - rho.expectation_pure(target)?)
}

/// One row of a noise sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSweepRow {
    pub t: usize,
    pub noiseless: f64,
    pub noisy: f64,
}

/// Trains AQER noiselessly for every `T` and evaluates each loader under
/// noise.
pub fn noise_sweep(
    target: &StateVector,
    cfg: &AqerConfig,
    ts: &[usize],
    p1: f64,
    p2: f64,
    placement: NoisePlacement,
) -> Result<Vec<NoiseSweepRow>> {
    let runs = run_aqer_prefixes(target, cfg, ts)?;
    runs.iter()
        .map(|r| {
            Ok(NoiseSweepRow {
                t: r.config.t,
                noiseless: r.infidelity_final,
                noisy: noisy_load_eval(target, &r.circuit, &r.theta_star, p1, p2, placement)?,
            })
        })
        .collect()
}

/// Worst violation found by [`verify_depol_bounds`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepolReport {
    pub checks: usize,
    /// `max(lower − S, S − upper, 0)`.
    pub max_violation: f64,
}

/// Random pure and mixed states on `n` qubits, for the bound checks.
fn random_density<R: RngCore + ?Sized>(n: usize, mixed: bool, rng: &mut R) -> Result<DensityMatrix> {
    if !mixed {
        return DensityMatrix::from_pure(&random_state(n, rng));
    }
    let k = rng.random_range(2..=4usize);
    let mut w: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 1e-3).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    let parts: Vec<(f64, StateVector)> = w.into_iter().map(|x| (x, random_state(n, rng))).collect();
    DensityMatrix::from_mixture(&parts)
}

/// Checks `lower ≤ S(D_p(ρ)) ≤ upper` for `trials` random pure and mixed
/// states per `p`.
pub fn verify_depol_bounds(n: usize, trials: usize, p_grid: &[f64], seed: u64) -> Result<DepolReport> {
    if n > 6 {
        return Err(Error::TooManyQubits { got: n, limit: 6 });
    }
    let mut rng = substream(seed, Stream::Dataset);
    let mut worst: f64 = 0.0;
    let mut checks = 0;
    for t in 0..trials {
        let rho = random_density(n, t % 2 == 1, &mut rng)?;
        let s = rho.total_entropy()?;
        for &p in p_grid {
            let out = depolarize_global(&rho, p)?;
            let sp = out.total_entropy()?;
            let (lo, hi) = depol_entropy_bounds(s, n, p)?;
            worst = worst.max(lo - sp).max(sp - hi);
            checks += 1;
        }
    }
    Ok(DepolReport { checks, max_violation: worst })
}

/// Outcome of one layered noisy-bound instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayeredBoundCheck {
    /// `S(F^{(L)}(ρ_target))`.
    pub s: f64,
    pub lower: f64,
    pub upper: f64,
    /// Infidelity of the closed-form product state pushed through `E^{(L)}`.
    pub constructed: f64,
    /// Smallest infidelity seen over random product states.
    pub min_random: f64,
}

/// Layered noisy-circuit bound check with `M = N = D_p` (global
/// depolarizing) and `L` layers of random two-qubit unitaries.
pub fn layered_bound_check<R: RngCore + ?Sized>(
    target: &StateVector,
    layers: &[GateOp],
    p: f64,
    random_products: usize,
    rng: &mut R,
) -> Result<LayeredBoundCheck> {
    let n = target.num_qubits();
    let l = layers.len();
    // F = N ∘ U_1† ∘ N ∘ ⋯ ∘ U_L† ∘ N
    let mut back = DensityMatrix::from_pure(target)?;
    back.depolarize_global_in_place(p)?;
    for g in layers.iter().rev() {
        back.evolve_in_place(&g.inverse())?;
        back.depolarize_global_in_place(p)?;
    }
    let s = back.total_entropy()?;
    let d = entropy::depolarizing_diamond_bound(p)?;
    let (lower, upper) = entropy::noisy_bounds(s, n, l, d, d)?;
    let forward = |psi: &StateVector| -> Result<f64> {
        let mut rho = DensityMatrix::from_pure(psi)?;
        rho.depolarize_global_in_place(p)?;
        for g in layers {
            rho.evolve_in_place(g)?;
            rho.depolarize_global_in_place(p)?;
        }
        Ok(1.0 - rho.expectation_pure(target)?)
    };
    let mut factors = Vec::with_capacity(n);
    for q in 0..n {
        let pp = entropy::product_params(&back.rdm1(q)?);
        factors.push(entropy::product_amplitudes(pp.beta, pp.gamma));
    }
    let constructed = forward(&StateVector::product(&factors)?)?;
    let mut min_random = f64::INFINITY;
    for _ in 0..random_products {
        let f: Vec<[C64; 2]> = (0..n).map(|_| *random_state(1, rng).amplitudes().first_chunk().expect("two amplitudes")).collect();
        min_random = min_random.min(forward(&StateVector::product(&f)?)?);
    }
    Ok(LayeredBoundCheck { s, lower, upper, constructed, min_random })
}

/// Random layer of one two-qubit unitary on a random pair.
pub fn random_layer<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> Result<GateOp> {
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    GateOp::u2q(a, b, random_unitary4(rng))
}

/// Step-II product state of a (possibly mixed) state.
pub fn product_state_of(rho: &DensityMatrix) -> Result<StateVector> {
    let mut f = Vec::with_capacity(rho.num_qubits());
    for q in 0..rho.num_qubits() {
        let pp = entropy::product_params(&rho.rdm1(q)?);
        f.push(entropy::product_amplitudes(pp.beta, pp.gamma));
    }
    StateVector::product(&f)
}
