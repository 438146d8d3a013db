//! The three-step AQER loader.
//!
//! Step I greedily appends two-qubit blocks `V = RZZ·(RY RZ ⊗ RY RZ)` that
//! minimize the entanglement measure of `V·v_{t−1}`. Step II reads the
//! optimal product state off the single-qubit RDMs of `v_T`. Step III tunes
//! all angles of `U(θ) = V_T(α)†·W(β, γ)` on the infidelity.
//!
//! The loader circuit stores the inverse-block angles directly, so
//! `theta[5b..5b+5]` equals the negated Step-I angles of block `b` at
//! initialization, followed by the `N` values of `β` and the `N` of `γ`.
//!
//! In shot mode every candidate pair's two-qubit RDM is rebuilt once from
//! shot-estimated Pauli expectations, and Nelder–Mead then runs classically
//! on that estimate.

use alloc::vec::Vec;

use rand::RngCore;

use crate::circuit::Circuit;
use crate::entropy::{self, product_params};
use crate::error::{Error, Result};
use crate::gate::GateOp;
use crate::kernel::{ry_matrix, rz_matrix};
use crate::linalg::{kron2, mat2_mul, Mat4};
use crate::optim::{adam, adjoint_gradient, nelder_mead, shifted_fidelities, AdamOptions, NelderMeadOptions};
use crate::random::{child_stream, substream, Stream};
use crate::state::{fidelity, rdm1, rdm2_raw, shot_estimate, shot_probability, Rdm1, Rdm2, StateVector};

/// Parameters of one AQER run.
#[derive(Debug, Clone, PartialEq)]
pub struct AqerConfig {
    /// Step-I iterations, equal to the two-qubit gate count `G`.
    pub t: usize,
    /// Step-III Adam iterations.
    pub t3: usize,
    pub lr: f64,
    pub nm_tol: f64,
    pub nm_max_iter: usize,
    /// `None` runs with exact classical access.
    pub shots: Option<u64>,
    pub seed: u64,
    /// Candidate pairs; all unordered pairs when `None`.
    pub pair_set: Option<Vec<(usize, usize)>>,
}

impl Default for AqerConfig {
    fn default() -> Self {
        Self { t: 0, t3: 2000, lr: 1e-2, nm_tol: 1e-4, nm_max_iter: 500, shots: None, seed: 0, pair_set: None }
    }
}

impl AqerConfig {
    pub fn with_t(t: usize) -> Self {
        Self { t, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.shots == Some(0) {
            return Err(crate::error::invalid("shot mode needs at least one shot"));
        }
        if !(self.lr > 0.0) || !(self.nm_tol > 0.0) {
            return Err(crate::error::invalid("lr and nm_tol must be positive"));
        }
        Ok(())
    }

    /// Sorted, de-duplicated candidate pairs `(j, k)` with `j < k`.
    pub fn candidate_pairs(&self, num_qubits: usize) -> Result<Vec<(usize, usize)>> {
        let mut pairs: Vec<(usize, usize)> = match &self.pair_set {
            None => (0..num_qubits).flat_map(|j| (j + 1..num_qubits).map(move |k| (j, k))).collect(),
            Some(set) => {
                let mut v = Vec::with_capacity(set.len());
                for &(a, b) in set {
                    for q in [a, b] {
                        if q >= num_qubits {
                            return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
                        }
                    }
                    if a == b {
                        return Err(Error::RepeatedQubit(a));
                    }
                    v.push((a.min(b), a.max(b)));
                }
                v
            }
        };
        pairs.sort_unstable();
        pairs.dedup();
        Ok(pairs)
    }
}

/// One Step-I block on `pair = (j, k)`, angles
/// `(θ_RZ_j, θ_RY_j, θ_RZ_k, θ_RY_k, θ_RZZ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub pair: (usize, usize),
    pub angles: [f64; 5],
}

impl Block {
    /// Gates in application order.
    pub fn gates(&self) -> [GateOp; 5] {
        let (j, k) = self.pair;
        let a = self.angles;
        [GateOp::rz(j, a[0]), GateOp::ry(j, a[1]), GateOp::rz(k, a[2]), GateOp::ry(k, a[3]), GateOp::rzz(j, k, a[4])]
    }

    /// Local 4×4 unitary, index `2·bit(j) + bit(k)`.
    pub fn matrix(&self) -> Mat4 {
        block_matrix(&self.angles)
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        for g in self.gates() {
            state.apply_in_place(&g)?;
        }
        Ok(())
    }
}

fn block_matrix(a: &[f64]) -> Mat4 {
    let uj = mat2_mul(&ry_matrix(a[1]), &rz_matrix(a[0]));
    let uk = mat2_mul(&ry_matrix(a[3]), &rz_matrix(a[2]));
    let mut m = kron2(&uj, &uk);
    let z = rz_matrix(a[4]);
    let (even, odd) = (z[0][0], z[1][1]);
    for (r, row) in m.iter_mut().enumerate() {
        let d = if r == 0 || r == 3 { even } else { odd };
        for x in row.iter_mut() {
            *x *= d;
        }
    }
    m
}

/// Output of Step I.
#[derive(Debug, Clone, PartialEq)]
pub struct Step1Output {
    pub blocks: Vec<Block>,
    pub v_t: StateVector,
    /// Exact `S(v_0)`.
    pub s_initial: f64,
    /// Exact `S(v_t)` after each iteration.
    pub s_trace: Vec<f64>,
}

/// Candidates whose objective values differ by less than this are tied.
const TIE_TOL: f64 = 1e-12;

/// Shot-estimated single-qubit RDM.
fn estimate_rdm1<R: RngCore + ?Sized>(exact: &Rdm1, shots: u64, rng: &mut R) -> Result<Rdm1> {
    let [x, y, z] = exact.bloch();
    let ex = shot_estimate(x.clamp(-1.0, 1.0), shots, rng)?;
    let ey = shot_estimate(y.clamp(-1.0, 1.0), shots, rng)?;
    let ez = shot_estimate(z.clamp(-1.0, 1.0), shots, rng)?;
    Ok(Rdm1::from_bloch_projected(ex, ey, ez))
}

/// Two-qubit RDM rebuilt from the 15 shot-estimated Pauli expectations.
fn estimate_rdm2<R: RngCore + ?Sized>(exact: &Rdm2, shots: u64, rng: &mut R) -> Result<Rdm2> {
    let mut c = exact.pauli_coefficients();
    for (a, row) in c.iter_mut().enumerate() {
        for (b, x) in row.iter_mut().enumerate() {
            if a + b > 0 {
                *x = shot_estimate(x.clamp(-1.0, 1.0), shots, rng)?;
            }
        }
    }
    Rdm2::from_pauli_projected(&c)
}

fn qubit_entropy(rho: &Rdm1) -> f64 {
    entropy::renyi2_qubit(rho)
}

/// Greedy entanglement reduction.
pub fn step1(target: &StateVector, cfg: &AqerConfig) -> Result<Step1Output> {
    cfg.validate()?;
    let n = target.num_qubits();
    let pairs = cfg.candidate_pairs(n)?;
    if cfg.t > 0 && pairs.is_empty() {
        return Err(Error::EmptyPairSet);
    }
    let stride = pairs.len() as u64 + 1;
    let nm = NelderMeadOptions::new(cfg.nm_tol, cfg.nm_max_iter);
    let mut v = target.clone();
    let s_initial = entropy::total_entropy(&v)?;

    // Cached per-qubit entropies as seen by the algorithm.
    let mut cache: Vec<f64> = Vec::with_capacity(n);
    {
        let mut rng = child_stream(cfg.seed, Stream::Step1, 0);
        for q in 0..n {
            let exact = rdm1(&v, q)?;
            cache.push(match cfg.shots {
                None => qubit_entropy(&exact),
                Some(m) => qubit_entropy(&estimate_rdm1(&exact, m, &mut rng)?),
            });
        }
    }

    let mut blocks = Vec::with_capacity(cfg.t);
    let mut s_trace = Vec::with_capacity(cfg.t);
    for t in 1..=cfg.t {
        let total: f64 = cache.iter().sum();
        let mut best: Option<(f64, Block)> = None;
        for (pi, &(j, k)) in pairs.iter().enumerate() {
            let exact = Rdm2::from_raw(rdm2_raw(v.amplitudes(), j, k));
            let rho = match cfg.shots {
                None => exact,
                Some(m) => {
                    let mut rng = child_stream(cfg.seed, Stream::Step1, t as u64 * stride + pi as u64);
                    estimate_rdm2(&exact, m, &mut rng)?
                }
            };
            let rest = total - cache[j] - cache[k];
            let objective = |a: &[f64]| -> f64 {
                let r = rho.conjugated_by(&block_matrix(a));
                rest + qubit_entropy(&r.keep_first()) + qubit_entropy(&r.keep_second())
            };
            let res = nelder_mead(objective, &[0.0; 5], &nm)?;
            if best.as_ref().is_none_or(|(bv, _)| res.best_value < bv - TIE_TOL) {
                let mut angles = [0.0; 5];
                angles.copy_from_slice(&res.best_params);
                best = Some((res.best_value, Block { pair: (j, k), angles }));
            }
        }
        let (_, block) = best.expect("pair set is non-empty");
        block.apply(&mut v)?;
        let (j, k) = block.pair;
        let mut rng = child_stream(cfg.seed, Stream::Step1, t as u64 * stride + pairs.len() as u64);
        for q in [j, k] {
            let exact = rdm1(&v, q)?;
            cache[q] = match cfg.shots {
                None => qubit_entropy(&exact),
                Some(m) => qubit_entropy(&estimate_rdm1(&exact, m, &mut rng)?),
            };
        }
        blocks.push(block);
        s_trace.push(entropy::total_entropy(&v)?);
    }
    Ok(Step1Output { blocks, v_t: v, s_initial, s_trace })
}

/// Closed-form product-state angles `(β, γ)` per qubit of `v_T`. With
/// `shots`, each RDM is rebuilt from shot-estimated Pauli expectations.
pub fn step2<R: RngCore + ?Sized>(
    v_t: &StateVector,
    shots: Option<u64>,
    rng: &mut R,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = v_t.num_qubits();
    let (mut beta, mut gamma) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for q in 0..n {
        let exact = rdm1(v_t, q)?;
        let rho = match shots {
            None => exact,
            Some(m) => estimate_rdm1(&exact, m, rng)?,
        };
        let p = product_params(&rho);
        beta.push(p.beta);
        gamma.push(p.gamma);
    }
    Ok((beta, gamma))
}

/// Loader circuit `V_T(α)†·W(β, γ)` acting on `|0…0⟩`, with slots
/// `0..5T` for the inverse blocks, `5T..5T+N` for `β`, `5T+N..5T+2N` for `γ`.
pub fn build_loader_circuit(num_qubits: usize, blocks: &[Block]) -> Result<Circuit> {
    let n = num_qubits;
    let nb = blocks.len();
    let mut c = Circuit::new(n);
    for q in 0..n {
        c.push_slot(GateOp::ry(q, 0.0), 5 * nb + n + q)?;
        c.push_slot(GateOp::rz(q, 0.0), 5 * nb + q)?;
    }
    for (b, blk) in blocks.iter().enumerate().rev() {
        let (j, k) = blk.pair;
        let s = 5 * b;
        c.push_slot(GateOp::rzz(j, k, 0.0), s + 4)?;
        c.push_slot(GateOp::ry(k, 0.0), s + 3)?;
        c.push_slot(GateOp::rz(k, 0.0), s + 2)?;
        c.push_slot(GateOp::ry(j, 0.0), s + 1)?;
        c.push_slot(GateOp::rz(j, 0.0), s)?;
    }
    Ok(c)
}

/// Step-III starting point `(−α, β, γ)`.
pub fn initial_params(blocks: &[Block], beta: &[f64], gamma: &[f64]) -> Vec<f64> {
    let mut p: Vec<f64> = blocks.iter().flat_map(|b| b.angles.iter().map(|a| -a)).collect();
    p.extend_from_slice(beta);
    p.extend_from_slice(gamma);
    p
}

/// Output of Step III.
#[derive(Debug, Clone, PartialEq)]
pub struct Step3Output {
    pub theta_star: Vec<f64>,
    /// Loss at every Adam iterate (shot estimates in shot mode).
    pub loss_trace: Vec<f64>,
}

/// Adam fine-tuning of the loader angles.
pub fn step3(
    target: &StateVector,
    blocks: &[Block],
    beta: &[f64],
    gamma: &[f64],
    cfg: &AqerConfig,
) -> Result<(Circuit, Step3Output)> {
    let circuit = build_loader_circuit(target.num_qubits(), blocks)?;
    let theta0 = initial_params(blocks, beta, gamma);
    let opts = AdamOptions::new(cfg.lr, cfg.t3);
    let out = match cfg.shots {
        None => {
            let res = adam(
                |x, g| {
                    let (loss, grad) = adjoint_gradient(target, &circuit, x)?;
                    g.copy_from_slice(&grad);
                    Ok(loss)
                },
                &theta0,
                &opts,
            )?;
            Step3Output { theta_star: res.best_params, loss_trace: res.trace.into_iter().map(|(_, v)| v).collect() }
        }
        Some(m) => {
            let mut rng = substream(cfg.seed, Stream::Step3);
            let res = adam(
                |x, g| {
                    let sf = shifted_fidelities(target, &circuit, x)?;
                    g.iter_mut().for_each(|v| *v = 0.0);
                    for &(_, slot, fp, fm) in &sf.shifts {
                        let fp = shot_probability(fp, m, &mut rng)?;
                        let fm = shot_probability(fm, m, &mut rng)?;
                        g[slot] -= 0.5 * (fp - fm);
                    }
                    Ok(1.0 - shot_probability(sf.fidelity, m, &mut rng)?)
                },
                &theta0,
                &opts,
            )?;
            // The best noisy estimate is biased low; re-check it against the
            // last iterate with ten times the shots.
            let check = m.saturating_mul(10);
            let mut recheck = |p: &[f64]| -> Result<f64> {
                let f = 1.0 - crate::optim::infidelity_loss(target, &circuit, p)?;
                Ok(1.0 - shot_probability(f.clamp(0.0, 1.0), check, &mut rng)?)
            };
            let lb = recheck(&res.best_params)?;
            let lf = recheck(&res.final_params)?;
            let theta_star = if lf < lb { res.final_params } else { res.best_params };
            Step3Output { theta_star, loss_trace: res.trace.into_iter().map(|(_, v)| v).collect() }
        }
    };
    Ok((circuit, out))
}

/// Full AQER result.
#[derive(Debug, Clone, PartialEq)]
pub struct AqerResult {
    pub config: AqerConfig,
    pub blocks: Vec<Block>,
    pub circuit: Circuit,
    pub theta_init: Vec<f64>,
    pub theta_star: Vec<f64>,
    pub s_initial: f64,
    pub s_trace: Vec<f64>,
    /// Exact `S(v_T)`.
    pub s_final: f64,
    pub loss_trace: Vec<f64>,
    /// Exact infidelity after Step II.
    pub infidelity_initial: f64,
    /// Exact infidelity of the returned parameters.
    pub infidelity_final: f64,
    /// Two-qubit gate count (number of RZZ gates).
    pub g: usize,
}

impl AqerResult {
    /// `U(θ*)|0…0⟩`.
    pub fn loaded_state(&self) -> Result<StateVector> {
        crate::circuit::apply_circuit(&StateVector::zero(self.circuit.num_qubits()), &self.circuit, &self.theta_star)
    }
}

fn finish(target: &StateVector, cfg: &AqerConfig, s1: &Step1Output) -> Result<AqerResult> {
    let mut rng = substream(cfg.seed, Stream::Shots);
    let (beta, gamma) = step2(&s1.v_t, cfg.shots, &mut rng)?;
    let (circuit, s3) = step3(target, &s1.blocks, &beta, &gamma, cfg)?;
    let theta_init = initial_params(&s1.blocks, &beta, &gamma);
    let infidelity_initial = crate::optim::infidelity_loss(target, &circuit, &theta_init)?;
    let loaded = crate::circuit::apply_circuit(&StateVector::zero(target.num_qubits()), &circuit, &s3.theta_star)?;
    let infidelity_final = 1.0 - fidelity(target, &loaded)?;
    Ok(AqerResult {
        config: cfg.clone(),
        blocks: s1.blocks.clone(),
        g: circuit.count_kind(crate::gate::GateKind::RZZ),
        circuit,
        theta_init,
        theta_star: s3.theta_star,
        s_initial: s1.s_initial,
        s_trace: s1.s_trace.clone(),
        s_final: entropy::total_entropy(&s1.v_t)?,
        loss_trace: s3.loss_trace,
        infidelity_initial,
        infidelity_final,
    })
}

/// Steps I–III.
pub fn run_aqer(target: &StateVector, cfg: &AqerConfig) -> Result<AqerResult> {
    let s1 = step1(target, cfg)?;
    finish(target, cfg, &s1)
}

/// Runs Step I once up to `max(ts)` and finishes Steps II–III for every
/// prefix length in `ts`. Step I is greedy and its randomness is keyed by
/// iteration, so each result equals a standalone run with `cfg.t = t`.
pub fn run_aqer_prefixes(target: &StateVector, cfg: &AqerConfig, ts: &[usize]) -> Result<Vec<AqerResult>> {
    let tmax = ts.iter().copied().max().unwrap_or(0);
    let full = step1(target, &AqerConfig { t: tmax, ..cfg.clone() })?;
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        let mut v = target.clone();
        for b in &full.blocks[..t] {
            b.apply(&mut v)?;
        }
        let prefix = Step1Output {
            blocks: full.blocks[..t].to_vec(),
            v_t: v,
            s_initial: full.s_initial,
            s_trace: full.s_trace[..t].to_vec(),
        };
        out.push(finish(target, &AqerConfig { t, ..cfg.clone() }, &prefix)?);
    }
    Ok(out)
}

/// Product state `W(β, γ)|0…0⟩`.
pub fn product_state(beta: &[f64], gamma: &[f64]) -> Result<StateVector> {
    let factors: Vec<_> = beta.iter().zip(gamma).map(|(&b, &g)| entropy::product_amplitudes(b, g)).collect();
    StateVector::product(&factors)
}

/// Step-II infidelity `1 − |⟨v_T|W(β,γ)|0⟩|²` with `(β, γ)` from `v_T`.
pub fn step2_infidelity(v_t: &StateVector) -> Result<f64> {
    let mut rng = substream(0, Stream::Shots);
    let (beta, gamma) = step2(v_t, None, &mut rng)?;
    Ok(1.0 - fidelity(v_t, &product_state(&beta, &gamma)?)?)
}

/// Zero-angle Step-III gradient norm at the Step-II starting point.
pub fn initial_gradient_norm(target: &StateVector, blocks: &[Block]) -> Result<f64> {
    let mut v = target.clone();
    for b in blocks {
        b.apply(&mut v)?;
    }
    let mut rng = substream(0, Stream::Shots);
    let (beta, gamma) = step2(&v, None, &mut rng)?;
    let circuit = build_loader_circuit(target.num_qubits(), blocks)?;
    let (_, g) = adjoint_gradient(target, &circuit, &initial_params(blocks, &beta, &gamma))?;
    Ok(crate::math::sqrt(g.iter().map(|x| x * x).sum()))
}
