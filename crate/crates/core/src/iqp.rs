//! IQP loaders built on a restricted Step I.
//!
//! Every candidate block on a pair `(p, q)` carries a Hadamard (realized as
//! `RZ(π)` followed by `RY(π/2)`, which is `−iH`) on each qubit not touched
//! by an earlier block, and a single `RZZ(α)` with `α` drawn from a finite
//! set. On the residual state `Π e^{−iβ ZZ/2}|+⟩^⊗N` this cancels one edge
//! angle per iteration.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use crate::aqer::{build_loader_circuit, initial_params, step2, Block};
use crate::circuit::{apply_circuit, Circuit};
use crate::datasets::{iqp_state, IqpSpec};
use crate::entropy::{self, product_params};
use crate::error::{invalid, Error, Result};
use crate::gate::GateOp;
use crate::math;
use crate::random::{child_stream, substream, Stream};
use crate::state::{fidelity, pauli_expectation, rdm1, rdm2_raw, shot_estimate, Pauli, Rdm1, Rdm2, StateVector};

/// Total entropy below which a state counts as product.
pub const EXACT_TOL: f64 = 1e-10;

/// Grid objective values closer than this are tied; the earlier candidate in
/// search order wins.
const TIE_TOL: f64 = 1e-12;

/// Shot constant `c` in `M = ⌈c·2^D·ln(N²|E_max|/δ)⌉`, frozen from
/// [`calibrate_shot_constant`] with [`CALIBRATION_GRID`], 200 trials,
/// `δ = 0.05` and seed 2024.
pub const SHOT_CONSTANT: f64 = 16.0;

/// Candidate shot constants, tried in increasing order.
pub const CALIBRATION_GRID: [f64; 9] = [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0];

/// Angles `aπ/(2K+1)` for `a ∈ [−2K, 2K]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IqpGrid {
    k: usize,
}

impl IqpGrid {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("IQP grid size K must be positive"));
        }
        Ok(Self { k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        4 * self.k + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        math::PI / (2 * self.k + 1) as f64
    }

    pub fn angle(&self, a: i64) -> f64 {
        a as f64 * self.step()
    }

    /// Grid points in ascending order.
    pub fn values(&self) -> Vec<f64> {
        let k = self.k as i64;
        (-2 * k..=2 * k).map(|a| self.angle(a)).collect()
    }

    /// Grid points by increasing `|a|`, negative first: `0, −1, 1, −2, …`.
    pub fn search_order(&self) -> Vec<f64> {
        let mut out = vec![0.0];
        for a in 1..=2 * self.k as i64 {
            out.push(self.angle(-a));
            out.push(self.angle(a));
        }
        out
    }
}

/// Outcome of an IQP loader.
#[derive(Debug, Clone, PartialEq)]
pub struct IqpLoad {
    /// Accepted Step-I blocks, in order.
    pub blocks: Vec<Block>,
    pub s_initial: f64,
    /// Exact total entropy after each accepted block.
    pub s_trace: Vec<f64>,
    pub s_final: f64,
    /// Loader `V_T† W(β, γ)` and its parameters.
    pub circuit: Circuit,
    pub params: Vec<f64>,
    /// Exact `1 − |⟨target|U|0…0⟩|²`.
    pub infidelity: f64,
    /// Oracle shots consumed (zero with classical access).
    pub shots_used: u64,
    /// Grid size used, when a grid was searched.
    pub grid_k: Option<usize>,
}

impl IqpLoad {
    pub fn iterations(&self) -> usize {
        self.blocks.len()
    }

    /// Pairs of the accepted blocks, normalized and sorted.
    pub fn edge_set(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.blocks.iter().map(|b| (b.pair.0.min(b.pair.1), b.pair.0.max(b.pair.1))).collect();
        e.sort_unstable();
        e
    }

    /// RZZ angle of each accepted block.
    pub fn block_angles(&self) -> Vec<f64> {
        self.blocks.iter().map(|b| b.angles[4]).collect()
    }
}

fn hadamard_part(touched: bool) -> [f64; 2] {
    if touched {
        [0.0, 0.0]
    } else {
        [math::PI, math::FRAC_PI_2]
    }
}

fn candidate(pair: (usize, usize), touched: &[bool], alpha: f64) -> Block {
    let hp = hadamard_part(touched[pair.0]);
    let hq = hadamard_part(touched[pair.1]);
    Block { pair, angles: [hp[0], hp[1], hq[0], hq[1], alpha] }
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).collect()
}

struct Search {
    blocks: Vec<Block>,
    v: StateVector,
    s_initial: f64,
    s_trace: Vec<f64>,
}

/// Greedy grid search over `(pair, α)`. Stops once the state is product,
/// the budget is spent, or no candidate lowers the entropy.
fn restricted_step1(target: &StateVector, alphas: &[f64], one_per_pair: bool, budget: usize) -> Result<Search> {
    let n = target.num_qubits();
    let pairs = all_pairs(n);
    let mut v = target.clone();
    let mut cache: Vec<f64> = (0..n).map(|q| rdm1(&v, q).map(|r| entropy::renyi2_qubit(&r))).collect::<Result<_>>()?;
    let s_initial = cache.iter().sum();
    let mut touched = vec![false; n];
    let mut used = vec![false; pairs.len()];
    let mut blocks = Vec::new();
    let mut s_trace = Vec::new();
    loop {
        let total: f64 = cache.iter().sum();
        if total < EXACT_TOL || blocks.len() >= budget {
            break;
        }
        let mut best: Option<(f64, usize, Block)> = None;
        for (pi, &(p, q)) in pairs.iter().enumerate() {
            if one_per_pair && used[pi] {
                continue;
            }
            let rho = Rdm2::from_raw(rdm2_raw(v.amplitudes(), p, q));
            let rest = total - cache[p] - cache[q];
            for &a in alphas {
                let blk = candidate((p, q), &touched, a);
                let r = rho.conjugated_by(&blk.matrix());
                let val = rest + entropy::renyi2_qubit(&r.keep_first()) + entropy::renyi2_qubit(&r.keep_second());
                if best.as_ref().is_none_or(|(bv, _, _)| val < bv - TIE_TOL) {
                    best = Some((val, pi, blk));
                }
            }
        }
        let Some((val, pi, blk)) = best else { break };
        if val >= total - TIE_TOL {
            break;
        }
        blk.apply(&mut v)?;
        let (p, q) = blk.pair;
        touched[p] = true;
        touched[q] = true;
        used[pi] = true;
        for x in [p, q] {
            cache[x] = entropy::renyi2_qubit(&rdm1(&v, x)?);
        }
        s_trace.push(entropy::total_entropy(&v)?);
        blocks.push(blk);
    }
    Ok(Search { blocks, v, s_initial, s_trace })
}

fn assemble(target: &StateVector, blocks: Vec<Block>, beta: &[f64], gamma: &[f64]) -> Result<(Circuit, Vec<f64>, f64)> {
    let n = target.num_qubits();
    let circuit = build_loader_circuit(n, &blocks)?;
    let params = initial_params(&blocks, beta, gamma);
    let loaded = apply_circuit(&StateVector::zero(n), &circuit, &params)?;
    let infidelity = 1.0 - fidelity(target, &loaded)?;
    Ok((circuit, params, infidelity))
}

fn finish_classical(target: &StateVector, search: Search, grid_k: Option<usize>) -> Result<IqpLoad> {
    let s_final = entropy::total_entropy(&search.v)?;
    let mut rng = substream(0, Stream::Shots);
    let (beta, gamma) = step2(&search.v, None, &mut rng)?;
    let (circuit, params, infidelity) = assemble(target, search.blocks.clone(), &beta, &gamma)?;
    Ok(IqpLoad {
        blocks: search.blocks,
        s_initial: search.s_initial,
        s_trace: search.s_trace,
        s_final,
        circuit,
        params,
        infidelity,
        shots_used: 0,
        grid_k,
    })
}

/// Exact loader for IQP states whose angles lie on the `K`-grid, with
/// classical access to the amplitudes. Fails if `budget` blocks do not bring
/// the entropy below [`EXACT_TOL`].
pub fn iqp_exact_load(target: &StateVector, k: usize, budget: usize) -> Result<IqpLoad> {
    let grid = IqpGrid::new(k)?;
    let search = restricted_step1(target, &grid.search_order(), false, budget)?;
    let out = finish_classical(target, search, Some(k))?;
    if out.s_final >= EXACT_TOL {
        return Err(Error::IqpLoad(alloc::format!(
            "entropy {:e} after {} iterations; input is not a K={k} grid IQP state",
            out.s_final,
            out.iterations()
        )));
    }
    Ok(out)
}

/// `K = ⌈(π/2)·√(DN/ε)⌉`, at least one.
pub fn approx_grid_size(degree: usize, n: usize, eps: f64) -> Result<usize> {
    if !(eps > 0.0) {
        return Err(invalid("epsilon must be positive"));
    }
    let k = math::ceil(math::FRAC_PI_2 * math::sqrt((degree * n) as f64 / eps));
    Ok((k as usize).max(1))
}

/// `DN(π/(2K+1))²`, the entropy guaranteed after one block per edge.
pub fn approx_entropy_bound(degree: usize, n: usize, k: usize) -> f64 {
    let x = math::PI / (2 * k + 1) as f64;
    (degree * n) as f64 * x * x
}

/// ε-approximate loader for IQP states with arbitrary angles and maximum
/// degree at most `degree`. At most one block per pair, so at most `|E|`
/// iterations.
pub fn iqp_approx_load(target: &StateVector, degree: usize, eps: f64) -> Result<IqpLoad> {
    let n = target.num_qubits();
    let k = approx_grid_size(degree, n, eps)?;
    let grid = IqpGrid::new(k)?;
    let search = restricted_step1(target, &grid.search_order(), true, n * (n - 1) / 2)?;
    finish_classical(target, search, Some(k))
}

/// Smallest `|cos ω|` over the edges of `spec` (one when there are none).
pub fn cosine_floor(spec: &IqpSpec) -> f64 {
    spec.edges.iter().map(|&(_, w)| math::cos(w).abs()).fold(1.0, f64::min)
}

/// `x_n = Π cos ω` over the edges incident to `n`: the `X` Bloch component
/// of qubit `n` in the residual state `Π e^{−iωZZ/2}|+⟩^⊗N`.
pub fn iqp_x_formula(spec: &IqpSpec, n: usize) -> Result<f64> {
    if n >= spec.num_qubits {
        return Err(Error::QubitOutOfRange { qubit: n, num_qubits: spec.num_qubits });
    }
    Ok(spec.edges.iter().filter(|((a, b), _)| *a == n || *b == n).map(|&(_, w)| math::cos(w)).product())
}

/// `−Σ log2((1 + x_n²)/2)`.
pub fn iqp_entropy_formula(spec: &IqpSpec) -> Result<f64> {
    let mut s = 0.0;
    for n in 0..spec.num_qubits {
        let x = iqp_x_formula(spec, n)?;
        s -= math::log2((1.0 + x * x) / 2.0);
    }
    Ok(s)
}

/// `Π e^{−iωZZ/2}|+⟩^⊗N`.
pub fn iqp_residual_state(spec: &IqpSpec) -> Result<StateVector> {
    let n = spec.num_qubits;
    let mut s = StateVector::zero(n);
    for q in 0..n {
        s.apply_in_place(&GateOp::h(q))?;
    }
    for &((a, b), w) in &spec.edges {
        s.apply_in_place(&GateOp::rzz(a, b, w))?;
    }
    Ok(s)
}

/// RZZ angle of the fixed-angle family `e^{−iπZZ/8} = RZZ(π/4)`.
pub const PI8_ANGLE: f64 = math::FRAC_PI_4;

/// Per-estimate shots `⌈c·2^D·ln(N²|E_max|/δ)⌉`.
pub fn shot_budget(n: usize, degree: usize, e_max: usize, delta: f64, c: f64) -> Result<u64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::ProbabilityOutOfRange(delta));
    }
    if !(c > 0.0) {
        return Err(invalid("shot constant must be positive"));
    }
    let arg = (n * n * e_max.max(1)) as f64 / delta;
    let m = math::ceil(c * math::exp2(degree as f64) * math::ln(arg));
    Ok((m as u64).max(1))
}

/// Acceptance threshold: half the smallest true increase of `x` when an
/// edge is cancelled, `(√2 − 1)·2^{−D/2}/2`.
pub fn separation_threshold(degree: usize) -> f64 {
    (math::SQRT_2 - 1.0) * math::exp2(-(degree as f64) / 2.0) / 2.0
}

/// Settings for [`iqp_shot_recover`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotRecoveryOptions {
    /// Known maximum degree `D`.
    pub degree: usize,
    /// Target failure probability.
    pub delta: f64,
    pub c: f64,
    /// Bound on `|E|`; `N(N−1)/2` when `None`.
    pub max_edges: Option<usize>,
    pub seed: u64,
}

impl ShotRecoveryOptions {
    pub fn new(degree: usize, delta: f64, seed: u64) -> Self {
        Self { degree, delta, c: SHOT_CONSTANT, max_edges: None, seed }
    }
}

/// Bloch component snapped to the nearest of `{−1, 0, 1}`.
fn snap(x: f64) -> f64 {
    if x > 0.5 {
        1.0
    } else if x < -0.5 {
        -1.0
    } else {
        0.0
    }
}

/// Recovers the graph of a fixed-angle (`ω = π/4`) IQP state and an exact
/// loader for it using only shot-estimated single-qubit expectations.
///
/// Per iteration every unused pair is probed with `α ∈ {0, −π/4}`; a pair
/// qualifies when both `x̂_p` and `x̂_q` rise by more than
/// [`separation_threshold`], and the qualifying pair with the largest
/// smaller rise is accepted. The amplitudes of `target` are touched only
/// through exact expectation values that are then resampled as shots.
pub fn iqp_shot_recover(target: &StateVector, opts: &ShotRecoveryOptions) -> Result<IqpLoad> {
    let n = target.num_qubits();
    let pairs = all_pairs(n);
    let e_max = opts.max_edges.unwrap_or(pairs.len());
    let m = shot_budget(n, opts.degree, e_max, opts.delta, opts.c)?;
    let tau = separation_threshold(opts.degree);
    let stride = pairs.len() as u64 + 1;

    let mut v = target.clone();
    let s_initial = entropy::total_entropy(&v)?;
    let mut touched = vec![false; n];
    let mut used = vec![false; pairs.len()];
    let mut blocks = Vec::new();
    let mut s_trace = Vec::new();
    let mut shots = 0u64;
    for t in 0..e_max as u64 {
        let mut best: Option<(f64, usize, Block)> = None;
        for (pi, &(p, q)) in pairs.iter().enumerate() {
            if used[pi] {
                continue;
            }
            let mut rng = child_stream(opts.seed, Stream::Shots, t * stride + pi as u64);
            let rho = Rdm2::from_raw(rdm2_raw(v.amplitudes(), p, q));
            let mut xs = [[0.0; 2]; 2];
            for (slot, alpha) in [0.0, -PI8_ANGLE].into_iter().enumerate() {
                let r = rho.conjugated_by(&candidate((p, q), &touched, alpha).matrix());
                xs[slot][0] = shot_estimate(r.keep_first().bloch()[0], m, &mut rng)?;
                xs[slot][1] = shot_estimate(r.keep_second().bloch()[0], m, &mut rng)?;
                shots += 2 * m;
            }
            let rise = (xs[1][0].abs() - xs[0][0].abs()).min(xs[1][1].abs() - xs[0][1].abs());
            if rise > tau && best.as_ref().is_none_or(|(b, _, _)| rise > *b) {
                best = Some((rise, pi, candidate((p, q), &touched, -PI8_ANGLE)));
            }
        }
        let Some((_, pi, blk)) = best else { break };
        blk.apply(&mut v)?;
        touched[blk.pair.0] = true;
        touched[blk.pair.1] = true;
        used[pi] = true;
        s_trace.push(entropy::total_entropy(&v)?);
        blocks.push(blk);
    }

    // Residual product states of this family are stabilizer states, so each
    // shot-estimated Bloch component is snapped to {−1, 0, 1}.
    let mut rng = child_stream(opts.seed, Stream::Shots, e_max as u64 * stride);
    let (mut beta, mut gamma) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for q in 0..n {
        let mut b = [0.0; 3];
        for (slot, axis) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
            b[slot] = snap(shot_estimate(pauli_expectation(&v, axis, q)?, m, &mut rng)?);
            shots += m;
        }
        let pp = product_params(&Rdm1::from_bloch_projected(b[0], b[1], b[2]));
        beta.push(pp.beta);
        gamma.push(pp.gamma);
    }
    let s_final = entropy::total_entropy(&v)?;
    let (circuit, params, infidelity) = assemble(target, blocks.clone(), &beta, &gamma)?;
    Ok(IqpLoad { blocks, s_initial, s_trace, s_final, circuit, params, infidelity, shots_used: shots, grid_k: None })
}

/// Random simple graph with `edges` edges (fewer if the degree cap or the
/// pair count runs out first).
pub fn random_graph<R: RngCore + ?Sized>(
    n: usize,
    edges: usize,
    max_degree: Option<usize>,
    rng: &mut R,
) -> Vec<(usize, usize)> {
    let mut pairs = all_pairs(n);
    pairs.shuffle(rng);
    let cap = max_degree.unwrap_or(usize::MAX);
    let mut deg = vec![0usize; n];
    let mut out = Vec::with_capacity(edges);
    for (a, b) in pairs {
        if out.len() == edges {
            break;
        }
        if deg[a] < cap && deg[b] < cap {
            deg[a] += 1;
            deg[b] += 1;
            out.push((a, b));
        }
    }
    out
}

/// Graph with nonzero angles drawn uniformly from the `K`-grid.
pub fn random_grid_spec<R: RngCore + ?Sized>(n: usize, edges: usize, k: usize, rng: &mut R) -> Result<IqpSpec> {
    let grid = IqpGrid::new(k)?;
    let ki = 2 * k as i64;
    let g = random_graph(n, edges, None, rng);
    let e = g
        .into_iter()
        .map(|pair| {
            let mut a = rng.random_range(-ki..ki);
            if a >= 0 {
                a += 1;
            }
            (pair, grid.angle(a))
        })
        .collect();
    IqpSpec::new(n, e)
}

/// Graph with i.i.d. Uniform[−π, π] angles.
pub fn random_continuous_spec<R: RngCore + ?Sized>(
    n: usize,
    edges: usize,
    max_degree: Option<usize>,
    rng: &mut R,
) -> Result<IqpSpec> {
    let g = random_graph(n, edges, max_degree, rng);
    let e = g.into_iter().map(|pair| (pair, rng.random_range(-math::PI..=math::PI))).collect();
    IqpSpec::new(n, e)
}

/// Fixed-angle instance on `edges`.
pub fn pi8_spec(n: usize, edges: &[(usize, usize)]) -> Result<IqpSpec> {
    IqpSpec::new(n, edges.iter().map(|&e| (e, PI8_ANGLE)).collect())
}

/// Empirical failure rate of shot recovery with constant `c`.
pub fn shot_failure_rate(c: f64, trials: usize, delta: f64, seed: u64) -> Result<f64> {
    let mut rng = substream(seed, Stream::Dataset);
    let mut failures = 0usize;
    for trial in 0..trials {
        let n = rng.random_range(2..=6usize);
        let d = rng.random_range(1..=3usize.min(n - 1));
        let m = rng.random_range(1..=n * (n - 1) / 2);
        let spec = pi8_spec(n, &random_graph(n, m, Some(d), &mut rng))?;
        let target = iqp_state(&spec)?;
        let opts = ShotRecoveryOptions { degree: d, delta, c, max_edges: None, seed: seed ^ trial as u64 };
        let out = iqp_shot_recover(&target, &opts)?;
        if out.edge_set() != spec.edge_set() {
            failures += 1;
        }
    }
    Ok(failures as f64 / trials.max(1) as f64)
}

/// Failure rate of shot recovery on the single-edge two-qubit state, where
/// the budget's log factor is smallest.
pub fn single_edge_failure_rate(c: f64, trials: usize, delta: f64, seed: u64) -> Result<f64> {
    let spec = pi8_spec(2, &[(0, 1)])?;
    let target = iqp_state(&spec)?;
    let mut failures = 0usize;
    for trial in 0..trials {
        let opts = ShotRecoveryOptions { degree: 1, delta, c, max_edges: None, seed: seed ^ trial as u64 };
        if iqp_shot_recover(&target, &opts)?.edge_set() != spec.edge_set() {
            failures += 1;
        }
    }
    Ok(failures as f64 / trials.max(1) as f64)
}

/// Smallest `c` in `grid` whose failure rate is at most `δ/2` both on random
/// graphs with `N ∈ [2, 6]`, `D ≤ 3` and on the single-edge state. Returns
/// `(c, worse of the two rates)`.
pub fn calibrate_shot_constant(grid: &[f64], trials: usize, delta: f64, seed: u64) -> Result<(f64, f64)> {
    for &c in grid {
        let rate = shot_failure_rate(c, trials, delta, seed)?.max(single_edge_failure_rate(c, trials, delta, seed)?);
        if rate <= delta / 2.0 {
            return Ok((c, rate));
        }
    }
    Err(Error::NoConvergence { what: "shot constant calibration", iterations: grid.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = IqpGrid::new(2).unwrap();
        let v = g.values();
        assert_eq!(v.len(), 9);
        assert_eq!(g.search_order().len(), 9);
        for (a, b) in v.iter().zip(v.iter().rev()) {
            assert!((a + b).abs() < 1e-15);
        }
        assert!(IqpGrid::new(0).is_err());
    }

    #[test]
    fn hadamard_block_is_minus_i_h() {
        let b = Block { pair: (0, 1), angles: [math::PI, math::FRAC_PI_2, 0.0, 0.0, 0.0] };
        let m = b.matrix();
        let s = math::FRAC_1_SQRT_2;
        // −iH ⊗ I with qubit 0 on the high local bit.
        let h = [[s, s], [s, -s]];
        for r in 0..4 {
            for c in 0..4 {
                let e = if r & 1 == c & 1 { h[r >> 1][c >> 1] } else { 0.0 };
                assert!((m[r][c] - crate::linalg::c64(0.0, -e)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn empty_graph_needs_no_blocks() {
        let spec = IqpSpec::new(4, vec![]).unwrap();
        let out = iqp_exact_load(&iqp_state(&spec).unwrap(), 2, 0).unwrap();
        assert_eq!(out.iterations(), 0);
        assert!(out.s_final < EXACT_TOL && out.infidelity < 1e-12);
    }

    #[test]
    fn single_edge_picks_negated_angle() {
        let spec = IqpSpec::new(2, vec![((0, 1), math::PI / 5.0)]).unwrap();
        let out = iqp_exact_load(&iqp_state(&spec).unwrap(), 2, 1).unwrap();
        assert_eq!(out.iterations(), 1);
        assert!((out.block_angles()[0] + math::PI / 5.0).abs() < 1e-15);
        assert!(out.infidelity < 1e-12);
    }

    #[test]
    fn exact_load_fails_off_grid() {
        let spec = IqpSpec::new(3, vec![((0, 1), 0.3), ((1, 2), 1.1)]).unwrap();
        assert!(matches!(iqp_exact_load(&iqp_state(&spec).unwrap(), 1, 2), Err(Error::IqpLoad(_))));
    }

    #[test]
    fn approx_constants() {
        assert_eq!(approx_grid_size(2, 6, 0.05).unwrap(), 25);
        assert!(approx_entropy_bound(2, 6, 25) <= 0.05);
        assert!(approx_grid_size(1, 1, 0.0).is_err());
    }

    #[test]
    fn threshold_separates_grid_values() {
        for d in 1..=6usize {
            let x = |k: usize| libm::pow(math::FRAC_1_SQRT_2, k as f64);
            let min_rise = (1..=d).map(|k| x(k - 1) - x(k)).fold(f64::INFINITY, f64::min);
            let tau = separation_threshold(d);
            assert!((min_rise - 2.0 * tau).abs() < 1e-15);
        }
    }

    #[test]
    fn calibration_reproduces_frozen_constant() {
        let (c, rate) = calibrate_shot_constant(&CALIBRATION_GRID, 200, 0.05, 2024).unwrap();
        assert_eq!(c, SHOT_CONSTANT);
        assert!(rate <= 0.025);
    }

    #[test]
    fn shot_recovery_single_edge() {
        let spec = pi8_spec(2, &[(0, 1)]).unwrap();
        let target = iqp_state(&spec).unwrap();
        let out = iqp_shot_recover(&target, &ShotRecoveryOptions::new(1, 0.05, 3)).unwrap();
        assert_eq!(out.edge_set(), vec![(0, 1)]);
        assert!(out.infidelity < 1e-12);
        let empty = iqp_shot_recover(&iqp_state(&pi8_spec(3, &[]).unwrap()).unwrap(), &ShotRecoveryOptions::new(1, 0.05, 3)).unwrap();
        assert!(empty.edge_set().is_empty() && empty.infidelity < 1e-12);
    }
}
