//! Target-state generators and downstream observables.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

use crate::error::{invalid, Error, Result};
use crate::gate::GateOp;
use crate::linalg::{c64, symmetric_lowest_eigenpair, symmetric_tridiagonal_eigen, C64, ZERO};
use crate::math;
use crate::random::{gaussian_c64, substream, Stream};
use crate::state::{fidelity, pauli_expectation, Pauli, StateVector};

pub const MAX_SITES: usize = 20;

/// Symmetric transverse field that breaks the ferromagnetic near-degeneracy.
pub const PINNING_FIELD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Chain(usize),
    Grid { rows: usize, cols: usize },
}

impl Topology {
    pub fn num_sites(&self) -> usize {
        match *self {
            Topology::Chain(n) => n,
            Topology::Grid { rows, cols } => rows * cols,
        }
    }

    /// Nearest-neighbour bonds with open boundaries; site `r·cols + c`.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        match *self {
            Topology::Chain(n) => (1..n).map(|i| (i - 1, i)).collect(),
            Topology::Grid { rows, cols } => {
                let mut b = Vec::new();
                for r in 0..rows {
                    for c in 0..cols {
                        let i = r * cols + c;
                        if c + 1 < cols {
                            b.push((i, i + 1));
                        }
                        if r + 1 < rows {
                            b.push((i, i + cols));
                        }
                    }
                }
                b
            }
        }
    }
}

/// `Tfim`: `H = −J Σ Z_i Z_j − g Σ X_i`.
/// `Xxz`: `H = Σ [J_xy (X_i X_j + Y_i Y_j) + J_z Z_i Z_j]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    Tfim { j: f64, g: f64 },
    Xxz { jxy: f64, jz: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinHamiltonianSpec {
    pub topology: Topology,
    pub model: Model,
}

impl SpinHamiltonianSpec {
    pub fn tfim_chain(n: usize, j: f64, g: f64) -> Self {
        Self { topology: Topology::Chain(n), model: Model::Tfim { j, g } }
    }

    pub fn xxz_grid(rows: usize, cols: usize, jxy: f64, jz: f64) -> Self {
        Self { topology: Topology::Grid { rows, cols }, model: Model::Xxz { jxy, jz } }
    }

    pub fn num_sites(&self) -> usize {
        self.topology.num_sites()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_sites();
        if n == 0 {
            return Err(invalid("Hamiltonian needs at least one site"));
        }
        if n > MAX_SITES {
            return Err(Error::TooManyQubits { got: n, limit: MAX_SITES });
        }
        let finite = match self.model {
            Model::Tfim { j, g } => j.is_finite() && g.is_finite(),
            Model::Xxz { jxy, jz } => jxy.is_finite() && jz.is_finite(),
        };
        if !finite {
            return Err(Error::NonFinite("Hamiltonian coupling"));
        }
        Ok(())
    }
}

/// Matrix-free real Hamiltonian: a diagonal plus bit-flip terms.
struct SpinOperator {
    n: usize,
    diag: Vec<f64>,
    /// `(mask, coefficient, parity-conditioned)`: single flips always act;
    /// pair flips act only on anti-aligned spins.
    flips: Vec<(usize, f64, Option<(usize, usize)>)>,
}

impl SpinOperator {
    fn new(spec: &SpinHamiltonianSpec) -> Self {
        let n = spec.num_sites();
        let bonds = spec.topology.bonds();
        let dim = 1usize << n;
        let (zz, flips): (f64, Vec<_>) = match spec.model {
            Model::Tfim { j, g } => {
                let g = g + PINNING_FIELD;
                (-j, (0..n).map(|q| (1usize << q, -g, None)).collect())
            }
            Model::Xxz { jxy, jz } => {
                // XX + YY = 2(σ⁺σ⁻ + σ⁻σ⁺) swaps anti-aligned spins.
                (jz, bonds.iter().map(|&(a, b)| ((1usize << a) | (1usize << b), 2.0 * jxy, Some((a, b)))).collect())
            }
        };
        let diag = (0..dim)
            .map(|i| {
                bonds
                    .iter()
                    .map(|&(a, b)| if ((i >> a) ^ (i >> b)) & 1 == 0 { zz } else { -zz })
                    .sum()
            })
            .collect();
        Self { n, diag, flips }
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (yi, (d, xi)) in y.iter_mut().zip(self.diag.iter().zip(x)) {
            *yi = d * xi;
        }
        for &(mask, coef, cond) in &self.flips {
            match cond {
                None => {
                    for (i, xi) in x.iter().enumerate() {
                        y[i ^ mask] += coef * xi;
                    }
                }
                Some((a, b)) => {
                    for (i, xi) in x.iter().enumerate() {
                        if ((i >> a) ^ (i >> b)) & 1 == 1 {
                            y[i ^ mask] += coef * xi;
                        }
                    }
                }
            }
        }
    }

    fn dense(&self) -> Vec<f64> {
        let dim = 1usize << self.n;
        let mut h = vec![0.0; dim * dim];
        let mut e = vec![0.0; dim];
        let mut col = vec![0.0; dim];
        for c in 0..dim {
            e[c] = 1.0;
            self.apply(&e, &mut col);
            for r in 0..dim {
                h[r * dim + c] = col[r];
            }
            e[c] = 0.0;
        }
        h
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub state: StateVector,
    pub energy: f64,
    /// `‖Hv − Ev‖`.
    pub residual: f64,
    /// Lanczos steps taken (0 for the dense path).
    pub iterations: usize,
}

pub const LANCZOS_MAX_ITER: usize = 500;
pub const LANCZOS_RESIDUAL_TOL: f64 = 1e-9;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    math::sqrt(dot(a, a))
}

/// Fixes the sign so the largest-magnitude amplitude is positive.
fn canonical_sign(v: &mut [f64]) {
    let (mut best, mut at) = (0.0, 0);
    for (i, x) in v.iter().enumerate() {
        if x.abs() > best + 1e-12 {
            best = x.abs();
            at = i;
        }
    }
    if v[at] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn real_state(n: usize, v: &[f64]) -> Result<StateVector> {
    StateVector::from_amplitudes_normalized(v.iter().map(|&x| c64(x, 0.0)).collect()).inspect(|s| {
        debug_assert_eq!(s.num_qubits(), n);
    })
}

/// Lowest eigenpair by restarted Lanczos with full reorthogonalization.
pub fn ground_state(spec: &SpinHamiltonianSpec) -> Result<GroundState> {
    spec.validate()?;
    let op = SpinOperator::new(spec);
    let n = op.n;
    let dim = 1usize << n;
    // Krylov basis length, capped so the basis stays within ~256 MiB.
    let m = (80usize).min((1usize << 25) / dim).max(16).min(dim);
    let mut rng = substream(0x5eed, Stream::Dataset);
    let mut start: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
    let s = norm(&start);
    start.iter_mut().for_each(|x| *x /= s);

    let mut w = vec![0.0; dim];
    let mut total = 0;
    loop {
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
        let (mut alpha, mut beta) = (Vec::with_capacity(m), Vec::with_capacity(m));
        basis.push(start.clone());
        for k in 0..m {
            op.apply(&basis[k], &mut w);
            total += 1;
            let a = dot(&w, &basis[k]);
            alpha.push(a);
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(&w, b);
                    w.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
                }
            }
            let bn = norm(&w);
            if k + 1 == m || bn < 1e-12 {
                break;
            }
            beta.push(bn);
            basis.push(w.iter().map(|x| x / bn).collect());
        }
        let (_, evecs) = symmetric_tridiagonal_eigen(&alpha, &beta)?;
        let k = alpha.len();
        let mut x = vec![0.0; dim];
        for (j, b) in basis.iter().enumerate().take(k) {
            let c = evecs[j * k];
            x.iter_mut().zip(b).for_each(|(xi, bi)| *xi += c * bi);
        }
        let s = norm(&x);
        x.iter_mut().for_each(|v| *v /= s);
        op.apply(&x, &mut w);
        let energy = dot(&x, &w);
        let residual = math::sqrt(w.iter().zip(&x).map(|(hx, xi)| { let d = hx - energy * xi; d * d }).sum());
        // An early breakdown means the Krylov space is invariant.
        if residual < LANCZOS_RESIDUAL_TOL || k < m {
            canonical_sign(&mut x);
            return Ok(GroundState { state: real_state(n, &x)?, energy, residual, iterations: total });
        }
        if total >= LANCZOS_MAX_ITER {
            return Err(Error::NoConvergence { what: "Lanczos", iterations: total });
        }
        start = x;
    }
}

/// Dense diagonalization, for cross-checks at small sizes.
pub fn dense_ground_state(spec: &SpinHamiltonianSpec) -> Result<GroundState> {
    spec.validate()?;
    let op = SpinOperator::new(spec);
    if op.n > 12 {
        return Err(Error::TooManyQubits { got: op.n, limit: 12 });
    }
    let dim = 1usize << op.n;
    let (energy, mut x) = symmetric_lowest_eigenpair(&op.dense(), dim)?;
    canonical_sign(&mut x);
    let mut w = vec![0.0; dim];
    op.apply(&x, &mut w);
    let residual = math::sqrt(w.iter().zip(&x).map(|(hx, xi)| { let d = hx - energy * xi; d * d }).sum());
    Ok(GroundState { state: real_state(op.n, &x)?, energy, residual, iterations: 0 })
}

/// `(|0…0⟩ + |1…1⟩)/√2`.
pub fn ghz(n: usize) -> Result<StateVector> {
    if n == 0 {
        return Err(invalid("GHZ needs at least one qubit"));
    }
    let mut a = vec![ZERO; 1usize << n];
    a[0] = c64(math::FRAC_1_SQRT_2, 0.0);
    a[(1usize << n) - 1] = c64(math::FRAC_1_SQRT_2, 0.0);
    StateVector::from_amplitudes(a)
}

/// Gates of `R_σ(θ)` for `σ ∈ {X, Y, Z}`; `RX = H·RZ·H`.
fn pauli_rotation(axis: u8, q: usize, theta: f64) -> Vec<GateOp> {
    match axis {
        0 => vec![GateOp::h(q), GateOp::rz(q, theta), GateOp::h(q)],
        1 => vec![GateOp::ry(q, theta)],
        _ => vec![GateOp::rz(q, theta)],
    }
}

fn random_rotation<R: RngCore + ?Sized>(q: usize, rng: &mut R) -> Vec<GateOp> {
    let axis = rng.random_range(0..3u8);
    let theta = rng.random::<f64>() * math::TAU;
    pauli_rotation(axis, q, theta)
}

/// Random-circuit state: `W` CZ gates on uniformly drawn distinct pairs
/// (pairs may repeat across gates) and `3W` random Pauli rotations on
/// uniform qubits, shuffled and applied to `|0…0⟩`.
pub fn random_circuit_state(n: usize, w: usize, seed: u64) -> Result<StateVector> {
    if n < 2 {
        return Err(invalid("random circuit states need at least two qubits"));
    }
    let mut rng = substream(seed, Stream::Dataset);
    let mut ops: Vec<Vec<GateOp>> = Vec::with_capacity(4 * w);
    for _ in 0..w {
        let p = rng.random_range(0..n);
        let mut q = rng.random_range(0..n - 1);
        if q >= p {
            q += 1;
        }
        ops.push(vec![GateOp::cz(p, q)]);
    }
    for _ in 0..3 * w {
        let q = rng.random_range(0..n);
        ops.push(random_rotation(q, &mut rng));
    }
    ops.shuffle(&mut rng);
    let mut s = StateVector::zero(n);
    for g in ops.iter().flatten() {
        s.apply_in_place(g)?;
    }
    Ok(s)
}

/// CZ tiling `layer mod 4` of a grid: even/odd horizontal, even/odd vertical.
pub fn grid_tiling(rows: usize, cols: usize, layer: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let parity = layer % 2;
    let horizontal = layer % 4 < 2;
    for r in 0..rows {
        for c in 0..cols {
            let i = r * cols + c;
            if horizontal && c % 2 == parity && c + 1 < cols {
                out.push((i, i + 1));
            }
            if !horizontal && r % 2 == parity && r + 1 < rows {
                out.push((i, i + cols));
            }
        }
    }
    out
}

/// Shallow 2D random circuit: per layer, a random rotation on every site
/// followed by the CZ tiling of that layer.
pub fn random_circuit_state_2d(rows: usize, cols: usize, depth: usize, seed: u64) -> Result<StateVector> {
    let n = rows * cols;
    if n == 0 || n > MAX_SITES {
        return Err(invalid("grid must have between 1 and 20 sites"));
    }
    let mut rng = substream(seed, Stream::Dataset);
    let mut s = StateVector::zero(n);
    for layer in 0..depth {
        for q in 0..n {
            for g in random_rotation(q, &mut rng) {
                s.apply_in_place(&g)?;
            }
        }
        for (a, b) in grid_tiling(rows, cols, layer) {
            s.apply_in_place(&GateOp::cz(a, b))?;
        }
    }
    Ok(s)
}

/// IQP instance: edges with their ZZ angles.
#[derive(Debug, Clone, PartialEq)]
pub struct IqpSpec {
    pub num_qubits: usize,
    pub edges: Vec<((usize, usize), f64)>,
}

impl IqpSpec {
    pub fn new(num_qubits: usize, edges: Vec<((usize, usize), f64)>) -> Result<Self> {
        let mut seen: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &((a, b), w) in &edges {
            if a >= num_qubits || b >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: a.max(b), num_qubits });
            }
            if a == b {
                return Err(Error::RepeatedQubit(a));
            }
            if !w.is_finite() {
                return Err(Error::NonFiniteAngle);
            }
            let key = (a.min(b), a.max(b));
            if seen.contains(&key) {
                return Err(invalid("duplicate IQP edge"));
            }
            seen.push(key);
        }
        Ok(Self { num_qubits, edges })
    }

    pub fn degree(&self, q: usize) -> usize {
        self.edges.iter().filter(|((a, b), _)| *a == q || *b == q).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_qubits).map(|q| self.degree(q)).max().unwrap_or(0)
    }

    /// Normalized edge keys `(min, max)`, sorted.
    pub fn edge_set(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self.edges.iter().map(|&((a, b), _)| (a.min(b), a.max(b))).collect();
        e.sort_unstable();
        e
    }
}

/// `H^⊗N · Π e^{−iω ZZ/2} · H^⊗N |0…0⟩`.
pub fn iqp_state(spec: &IqpSpec) -> Result<StateVector> {
    let n = spec.num_qubits;
    let mut s = StateVector::zero(n);
    for q in 0..n {
        s.apply_in_place(&GateOp::h(q))?;
    }
    for &((a, b), w) in &spec.edges {
        s.apply_in_place(&GateOp::rzz(a, b, w))?;
    }
    for q in 0..n {
        s.apply_in_place(&GateOp::h(q))?;
    }
    Ok(s)
}

/// Random open-boundary MPS with bond dimension `chi`, contracted and
/// normalized.
pub fn random_mps_state<R: RngCore + ?Sized>(n: usize, chi: usize, rng: &mut R) -> Result<StateVector> {
    if n == 0 || chi == 0 {
        return Err(invalid("MPS needs at least one site and bond dimension one"));
    }
    // psi[(prefix index) * bond + b]
    let mut bond = 1usize;
    let mut psi = vec![c64(1.0, 0.0)];
    for site in 0..n {
        let next = if site + 1 == n { 1 } else { chi.min(1usize << (site + 1)).min(1usize << (n - site - 1)) };
        let tensor: Vec<C64> = (0..bond * 2 * next).map(|_| gaussian_c64(rng)).collect();
        let prefix = psi.len() / bond;
        let mut out = vec![ZERO; prefix * 2 * next];
        for p in 0..prefix {
            for l in 0..bond {
                let a = psi[p * bond + l];
                for s in 0..2 {
                    for r in 0..next {
                        // site `site` becomes bit `site` of the basis index
                        out[((s << site) | p) * next + r] += a * tensor[(l * 2 + s) * next + r];
                    }
                }
            }
        }
        psi = out;
        bond = next;
    }
    StateVector::from_amplitudes_normalized(psi)
}

/// Zero-pads `v` to the next power of two and normalizes.
pub fn amplitude_encode(v: &[C64]) -> Result<StateVector> {
    if v.is_empty() {
        return Err(Error::ZeroVector);
    }
    let mut a = v.to_vec();
    a.resize(v.len().next_power_of_two().max(2), ZERO);
    StateVector::from_amplitudes_normalized(a)
}

pub fn amplitude_encode_real(v: &[f64]) -> Result<StateVector> {
    amplitude_encode(&v.iter().map(|&x| c64(x, 0.0)).collect::<Vec<_>>())
}

/// Packs `2^{N+1}` reals as amplitudes `v_j + i·v_{j+2^N}`.
pub fn compact_encode(v: &[f64]) -> Result<StateVector> {
    if v.len() < 4 || !v.len().is_power_of_two() {
        return Err(invalid("compact encoding needs 2^(N+1) reals with N ≥ 1"));
    }
    let half = v.len() / 2;
    StateVector::from_amplitudes_normalized((0..half).map(|j| c64(v[j], v[j + half])).collect())
}

/// Zero-pads a row-major `rows × cols` image into the top-left corner of a
/// `out_rows × out_cols` canvas, flattens it and normalizes to unit norm.
pub fn pad_flatten_normalize(
    image: &[f64],
    rows: usize,
    cols: usize,
    out_rows: usize,
    out_cols: usize,
) -> Result<Vec<f64>> {
    if image.len() != rows * cols || rows > out_rows || cols > out_cols {
        return Err(invalid("image does not fit the target canvas"));
    }
    let mut out = vec![0.0; out_rows * out_cols];
    for r in 0..rows {
        out[r * out_cols..r * out_cols + cols].copy_from_slice(&image[r * cols..(r + 1) * cols]);
    }
    let s = norm(&out);
    if s == 0.0 || !s.is_finite() {
        return Err(Error::ZeroVector);
    }
    out.iter_mut().for_each(|x| *x /= s);
    Ok(out)
}

/// `(1/N) Σ_n ⟨X_n⟩`.
pub fn magnetization(state: &StateVector) -> Result<f64> {
    let n = state.num_qubits();
    let mut m = 0.0;
    for q in 0..n {
        m += pauli_expectation(state, Pauli::X, q)?;
    }
    Ok(m / n as f64)
}

/// Row-major Gram matrix `K_ij = |⟨ψ_i|ψ_j⟩|²`.
pub fn kernel_matrix(states: &[StateVector]) -> Result<Vec<f64>> {
    let m = states.len();
    let mut k = vec![0.0; m * m];
    for i in 0..m {
        k[i * m + i] = 1.0;
        for j in i + 1..m {
            let f = fidelity(&states[i], &states[j])?;
            k[i * m + j] = f;
            k[j * m + i] = f;
        }
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::total_entropy;

    #[test]
    fn single_site_tfim_is_plus() {
        let gs = ground_state(&SpinHamiltonianSpec::tfim_chain(1, 1.0, 0.7)).unwrap();
        assert!((gs.energy + 0.7).abs() < 1e-9);
        assert!((magnetization(&gs.state).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn two_site_tfim_energy() {
        let gs = ground_state(&SpinHamiltonianSpec::tfim_chain(2, 1.0, 1.0)).unwrap();
        assert!((gs.energy + math::sqrt(5.0)).abs() < 1e-8);
        let d = dense_ground_state(&SpinHamiltonianSpec::tfim_chain(2, 1.0, 1.0)).unwrap();
        // The pinning field shifts the energy at the 1e-10 level.
        assert!((d.energy + math::sqrt(5.0)).abs() < 1e-9);
    }

    #[test]
    fn lanczos_matches_dense() {
        for spec in [
            SpinHamiltonianSpec::tfim_chain(8, 1.0, 1.0),
            SpinHamiltonianSpec::tfim_chain(7, 1.2, 1.0),
            SpinHamiltonianSpec::xxz_grid(2, 3, 1.0, 1.0),
            SpinHamiltonianSpec::xxz_grid(2, 2, 1.0, 0.5),
        ] {
            let l = ground_state(&spec).unwrap();
            let d = dense_ground_state(&spec).unwrap();
            assert!((l.energy - d.energy).abs() < 1e-8, "{spec:?}: {} vs {}", l.energy, d.energy);
            assert!(fidelity(&l.state, &d.state).unwrap() > 1.0 - 1e-10);
            assert!(l.residual < 1e-8);
        }
    }

    #[test]
    fn xxz_dimer_is_singlet() {
        // Two sites at J_xy = J_z = 1: singlet energy −3.
        let spec = SpinHamiltonianSpec { topology: Topology::Chain(2), model: Model::Xxz { jxy: 1.0, jz: 1.0 } };
        let gs = ground_state(&spec).unwrap();
        assert!((gs.energy + 3.0).abs() < 1e-9);
    }

    #[test]
    fn ghz_and_circuit_generators() {
        assert!((total_entropy(&ghz(6).unwrap()).unwrap() - 6.0).abs() < 1e-12);
        assert_eq!(random_circuit_state(5, 0, 3).unwrap(), StateVector::zero(5));
        let a = random_circuit_state(6, 12, 9).unwrap();
        assert_eq!(a, random_circuit_state(6, 12, 9).unwrap());
        assert_ne!(a, random_circuit_state(6, 12, 10).unwrap());
    }

    #[test]
    fn tilings_cover_grid() {
        let mut all: Vec<_> = (0..4).flat_map(|l| grid_tiling(4, 4, l)).collect();
        all.sort_unstable();
        let mut bonds = Topology::Grid { rows: 4, cols: 4 }.bonds();
        bonds.sort_unstable();
        assert_eq!(all, bonds);
        assert_eq!(grid_tiling(1, 2, 0), vec![(0, 1)]);
        assert!(grid_tiling(1, 2, 1).is_empty());
    }

    #[test]
    fn mps_generator_has_bounded_schmidt_rank() {
        let mut rng = substream(4, Stream::Dataset);
        let s = random_mps_state(6, 2, &mut rng).unwrap();
        // Cut after 3 sites: reshape to 8×8 and check rank ≤ 2.
        let a = crate::linalg::CMatrix::from_fn(8, 8, |r, c| s.amplitudes()[r | (c << 3)]);
        let sv = crate::linalg::svd(&a).unwrap().s;
        assert!(sv[2] < 1e-12 && sv[1] > 1e-6);
    }

    #[test]
    fn encodings() {
        let s = amplitude_encode_real(&[1.0, 1.0]).unwrap();
        assert!((s.amplitudes()[1].re - math::FRAC_1_SQRT_2).abs() < 1e-15);
        let s = amplitude_encode_real(&[3.0, 0.0, 4.0]).unwrap();
        assert_eq!(s.num_qubits(), 2);
        let c = compact_encode(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((c.amplitudes()[0] - c64(math::FRAC_1_SQRT_2, math::FRAC_1_SQRT_2)).norm() < 1e-15);
        assert_eq!(amplitude_encode_real(&[0.0, 0.0]), Err(Error::ZeroVector));
        let img = pad_flatten_normalize(&[1.0; 4], 2, 2, 4, 4).unwrap();
        assert_eq!(img.len(), 16);
        assert!((img[0] - 0.5).abs() < 1e-15 && img[2] == 0.0 && (img[5] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn kernel_is_gram() {
        let e0 = StateVector::basis(1, 0).unwrap();
        let e1 = StateVector::basis(1, 1).unwrap();
        assert_eq!(kernel_matrix(&[e0.clone(), e1]).unwrap(), vec![1.0, 0.0, 0.0, 1.0]);
        assert_eq!(kernel_matrix(&[e0.clone(), e0]).unwrap(), vec![1.0; 4]);
    }

    #[test]
    fn iqp_single_edge_entropy() {
        let spec = IqpSpec::new(3, vec![((0, 2), math::FRAC_PI_4)]).unwrap();
        let s = iqp_state(&spec).unwrap();
        let r = crate::entropy::entanglement_measure(&s).unwrap();
        // The IQP state itself is H-conjugated; entropies are basis-independent.
        let expect = -math::log2((1.0 + 0.5) / 2.0);
        assert!((r.per_qubit[0] - expect).abs() < 1e-12 && r.per_qubit[1].abs() < 1e-12);
        let empty = iqp_state(&IqpSpec::new(3, vec![]).unwrap()).unwrap();
        assert!(fidelity(&empty, &StateVector::zero(3)).unwrap() > 1.0 - 1e-14);
    }
}
