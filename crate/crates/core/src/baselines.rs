//! Reference loaders: bond-2 MPS disentangling layers, hardware-efficient
//! circuits and AQCE, plus the two-qubit gate accounting.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::circuit::{apply_circuit, Circuit};
use crate::error::{invalid, Error, Result};
use crate::gate::GateOp;
use crate::linalg::{complete_orthonormal, kron2, mat2_identity, mat4_identity, mat4_is_real, svd, CMatrix, Mat4, C64, ZERO};
use crate::math;
use crate::optim::{adam, adjoint_gradient, AdamOptions};
use crate::random::{substream, Stream};
use crate::state::{fidelity, StateVector};

/// Matrices with every entry's imaginary part below this count as real.
pub const REAL_TOL: f64 = 1e-12;

/// Loader families of the gate accounting table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    AqceComplex,
    AqceReal,
    MpsComplex,
    MpsReal,
    Hec,
    Aqer,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::AqceComplex => "aqce-complex",
            Method::AqceReal => "aqce-real",
            Method::MpsComplex => "mps-complex",
            Method::MpsReal => "mps-real",
            Method::Hec => "hec",
            Method::Aqer => "aqer",
        }
    }

    pub fn from_name(s: &str) -> Result<Self> {
        [Method::AqceComplex, Method::AqceReal, Method::MpsComplex, Method::MpsReal, Method::Hec, Method::Aqer]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| invalid(alloc::format!("unknown method {s:?}")))
    }
}

/// CNOT/CZ count for `k` units (AQCE unitaries, MPS layers, HEC layers or
/// AQER blocks) on `n` qubits.
pub fn gate_count_table(method: Method, n: usize, k: usize) -> Result<usize> {
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    let nm1 = n.saturating_sub(1);
    Ok(match method {
        Method::AqceComplex => 15 * k,
        Method::AqceReal => 10 * k,
        Method::MpsComplex => 3 * nm1 * k,
        Method::MpsReal => 2 * nm1 * k,
        Method::Hec => (n * k).div_ceil(2),
        Method::Aqer => k,
    })
}

fn all_real(mats: impl IntoIterator<Item = Mat4>) -> bool {
    mats.into_iter().all(|m| mat4_is_real(&m, REAL_TOL))
}

// ---------------------------------------------------------------- MPS

/// One disentangling layer: `G_i` acts on qubits `(i, i+1)`, `i = 0..N−1`.
/// The layer prepares its bond-2 MPS as `G_0 G_1 ⋯ G_{N−2} |0…0⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mps2Layer {
    pub unitaries: Vec<Mat4>,
}

impl Mps2Layer {
    pub fn num_qubits(&self) -> usize {
        self.unitaries.len() + 1
    }

    /// Gates of the preparation `G_0 ⋯ G_{N−2}`, in application order.
    pub fn loader_gates(&self) -> Result<Vec<GateOp>> {
        self.unitaries.iter().enumerate().rev().map(|(i, u)| GateOp::u2q(i, i + 1, *u)).collect()
    }

    /// `G_{N−2}† ⋯ G_0† · state`.
    pub fn disentangle(&self, state: &StateVector) -> Result<StateVector> {
        let mut s = state.clone();
        for g in self.loader_gates()?.iter().rev() {
            s.apply_in_place(&g.inverse())?;
        }
        Ok(s)
    }

    pub fn is_real(&self) -> bool {
        all_real(self.unitaries.iter().copied())
    }
}

/// Left-canonical bond-2 MPS by sequential truncated SVD. Tensor `i` is
/// stored as `a[(l·2 + s)·χ_r + r]`.
fn bond2_tensors(state: &StateVector) -> Result<Vec<(usize, usize, Vec<C64>)>> {
    let n = state.num_qubits();
    let amps = state.amplitudes();
    // rem[row][col]: row = (left bond, s_i), col = remaining qubits i+1..
    let mut chi_l = 1usize;
    let mut rem: Vec<C64> = amps.to_vec(); // row-major chi_l × 2^{n}
    let mut tensors = Vec::with_capacity(n);
    for site in 0..n - 1 {
        let cols = 1usize << (n - site - 1);
        let rows = chi_l * 2;
        // Reshape chi_l × (2·cols) into rows × cols with s_i the low bit.
        let m = CMatrix::from_fn(rows, cols, |r, c| {
            let (l, s) = (r / 2, r % 2);
            rem[l * 2 * cols + (s | (c << 1))]
        });
        // Hestenes SVD needs rows ≥ cols; decompose M† = V Σ U†.
        let (u, sv, vh): (CMatrix, Vec<f64>, CMatrix) = if rows >= cols {
            let d = svd(&m)?;
            (d.u, d.s, d.v.adjoint())
        } else {
            let d = svd(&m.adjoint())?;
            (d.v, d.s, d.u.adjoint())
        };
        let keep = sv.iter().take(2).filter(|&&x| x > 1e-14 * sv[0].max(1e-300)).count().max(1);
        let norm = math::sqrt(sv[..keep].iter().map(|x| x * x).sum());
        let mut a = vec![ZERO; rows * keep];
        for r in 0..rows {
            for k in 0..keep {
                a[r * keep + k] = u[(r, k)];
            }
        }
        tensors.push((chi_l, keep, a));
        let mut next = vec![ZERO; keep * cols];
        for k in 0..keep {
            for c in 0..cols {
                next[k * cols + c] = vh[(k, c)] * (sv[k] / norm);
            }
        }
        rem = next;
        chi_l = keep;
    }
    tensors.push((chi_l, 1, rem));
    Ok(tensors)
}

/// Extracts one bond-2 MPS layer and returns it with the disentangled
/// residual `G_{N−2}† ⋯ G_0† · state`.
pub fn mps_layer_extract(state: &StateVector) -> Result<(Mps2Layer, StateVector)> {
    let n = state.num_qubits();
    if n < 2 {
        return Err(invalid("MPS layers need at least two qubits"));
    }
    let tensors = bond2_tensors(state)?;
    let mut unitaries = vec![mat4_identity(); n - 1];
    // Gate on (i−1, i) maps |0⟩_{i−1}|r⟩_i to Σ A_i[l, s, r] |l⟩_{i−1}|s⟩_i.
    for site in 1..n {
        let (chi_l, chi_r, ref a) = tensors[site];
        let cols: Vec<Vec<C64>> = (0..chi_r)
            .map(|r| {
                let mut col = vec![ZERO; 4];
                for l in 0..chi_l {
                    for s in 0..2 {
                        col[2 * l + s] = a[(l * 2 + s) * chi_r + r];
                    }
                }
                col
            })
            .collect();
        let full = complete_orthonormal(&cols, 4);
        // Local inputs 0, 1 carry the bond; inputs 2, 3 get the completion.
        let mut g = [[ZERO; 4]; 4];
        for (c, col) in full.iter().enumerate() {
            for (r, x) in col.iter().enumerate() {
                g[r][c] = *x;
            }
        }
        unitaries[site - 1] = g;
    }
    // Site 0 is a 2 × χ isometry; absorb its completed unitary into G_0.
    let (_, chi0, ref a0) = tensors[0];
    let cols: Vec<Vec<C64>> = (0..chi0).map(|r| (0..2).map(|s| a0[s * chi0 + r]).collect()).collect();
    let full = complete_orthonormal(&cols, 2);
    let mut u0 = mat2_identity();
    for (c, col) in full.iter().enumerate() {
        for (r, x) in col.iter().enumerate() {
            u0[r][c] = *x;
        }
    }
    unitaries[0] = crate::linalg::mat4_mul(&kron2(&u0, &mat2_identity()), &unitaries[0]);
    let layer = Mps2Layer { unitaries };
    let residual = layer.disentangle(state)?;
    Ok((layer, residual))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineResult {
    pub circuit: Circuit,
    pub params: Vec<f64>,
    pub infidelity: f64,
    /// Two-qubit gate count per the accounting table.
    pub g: usize,
    /// Explicit two-qubit unitaries are all real.
    pub real: bool,
}

/// Stacks `layers` MPS layers; the loader applies the last-extracted layer
/// first.
pub fn mps_loader(target: &StateVector, layers: usize) -> Result<(Vec<Mps2Layer>, BaselineResult)> {
    if layers == 0 {
        return Err(invalid("MPS loader needs at least one layer"));
    }
    let n = target.num_qubits();
    let mut current = target.clone();
    let mut stack = Vec::with_capacity(layers);
    for _ in 0..layers {
        let (layer, residual) = mps_layer_extract(&current)?;
        stack.push(layer);
        current = residual;
    }
    let mut circuit = Circuit::new(n);
    for layer in stack.iter().rev() {
        for g in layer.loader_gates()? {
            circuit.push(g)?;
        }
    }
    let loaded = apply_circuit(&StateVector::zero(n), &circuit, &[])?;
    let real = stack.iter().all(Mps2Layer::is_real);
    let method = if real { Method::MpsReal } else { Method::MpsComplex };
    let res = BaselineResult {
        infidelity: 1.0 - fidelity(target, &loaded)?,
        g: gate_count_table(method, n, layers)?,
        real,
        circuit,
        params: Vec::new(),
    };
    Ok((stack, res))
}

// ---------------------------------------------------------------- HEC

/// CNOT pairs `(control, target)` of HEC layer `layer`.
pub fn hec_pairs(n: usize, layer: usize) -> Vec<(usize, usize)> {
    if layer % 2 == 0 {
        (0..n).step_by(2).map(|a| (a, (a + 1) % n)).collect()
    } else {
        (1..n).step_by(2).map(|a| (a, (a + 1) % n)).collect()
    }
}

/// Hardware-efficient circuit: per layer an RY column, an RZ column and a
/// CNOT layer realized as `H(t)·CZ·H(t)`. Slots `2N·i + q` (RY) and
/// `2N·i + N + q` (RZ).
pub fn hec_build(n: usize, layers: usize) -> Result<Circuit> {
    if n < 2 {
        return Err(invalid("HEC needs at least two qubits"));
    }
    if layers == 0 {
        return Err(invalid("HEC needs at least one layer"));
    }
    let mut c = Circuit::new(n);
    for i in 0..layers {
        for q in 0..n {
            c.push_slot(GateOp::ry(q, 0.0), 2 * n * i + q)?;
        }
        for q in 0..n {
            c.push_slot(GateOp::rz(q, 0.0), 2 * n * i + n + q)?;
        }
        for (a, b) in hec_pairs(n, i) {
            c.push(GateOp::h(b))?;
            c.push(GateOp::cz(a, b))?;
            c.push(GateOp::h(b))?;
        }
    }
    Ok(c)
}

/// Adam training from `Uniform[0, 2π]` angles drawn from `seed`.
pub fn hec_train(target: &StateVector, circuit: &Circuit, seed: u64, opts: &AdamOptions) -> Result<BaselineResult> {
    let p = circuit.num_params()?;
    let mut rng = substream(seed, Stream::Init);
    let x0: Vec<f64> = (0..p).map(|_| rng.random::<f64>() * math::TAU).collect();
    let res = adam(
        |x, g| {
            let (loss, grad) = adjoint_gradient(target, circuit, x)?;
            g.copy_from_slice(&grad);
            Ok(loss)
        },
        &x0,
        opts,
    )?;
    let n = circuit.num_qubits();
    let cz = circuit.count_kind(crate::gate::GateKind::CZ);
    let loaded = apply_circuit(&StateVector::zero(n), circuit, &res.best_params)?;
    Ok(BaselineResult {
        infidelity: 1.0 - fidelity(target, &loaded)?,
        g: cz,
        real: false,
        circuit: circuit.clone(),
        params: res.best_params,
    })
}

// ---------------------------------------------------------------- AQCE

#[derive(Debug, Clone, PartialEq)]
pub struct AqceState {
    /// `(pair, G_m)`, with `G_1` applied first to `|0…0⟩`.
    pub unitaries: Vec<((usize, usize), Mat4)>,
    /// `(Tr D)²` after every unit update.
    pub fidelity_trace: Vec<f64>,
    /// Updates skipped because the environment SVD failed.
    pub skipped: usize,
    /// Full-circuit fidelity re-simulated after every update; filled only
    /// with `AqceOptions::verify`.
    pub verified_fidelity: Vec<f64>,
}

/// Initial product state `|ψ₀⟩` of AQCE.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AqceInit {
    Zero,
    /// Closed-form best product approximation of the target, prepared by
    /// fixed single-qubit rotations ahead of the two-qubit units.
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AqceOptions {
    pub units_per_expansion: usize,
    pub sweeps_per_expansion: usize,
    pub init: AqceInit,
    /// Re-simulate the whole circuit after every update (slow; for checks).
    pub verify: bool,
}

impl Default for AqceOptions {
    fn default() -> Self {
        Self { units_per_expansion: 5, sweeps_per_expansion: 200, init: AqceInit::Product, verify: false }
    }
}

/// Fixed rotations `RY(γ_q)` then `RZ(β_q)` preparing the best product
/// approximation of `target`.
pub fn product_prefix(target: &StateVector) -> Result<Vec<GateOp>> {
    let mut gates = Vec::with_capacity(2 * target.num_qubits());
    for q in 0..target.num_qubits() {
        let p = crate::entropy::product_params(&crate::state::rdm1(target, q)?);
        gates.push(GateOp::ry(q, p.gamma));
        gates.push(GateOp::rz(q, p.beta));
    }
    Ok(gates)
}

/// `F[x][y] = Σ_rest b[x, rest]·conj(a[y, rest])` on the pair `(p, q)` with
/// local index `2·bit(p) + bit(q)`.
pub fn environment(b: &[C64], a: &[C64], p: usize, q: usize) -> Mat4 {
    let (bp, bq) = (1usize << p, 1usize << q);
    let (lo, hi) = (p.min(q), p.max(q));
    let mut f = [[ZERO; 4]; 4];
    let quarter = b.len() >> 2;
    for k in 0..quarter {
        let base = crate::kernel::insert_zero_bit(crate::kernel::insert_zero_bit(k, lo), hi);
        let idx = [base, base | bq, base | bp, base | bp | bq];
        let bv = [b[idx[0]], b[idx[1]], b[idx[2]], b[idx[3]]];
        let av = [a[idx[0]].conj(), a[idx[1]].conj(), a[idx[2]].conj(), a[idx[3]].conj()];
        for x in 0..4 {
            for y in 0..4 {
                f[x][y] += bv[x] * av[y];
            }
        }
    }
    f
}

/// Best unitary for an environment: `G = X·Y` from `F = X·D·Y`; returns
/// `(G, Tr D)`.
pub fn environment_update(f: &Mat4) -> Result<(Mat4, f64)> {
    let d = svd(&CMatrix::from_mat4(f))?;
    let g = d.u.matmul(&d.v.adjoint()).to_mat4();
    Ok((g, d.s.iter().sum()))
}

fn apply_unit(amps: &mut StateVector, unit: &((usize, usize), Mat4), adjoint: bool) -> Result<()> {
    let ((p, q), m) = *unit;
    let g = GateOp::u2q(p, q, m)?;
    amps.apply_in_place(&if adjoint { g.inverse() } else { g })
}

/// Ties within this margin keep the lexicographically smaller pair.
const AQCE_TIE_TOL: f64 = 1e-12;

/// Initial state and target, for re-simulating the circuit after updates.
type VerifyCtx<'a> = Option<(&'a StateVector, &'a StateVector)>;

fn aqce_update(
    target_side: &StateVector,
    init_side: &StateVector,
    pairs: &[(usize, usize)],
    state: &mut AqceState,
    m: usize,
    verify: VerifyCtx<'_>,
) -> Result<()> {
    let mut best: Option<((usize, usize), Mat4, f64)> = None;
    for &(p, q) in pairs {
        let f = environment(target_side.amplitudes(), init_side.amplitudes(), p, q);
        match environment_update(&f) {
            Ok((g, tr)) => {
                if best.as_ref().is_none_or(|b| tr > b.2 + AQCE_TIE_TOL) {
                    best = Some(((p, q), g, tr));
                }
            }
            Err(Error::NoConvergence { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    match best {
        Some((pair, g, tr)) => {
            state.unitaries[m] = (pair, g);
            state.fidelity_trace.push(tr * tr);
            if let Some((psi0, target)) = verify {
                let mut x = psi0.clone();
                for u in &state.unitaries {
                    apply_unit(&mut x, u, false)?;
                }
                state.verified_fidelity.push(fidelity(target, &x)?);
            }
        }
        None => state.skipped += 1,
    }
    Ok(())
}

/// AQCE with `total_units` two-qubit unitaries.
pub fn aqce_run(target: &StateVector, total_units: usize, opts: &AqceOptions) -> Result<(AqceState, BaselineResult)> {
    let n = target.num_qubits();
    if n < 2 {
        return Err(invalid("AQCE needs at least two qubits"));
    }
    if total_units == 0 || opts.units_per_expansion == 0 {
        return Err(invalid("AQCE needs at least one unit per expansion"));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|p| (p + 1..n).map(move |q| (p, q))).collect();
    let prefix = match opts.init {
        AqceInit::Zero => Vec::new(),
        AqceInit::Product => product_prefix(target)?,
    };
    let mut zero = StateVector::zero(n);
    for g in &prefix {
        zero.apply_in_place(g)?;
    }
    let mut st = AqceState { unitaries: Vec::new(), fidelity_trace: Vec::new(), skipped: 0, verified_fidelity: Vec::new() };
    let verify = if opts.verify { Some((&zero, target)) } else { None };
    while st.unitaries.len() < total_units {
        let add = opts.units_per_expansion.min(total_units - st.unitaries.len());
        st.unitaries.extend(core::iter::repeat_n(((0, 1), mat4_identity()), add));
        let mm = st.unitaries.len();
        for _ in 0..opts.sweeps_per_expansion {
            // Forward: a = G_{m−1}⋯G_1|0⟩, b = G_{m+1}†⋯G_M†|v⟩.
            let mut b = target.clone();
            for u in st.unitaries[1..].iter().rev() {
                apply_unit(&mut b, u, true)?;
            }
            let mut a = zero.clone();
            for m in 0..mm {
                aqce_update(&b, &a, &pairs, &mut st, m, verify)?;
                apply_unit(&mut a, &st.unitaries[m], false)?;
                if m + 1 < mm {
                    apply_unit(&mut b, &st.unitaries[m + 1], false)?;
                }
            }
            // Backward.
            let mut a = zero.clone();
            for u in &st.unitaries[..mm - 1] {
                apply_unit(&mut a, u, false)?;
            }
            let mut b = target.clone();
            for m in (0..mm).rev() {
                aqce_update(&b, &a, &pairs, &mut st, m, verify)?;
                apply_unit(&mut b, &st.unitaries[m], true)?;
                if m > 0 {
                    apply_unit(&mut a, &st.unitaries[m - 1], true)?;
                }
            }
        }
    }
    let mut circuit = Circuit::new(n);
    for g in prefix {
        circuit.push(g)?;
    }
    for &((p, q), m) in &st.unitaries {
        circuit.push(GateOp::u2q(p, q, m)?)?;
    }
    let loaded = apply_circuit(&StateVector::zero(n), &circuit, &[])?;
    let real = all_real(st.unitaries.iter().map(|u| u.1));
    let method = if real { Method::AqceReal } else { Method::AqceComplex };
    let res = BaselineResult {
        infidelity: 1.0 - fidelity(target, &loaded)?,
        g: gate_count_table(method, n, total_units)?,
        real,
        circuit,
        params: Vec::new(),
    };
    Ok((st, res))
}

/// Fidelity `|⟨b|G|a⟩|²` of a candidate unitary, for optimality probes.
pub fn unit_fidelity(b: &StateVector, a: &StateVector, pair: (usize, usize), g: &Mat4) -> Result<f64> {
    let mut x = a.clone();
    x.apply_in_place(&GateOp::u2q(pair.0, pair.1, *g)?)?;
    Ok(b.inner(&x)?.norm_sqr())
}
