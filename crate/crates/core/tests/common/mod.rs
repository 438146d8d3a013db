#![allow(dead_code)]

use nalgebra::DMatrix;
use qload_core::linalg::C64;
use qload_core::random::{random_state, random_unitary4, substream, Stream};
use qload_core::{Circuit, GateOp, StateVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    substream(seed, Stream::Dataset)
}

pub fn state(n: usize, seed: u64) -> StateVector {
    random_state(n, &mut rng(seed))
}

/// Dense `2^N × 2^N` matrix of a gate, built entry by entry from its local
/// matrix.
pub fn dense_gate(gate: &GateOp, n: usize) -> DMatrix<C64> {
    let dim = 1usize << n;
    let local = gate.local_matrix();
    let qs = gate.qubits().to_vec();
    let bit = |x: usize, q: usize| (x >> q) & 1;
    let mask: usize = qs.iter().map(|q| 1usize << q).sum();
    DMatrix::from_fn(dim, dim, |r, c| {
        if r & !mask != c & !mask {
            return C64::new(0.0, 0.0);
        }
        let (lr, lc) = if qs.len() == 1 {
            (bit(r, qs[0]), bit(c, qs[0]))
        } else {
            (2 * bit(r, qs[0]) + bit(r, qs[1]), 2 * bit(c, qs[0]) + bit(c, qs[1]))
        };
        local[lr][lc]
    })
}

pub fn to_column(s: &StateVector) -> DMatrix<C64> {
    DMatrix::from_column_slice(s.dim(), 1, s.amplitudes())
}

fn two_distinct<R: Rng>(n: usize, rng: &mut R) -> (usize, usize) {
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

/// One random gate of the given kind index (see `GateKind::ALL`).
pub fn random_gate<R: Rng>(kind: usize, n: usize, rng: &mut R) -> GateOp {
    let q = rng.random_range(0..n);
    let angle = rng.random_range(-7.0..7.0);
    match kind {
        0 => GateOp::ry(q, angle),
        1 => GateOp::rz(q, angle),
        2 => {
            let (a, b) = two_distinct(n, rng);
            GateOp::rzz(a, b, angle)
        }
        3 => {
            let (a, b) = two_distinct(n, rng);
            GateOp::cz(a, b)
        }
        4 => GateOp::h(q),
        5 => GateOp::x(q),
        _ => {
            let (a, b) = two_distinct(n, rng);
            GateOp::u2q(a, b, random_unitary4(rng)).unwrap()
        }
    }
}

/// Random parameterized circuit with `p` slots on `n ≥ 2` qubits, mixing all
/// three rotation kinds with fixed H and CZ gates. Returns the circuit and
/// random parameters.
pub fn random_circuit<R: Rng>(n: usize, p: usize, rng: &mut R) -> (Circuit, Vec<f64>) {
    let mut c = Circuit::new(n);
    for slot in 0..p {
        if rng.random_bool(0.2) {
            let (a, b) = two_distinct(n, rng);
            c.push(GateOp::cz(a, b)).unwrap();
        }
        if rng.random_bool(0.1) {
            c.push(GateOp::h(rng.random_range(0..n))).unwrap();
        }
        let gate = match rng.random_range(0..3) {
            0 => GateOp::ry(rng.random_range(0..n), 0.0),
            1 => GateOp::rz(rng.random_range(0..n), 0.0),
            _ => {
                let (a, b) = two_distinct(n, rng);
                GateOp::rzz(a, b, 0.0)
            }
        };
        c.push_slot(gate, slot).unwrap();
    }
    let params = (0..p).map(|_| rng.random_range(-3.2..3.2)).collect();
    (c, params)
}

/// Random product state as per-qubit factors.
pub fn random_product<R: Rng>(n: usize, rng: &mut R) -> StateVector {
    let f: Vec<[C64; 2]> = (0..n)
        .map(|_| {
            let s = random_state(1, rng);
            [s.amplitudes()[0], s.amplitudes()[1]]
        })
        .collect();
    StateVector::product(&f).unwrap()
}
