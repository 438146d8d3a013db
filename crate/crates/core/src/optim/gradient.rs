//! Gradients of `L(θ) = 1 − |⟨v|U(θ)|0…0⟩|²`.
//!
//! Every parameterized gate is `e^{−iθσ/2}` with `σ` a Pauli string, so with
//! `φ_j` the state after gate `j` and `λ_j = U_{>j}†|v⟩`:
//! `∂L/∂θ_j = Re(i·a*·c_j)` where `a = ⟨v|ψ⟩` and `c_j = ⟨λ_j|σ_j|φ_j⟩`.
//! Slots shared by several gates accumulate their contributions.

use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::GateOp;
use crate::linalg::{c64, C64, ZERO};
use crate::math;
use crate::state::{inner_raw, shot_probability, StateVector};

fn check_target(target: &StateVector, circuit: &Circuit) -> Result<()> {
    if target.num_qubits() != circuit.num_qubits() {
        return Err(Error::DimensionMismatch { left: target.num_qubits(), right: circuit.num_qubits() });
    }
    Ok(())
}

/// `1 − |⟨target|U(θ)|0…0⟩|²`.
pub fn infidelity_loss(target: &StateVector, circuit: &Circuit, params: &[f64]) -> Result<f64> {
    check_target(target, circuit)?;
    let mut psi = StateVector::zero(circuit.num_qubits());
    circuit.apply_in_place(&mut psi, params)?;
    Ok(1.0 - inner_raw(target.amplitudes(), psi.amplitudes()).norm_sqr())
}

/// `⟨λ|σ|φ⟩` for the generator Pauli of a rotation gate.
fn generator_matrix_element(gate: &GateOp, lambda: &[C64], phi: &[C64]) -> C64 {
    match gate {
        GateOp::Rz { qubit, .. } => {
            let mut acc = ZERO;
            for (i, (l, p)) in lambda.iter().zip(phi).enumerate() {
                let t = l.conj() * p;
                if (i >> qubit) & 1 == 0 {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
            acc
        }
        GateOp::Rzz { qubits, .. } => {
            let mut acc = ZERO;
            for (i, (l, p)) in lambda.iter().zip(phi).enumerate() {
                let t = l.conj() * p;
                if ((i >> qubits[0]) ^ (i >> qubits[1])) & 1 == 0 {
                    acc += t;
                } else {
                    acc -= t;
                }
            }
            acc
        }
        GateOp::Ry { qubit, .. } => {
            // (Yφ)_0 = −i φ_1, (Yφ)_1 = i φ_0
            let bit = 1usize << qubit;
            let mut acc = ZERO;
            for (lc, pc) in lambda.chunks_exact(2 * bit).zip(phi.chunks_exact(2 * bit)) {
                let (l0, l1) = lc.split_at(bit);
                let (p0, p1) = pc.split_at(bit);
                for k in 0..bit {
                    acc += l1[k].conj() * p0[k] - l0[k].conj() * p1[k];
                }
            }
            acc * c64(0.0, 1.0)
        }
        _ => unreachable!("only rotations carry slots"),
    }
}

/// Reverse sweep shared by the exact engines. Calls `visit(op, slot, c_j)` for
/// every parameterized op, last to first, and returns the overlap `a`.
fn reverse_sweep(
    target: &StateVector,
    circuit: &Circuit,
    params: &[f64],
    mut visit: impl FnMut(usize, usize, C64),
) -> Result<C64> {
    check_target(target, circuit)?;
    circuit.check_params(params)?;
    let gates: Vec<GateOp> = (0..circuit.len()).map(|i| circuit.bound_gate(i, params)).collect();
    let mut phi = StateVector::zero(circuit.num_qubits()).into_amplitudes();
    for g in &gates {
        g.apply_raw(&mut phi);
    }
    let a = inner_raw(target.amplitudes(), &phi);
    let mut lambda = target.amplitudes().to_vec();
    for (j, g) in gates.iter().enumerate().rev() {
        if let Some(slot) = circuit.ops()[j].slot {
            visit(j, slot, generator_matrix_element(g, &lambda, &phi));
        }
        if j > 0 {
            let inv = g.inverse();
            inv.apply_raw(&mut phi);
            inv.apply_raw(&mut lambda);
        }
    }
    Ok(a)
}

/// Exact loss and gradient in one forward and one reverse pass.
pub fn adjoint_gradient(target: &StateVector, circuit: &Circuit, params: &[f64]) -> Result<(f64, Vec<f64>)> {
    let mut grad = vec![0.0; params.len()];
    let mut contrib: Vec<(usize, C64)> = Vec::new();
    let a = reverse_sweep(target, circuit, params, |_, slot, c| contrib.push((slot, c)))?;
    for (slot, c) in contrib {
        grad[slot] += (c64(0.0, 1.0) * a.conj() * c).re;
    }
    Ok((1.0 - a.norm_sqr(), grad))
}

/// Exact fidelities at `θ_j ± π/2` for every parameterized op, obtained from
/// one reverse sweep: `a_± = (a ∓ i c_j)/√2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedFidelities {
    pub fidelity: f64,
    /// `(op index, slot, f(θ_j + π/2), f(θ_j − π/2))`, op order.
    pub shifts: Vec<(usize, usize, f64, f64)>,
}

pub fn shifted_fidelities(target: &StateVector, circuit: &Circuit, params: &[f64]) -> Result<ShiftedFidelities> {
    let mut raw: Vec<(usize, usize, C64)> = Vec::new();
    let a = reverse_sweep(target, circuit, params, |j, slot, c| raw.push((j, slot, c)))?;
    let r = math::FRAC_1_SQRT_2;
    let ic = |c: C64| c64(0.0, 1.0) * c;
    let mut shifts: Vec<_> = raw
        .into_iter()
        .map(|(j, slot, c)| {
            let plus = ((a - ic(c)) * r).norm_sqr();
            let minus = ((a + ic(c)) * r).norm_sqr();
            (j, slot, plus.min(1.0), minus.min(1.0))
        })
        .collect();
    shifts.reverse();
    Ok(ShiftedFidelities { fidelity: a.norm_sqr().min(1.0), shifts })
}

/// Parameter-shift gradient by explicit re-simulation of each shifted
/// circuit. With `shots`, every fidelity (including the reported loss) is a
/// shot estimate of the projector onto the target.
pub fn paramshift_gradient<R: RngCore + ?Sized>(
    target: &StateVector,
    circuit: &Circuit,
    params: &[f64],
    shots: Option<u64>,
    rng: &mut R,
) -> Result<(f64, Vec<f64>)> {
    check_target(target, circuit)?;
    circuit.check_params(params)?;
    let n = circuit.num_qubits();
    let fid = |shift_op: Option<(usize, f64)>| -> f64 {
        let mut psi = StateVector::zero(n).into_amplitudes();
        for i in 0..circuit.len() {
            let mut g = circuit.bound_gate(i, params);
            if let Some((j, d)) = shift_op {
                if i == j {
                    g = g.with_angle(g.angle().expect("slotted op is a rotation") + d);
                }
            }
            g.apply_raw(&mut psi);
        }
        inner_raw(target.amplitudes(), &psi).norm_sqr().min(1.0)
    };
    let mut measure = |f: f64| -> Result<f64> {
        match shots {
            Some(m) => shot_probability(f, m, rng),
            None => Ok(f),
        }
    };
    let loss = 1.0 - measure(fid(None))?;
    let mut grad = vec![0.0; params.len()];
    for (j, op) in circuit.ops().iter().enumerate() {
        if let Some(slot) = op.slot {
            let fp = measure(fid(Some((j, math::FRAC_PI_2))))?;
            let fm = measure(fid(Some((j, -math::FRAC_PI_2))))?;
            grad[slot] -= 0.5 * (fp - fm);
        }
    }
    Ok((loss, grad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_state;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_ry_against_one() {
        let mut c = Circuit::new(1);
        c.push_slot(GateOp::ry(0, 0.0), 0).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        let (loss, g) = adjoint_gradient(&one, &c, &[math::FRAC_PI_2]).unwrap();
        assert!((loss - 0.5).abs() < 1e-15);
        // d/dθ [1 − sin²(θ/2)] = −sin(θ)/2
        assert!((g[0] + 0.5).abs() < 1e-15);
        let zero = StateVector::zero(1);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (_, g) = paramshift_gradient(&zero, &c, &[0.0], None, &mut rng).unwrap();
        assert!(g[0].abs() < 1e-15);
    }

    #[test]
    fn global_minimum_has_zero_gradient() {
        let mut c = Circuit::new(2);
        c.push_slot(GateOp::ry(0, 0.0), 0).unwrap();
        c.push_slot(GateOp::rzz(0, 1, 0.0), 1).unwrap();
        c.push_slot(GateOp::rz(1, 0.0), 2).unwrap();
        let p = [0.7, -1.1, 0.4];
        let target = crate::circuit::apply_circuit(&StateVector::zero(2), &c, &p).unwrap();
        let (loss, g) = adjoint_gradient(&target, &c, &p).unwrap();
        assert!(loss.abs() < 1e-14 && g.iter().all(|x| x.abs() < 1e-10));
    }

    #[test]
    fn fast_and_naive_shifts_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut c = Circuit::new(3);
        for s in 0..9 {
            let q = s % 3;
            let g = match s % 3 {
                0 => GateOp::ry(q, 0.0),
                1 => GateOp::rz(q, 0.0),
                _ => GateOp::rzz(q, (q + 1) % 3, 0.0),
            };
            c.push_slot(g, s).unwrap();
            c.push(GateOp::h((q + 2) % 3)).unwrap();
        }
        // shared slot
        c.push_slot(GateOp::ry(1, 0.0), 4).unwrap();
        let p: Vec<f64> = (0..9).map(|_| rng.random::<f64>() * 6.0).collect();
        let target = random_state(3, &mut rng);
        let (l1, g1) = adjoint_gradient(&target, &c, &p).unwrap();
        let (l2, g2) = paramshift_gradient(&target, &c, &p, None, &mut rng).unwrap();
        assert!((l1 - l2).abs() < 1e-14);
        for (a, b) in g1.iter().zip(&g2) {
            assert!((a - b).abs() < 1e-12);
        }
        let sf = shifted_fidelities(&target, &c, &p).unwrap();
        let mut g3 = vec![0.0; 9];
        for &(_, slot, fp, fm) in &sf.shifts {
            g3[slot] -= 0.5 * (fp - fm);
        }
        for (a, b) in g1.iter().zip(&g3) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
