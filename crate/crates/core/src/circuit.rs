//! Parameterized circuits. A rotation may be bound to a parameter slot; slots
//! form the contiguous range `0..P` and may be shared by several ops.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gate::{GateKind, GateOp};
use crate::state::StateVector;

/// One circuit entry. When `slot` is set the gate's stored angle is replaced
/// by `params[slot]` at bind time.
#[derive(Debug, Clone, PartialEq)]
pub struct Op {
    pub gate: GateOp,
    pub slot: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    ops: Vec<Op>,
    num_slots: usize,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self { num_qubits, ops: Vec::new(), num_slots: 0 }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Appends a fixed gate.
    pub fn push(&mut self, gate: GateOp) -> Result<()> {
        gate.validate(self.num_qubits)?;
        self.ops.push(Op { gate, slot: None });
        Ok(())
    }

    /// Appends a rotation whose angle is read from `params[slot]`.
    pub fn push_slot(&mut self, gate: GateOp, slot: usize) -> Result<()> {
        if !gate.kind().is_rotation() {
            return Err(Error::UnsupportedParameterizedGate);
        }
        gate.validate(self.num_qubits)?;
        self.num_slots = self.num_slots.max(slot + 1);
        self.ops.push(Op { gate, slot: Some(slot) });
        Ok(())
    }

    /// Appends all ops of `other`, shifting its slots by `slot_offset`.
    pub fn extend_from(&mut self, other: &Circuit, slot_offset: usize) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch { left: self.num_qubits, right: other.num_qubits });
        }
        for op in &other.ops {
            match op.slot {
                Some(s) => self.push_slot(op.gate.clone(), s + slot_offset)?,
                None => self.push(op.gate.clone())?,
            }
        }
        Ok(())
    }

    /// Parameter count `P`; errors if some slot below the maximum is unused.
    pub fn num_params(&self) -> Result<usize> {
        let mut used = alloc::vec![false; self.num_slots];
        for s in self.ops.iter().filter_map(|o| o.slot) {
            used[s] = true;
        }
        match used.iter().position(|u| !u) {
            Some(gap) => Err(Error::SlotGap(gap)),
            None => Ok(self.num_slots),
        }
    }

    /// Parameter vector holding the angles currently stored in the ops.
    pub fn stored_params(&self) -> Result<Vec<f64>> {
        let mut p = alloc::vec![0.0; self.num_params()?];
        for op in &self.ops {
            if let (Some(s), Some(a)) = (op.slot, op.gate.angle()) {
                p[s] = a;
            }
        }
        Ok(p)
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.ops.iter().filter(|o| o.gate.kind() == kind).count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.ops.iter().filter(|o| o.gate.kind().is_two_qubit()).count()
    }

    pub(crate) fn check_params(&self, params: &[f64]) -> Result<()> {
        let expected = self.num_params()?;
        if params.len() != expected {
            return Err(Error::ParamCountMismatch { expected, got: params.len() });
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFiniteAngle);
        }
        Ok(())
    }

    /// Gate `i` with its slot bound.
    #[inline]
    pub fn bound_gate(&self, i: usize, params: &[f64]) -> GateOp {
        let op = &self.ops[i];
        match op.slot {
            Some(s) => op.gate.with_angle(params[s]),
            None => op.gate.clone(),
        }
    }

    /// Circuit with every slot replaced by its bound angle.
    pub fn bind(&self, params: &[f64]) -> Result<Circuit> {
        self.check_params(params)?;
        let ops = (0..self.ops.len()).map(|i| Op { gate: self.bound_gate(i, params), slot: None }).collect();
        Ok(Circuit { num_qubits: self.num_qubits, ops, num_slots: 0 })
    }

    pub fn apply_in_place(&self, state: &mut StateVector, params: &[f64]) -> Result<()> {
        self.check_register(state)?;
        self.check_params(params)?;
        let amps = state.amps_mut();
        for i in 0..self.ops.len() {
            self.bound_gate(i, params).apply_raw(amps);
        }
        Ok(())
    }

    /// Applies `U(θ)†`: inverse gates in reverse order.
    pub fn apply_adjoint_in_place(&self, state: &mut StateVector, params: &[f64]) -> Result<()> {
        self.check_register(state)?;
        self.check_params(params)?;
        let amps = state.amps_mut();
        for i in (0..self.ops.len()).rev() {
            self.bound_gate(i, params).inverse().apply_raw(amps);
        }
        Ok(())
    }

    fn check_register(&self, state: &StateVector) -> Result<()> {
        if state.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch { left: self.num_qubits, right: state.num_qubits() });
        }
        Ok(())
    }
}

/// `U(θ)·state`.
pub fn apply_circuit(state: &StateVector, circuit: &Circuit, params: &[f64]) -> Result<StateVector> {
    let mut out = state.clone();
    circuit.apply_in_place(&mut out, params)?;
    Ok(out)
}

/// `U(θ)†·state`.
pub fn apply_circuit_adjoint(state: &StateVector, circuit: &Circuit, params: &[f64]) -> Result<StateVector> {
    let mut out = state.clone();
    circuit.apply_adjoint_in_place(&mut out, params)?;
    Ok(out)
}
