//! Circuit JSON: `{"num_qubits": N, "ops": [{kind, qubits, param, slot, matrix}]}`.
//!
//! `param` is the stored angle of a rotation (overridden by the parameter
//! vector when `slot` is set). `matrix` lists the 16 entries of a U2Q gate
//! row-major as `[re, im]` pairs.

use anyhow::{bail, Context, Result};
use qload_core::{Circuit, GateKind, GateOp, Mat4, C64};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitJson {
    pub num_qubits: usize,
    pub ops: Vec<OpJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpJson {
    pub kind: String,
    pub qubits: Vec<usize>,
    pub param: Option<f64>,
    pub slot: Option<usize>,
    pub matrix: Option<Vec<[f64; 2]>>,
}

impl From<&Circuit> for CircuitJson {
    fn from(c: &Circuit) -> Self {
        let ops = c
            .ops()
            .iter()
            .map(|op| OpJson {
                kind: op.gate.kind().name().to_string(),
                qubits: op.gate.qubits().to_vec(),
                param: op.gate.angle(),
                slot: op.slot,
                matrix: op.gate.matrix4().map(|m| m.iter().flatten().map(|z| [z.re, z.im]).collect()),
            })
            .collect();
        CircuitJson { num_qubits: c.num_qubits(), ops }
    }
}

impl CircuitJson {
    pub fn to_circuit(&self) -> Result<Circuit> {
        let mut c = Circuit::new(self.num_qubits);
        for (i, op) in self.ops.iter().enumerate() {
            let gate = op.to_gate().with_context(|| format!("op {i}"))?;
            match op.slot {
                Some(s) => c.push_slot(gate, s),
                None => c.push(gate),
            }
            .with_context(|| format!("op {i}"))?;
        }
        Ok(c)
    }
}

impl OpJson {
    fn to_gate(&self) -> Result<GateOp> {
        let kind = GateKind::from_name(&self.kind).with_context(|| format!("unknown gate kind {:?}", self.kind))?;
        if self.qubits.len() != kind.arity() {
            bail!("{kind} takes {} qubit(s), got {}", kind.arity(), self.qubits.len());
        }
        let angle = || -> Result<f64> {
            match (self.param, self.slot) {
                (Some(a), _) => Ok(a),
                // A slotted rotation is fully determined by the parameter vector.
                (None, Some(_)) => Ok(0.0),
                (None, None) => bail!("{kind} needs a param or a slot"),
            }
        };
        if !kind.is_rotation() && (self.param.is_some() || self.slot.is_some()) {
            bail!("{kind} takes no parameter");
        }
        if (kind == GateKind::U2Q) != self.matrix.is_some() {
            bail!("matrix must be given exactly for U2Q gates");
        }
        let q = &self.qubits;
        Ok(match kind {
            GateKind::RY => GateOp::ry(q[0], angle()?),
            GateKind::RZ => GateOp::rz(q[0], angle()?),
            GateKind::RZZ => GateOp::rzz(q[0], q[1], angle()?),
            GateKind::CZ => GateOp::cz(q[0], q[1]),
            GateKind::H => GateOp::h(q[0]),
            GateKind::X => GateOp::x(q[0]),
            GateKind::U2Q => {
                let entries = self.matrix.as_deref().unwrap_or_default();
                if entries.len() != 16 {
                    bail!("U2Q matrix needs 16 entries, got {}", entries.len());
                }
                let mut m: Mat4 = [[C64::new(0.0, 0.0); 4]; 4];
                for (k, [re, im]) in entries.iter().enumerate() {
                    m[k / 4][k % 4] = C64::new(*re, *im);
                }
                GateOp::u2q(q[0], q[1], m)?
            }
        })
    }
}
