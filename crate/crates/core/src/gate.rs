//! Gate operations. Rotations follow `R_σ(θ) = e^{−iθσ/2}` and
//! `RZZ(θ) = e^{−iθ Z⊗Z/2}`.

use alloc::boxed::Box;
use core::fmt;

use crate::error::{Error, Result};
use crate::kernel;
use crate::linalg::{self, c64, Mat4, C64, ONE, ZERO};
use crate::math;

/// Tolerance on `‖U†U − I‖_max` for explicit two-qubit matrices.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    RY,
    RZ,
    RZZ,
    CZ,
    H,
    X,
    U2Q,
}

impl GateKind {
    pub const ALL: [GateKind; 7] =
        [GateKind::RY, GateKind::RZ, GateKind::RZZ, GateKind::CZ, GateKind::H, GateKind::X, GateKind::U2Q];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::RY => "RY",
            GateKind::RZ => "RZ",
            GateKind::RZZ => "RZZ",
            GateKind::CZ => "CZ",
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::U2Q => "U2Q",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::RY | GateKind::RZ | GateKind::H | GateKind::X => 1,
            GateKind::RZZ | GateKind::CZ | GateKind::U2Q => 2,
        }
    }

    /// Kinds whose angle may be bound to a parameter slot.
    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::RY | GateKind::RZ | GateKind::RZZ)
    }

    pub fn is_two_qubit(self) -> bool {
        self.arity() == 2
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A single gate application.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    Ry { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    Rzz { qubits: [usize; 2], angle: f64 },
    Cz { qubits: [usize; 2] },
    H { qubit: usize },
    X { qubit: usize },
    /// Explicit 4×4 unitary; local index `2·bit(qubits[0]) + bit(qubits[1])`.
    U2q { qubits: [usize; 2], matrix: Box<Mat4> },
}

impl GateOp {
    pub fn ry(qubit: usize, angle: f64) -> Self {
        GateOp::Ry { qubit, angle }
    }

    pub fn rz(qubit: usize, angle: f64) -> Self {
        GateOp::Rz { qubit, angle }
    }

    pub fn rzz(q0: usize, q1: usize, angle: f64) -> Self {
        GateOp::Rzz { qubits: [q0, q1], angle }
    }

    pub fn cz(q0: usize, q1: usize) -> Self {
        GateOp::Cz { qubits: [q0, q1] }
    }

    pub fn h(qubit: usize) -> Self {
        GateOp::H { qubit }
    }

    pub fn x(qubit: usize) -> Self {
        GateOp::X { qubit }
    }

    /// Explicit two-qubit unitary; fails if the matrix is not unitary.
    pub fn u2q(q0: usize, q1: usize, matrix: Mat4) -> Result<Self> {
        let deviation = linalg::unitarity_deviation4(&matrix);
        if !(deviation <= UNITARY_TOL) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(GateOp::U2q { qubits: [q0, q1], matrix: Box::new(matrix) })
    }

    pub fn kind(&self) -> GateKind {
        match self {
            GateOp::Ry { .. } => GateKind::RY,
            GateOp::Rz { .. } => GateKind::RZ,
            GateOp::Rzz { .. } => GateKind::RZZ,
            GateOp::Cz { .. } => GateKind::CZ,
            GateOp::H { .. } => GateKind::H,
            GateOp::X { .. } => GateKind::X,
            GateOp::U2q { .. } => GateKind::U2Q,
        }
    }

    pub fn qubits(&self) -> &[usize] {
        match self {
            GateOp::Ry { qubit, .. } | GateOp::Rz { qubit, .. } | GateOp::H { qubit } | GateOp::X { qubit } => {
                core::slice::from_ref(qubit)
            }
            GateOp::Rzz { qubits, .. } | GateOp::Cz { qubits } | GateOp::U2q { qubits, .. } => qubits,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            GateOp::Ry { angle, .. } | GateOp::Rz { angle, .. } | GateOp::Rzz { angle, .. } => Some(*angle),
            _ => None,
        }
    }

    pub fn matrix4(&self) -> Option<&Mat4> {
        match self {
            GateOp::U2q { matrix, .. } => Some(matrix),
            _ => None,
        }
    }

    /// Same gate with its angle replaced; non-rotations are returned as is.
    pub fn with_angle(&self, theta: f64) -> Self {
        match self {
            GateOp::Ry { qubit, .. } => GateOp::Ry { qubit: *qubit, angle: theta },
            GateOp::Rz { qubit, .. } => GateOp::Rz { qubit: *qubit, angle: theta },
            GateOp::Rzz { qubits, .. } => GateOp::Rzz { qubits: *qubits, angle: theta },
            other => other.clone(),
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            GateOp::U2q { qubits, matrix } => {
                GateOp::U2q { qubits: *qubits, matrix: Box::new(linalg::mat4_adjoint(matrix)) }
            }
            other => match other.angle() {
                Some(a) => other.with_angle(-a),
                None => other.clone(),
            },
        }
    }

    /// Element-wise complex conjugate of the unitary.
    pub fn conjugate(&self) -> Self {
        match self {
            GateOp::Rz { qubit, angle } => GateOp::Rz { qubit: *qubit, angle: -angle },
            GateOp::Rzz { qubits, angle } => GateOp::Rzz { qubits: *qubits, angle: -angle },
            GateOp::U2q { qubits, matrix } => GateOp::U2q { qubits: *qubits, matrix: Box::new(linalg::mat4_conj(matrix)) },
            other => other.clone(),
        }
    }

    /// Same gate on relabelled qubits.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Self {
        let mut g = self.clone();
        match &mut g {
            GateOp::Ry { qubit, .. } | GateOp::Rz { qubit, .. } | GateOp::H { qubit } | GateOp::X { qubit } => {
                *qubit = f(*qubit)
            }
            GateOp::Rzz { qubits, .. } | GateOp::Cz { qubits } | GateOp::U2q { qubits, .. } => {
                *qubits = [f(qubits[0]), f(qubits[1])]
            }
        }
        g
    }

    /// Checks qubit range, distinctness, finite angle and unitarity.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        for &q in self.qubits() {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
            }
        }
        if let [a, b] = self.qubits() {
            if a == b {
                return Err(Error::RepeatedQubit(*a));
            }
        }
        if let Some(a) = self.angle() {
            if !a.is_finite() {
                return Err(Error::NonFiniteAngle);
            }
        }
        if let Some(m) = self.matrix4() {
            let deviation = linalg::unitarity_deviation4(m);
            if !(deviation <= UNITARY_TOL) {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(())
    }

    /// Local matrix: 2×2 embedded top-left for one-qubit gates, else 4×4.
    pub fn local_matrix(&self) -> Mat4 {
        let embed = |m: [[C64; 2]; 2]| {
            let mut out = [[ZERO; 4]; 4];
            for r in 0..2 {
                for c in 0..2 {
                    out[r][c] = m[r][c];
                }
            }
            out
        };
        let h = math::FRAC_1_SQRT_2;
        match self {
            GateOp::Ry { angle, .. } => embed(kernel::ry_matrix(*angle)),
            GateOp::Rz { angle, .. } => embed(kernel::rz_matrix(*angle)),
            GateOp::H { .. } => embed([[c64(h, 0.0), c64(h, 0.0)], [c64(h, 0.0), c64(-h, 0.0)]]),
            GateOp::X { .. } => embed([[ZERO, ONE], [ONE, ZERO]]),
            GateOp::Rzz { angle, .. } => {
                let z = kernel::rz_matrix(*angle);
                // diag(e^{−iθ/2}, e^{iθ/2}, e^{iθ/2}, e^{−iθ/2})
                let (e, o) = (z[0][0], z[1][1]);
                let mut m = [[ZERO; 4]; 4];
                m[0][0] = e;
                m[1][1] = o;
                m[2][2] = o;
                m[3][3] = e;
                m
            }
            GateOp::Cz { .. } => {
                let mut m = linalg::mat4_identity();
                m[3][3] = -ONE;
                m
            }
            GateOp::U2q { matrix, .. } => **matrix,
        }
    }

    /// Applies the gate to raw amplitudes without validation.
    pub(crate) fn apply_raw(&self, amps: &mut [C64]) {
        match self {
            GateOp::Ry { qubit, angle } => kernel::apply_ry(amps, *qubit, *angle),
            GateOp::Rz { qubit, angle } => kernel::apply_rz(amps, *qubit, *angle),
            GateOp::Rzz { qubits, angle } => kernel::apply_rzz(amps, qubits[0], qubits[1], *angle),
            GateOp::Cz { qubits } => kernel::apply_cz(amps, qubits[0], qubits[1]),
            GateOp::H { qubit } => kernel::apply_h(amps, *qubit),
            GateOp::X { qubit } => kernel::apply_x(amps, *qubit),
            GateOp::U2q { qubits, matrix } => kernel::apply_mat4(amps, qubits[0], qubits[1], matrix),
        }
    }
}

