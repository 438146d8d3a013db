use alloc::string::String;

/// Errors raised by the core engine.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("qubit index {qubit} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("gate acts twice on qubit {0}")]
    RepeatedQubit(usize),
    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("gate angle is not finite")]
    NonFiniteAngle,
    #[error("expected {expected} parameters, got {got}")]
    ParamCountMismatch { expected: usize, got: usize },
    #[error("register size mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("amplitude count {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("cannot normalize an all-zero vector")]
    ZeroVector,
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("expectation value {0} outside [-1, 1]")]
    ExpectationOutOfRange(f64),
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("non-finite value from {0}")]
    NonFinite(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{got} qubits exceeds the limit of {limit}")]
    TooManyQubits { got: usize, limit: usize },
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("only RY, RZ and RZZ gates may carry a parameter slot")]
    UnsupportedParameterizedGate,
    #[error("parameter slot {0} is never used (slots must be contiguous)")]
    SlotGap(usize),
    #[error("candidate pair set is empty")]
    EmptyPairSet,
    #[error("IQP loading failed: {0}")]
    IqpLoad(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
