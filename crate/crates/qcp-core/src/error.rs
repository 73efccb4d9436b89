use thiserror::Error;

use crate::qsim::MAX_QUBITS;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("rotation angle must be finite, got {0}")]
    NonFiniteAngle(f64),

    #[error("state dimensions differ: {0} vs {1} amplitudes")]
    DimensionMismatch(usize, usize),

    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("targets {targets:?} invalid for a gate of arity {arity} (must be distinct, in range)")]
    BadTargets { arity: usize, targets: Vec<usize> },

    #[error("a register of {0} qubits exceeds the {MAX_QUBITS}-qubit limit")]
    RegisterTooLarge(usize),

    #[error("amplitude vector of length {0} is not a nonempty power of two")]
    BadAmplitudeCount(usize),

    #[error("state norm {0} is not unit")]
    DegenerateNorm(f64),

    #[error("cannot project qubit {qubit} onto zero-probability branch {bit}")]
    ImpossibleBranch { qubit: usize, bit: u8 },

    #[error("bit value must be 0 or 1, got {0}")]
    InvalidBit(u8),

    #[error("plaintext must contain at least one bit")]
    EmptyPlaintext,

    #[error("key string must contain at least one slot")]
    EmptyKeyString,

    #[error("key length {0} outside the supported range 1..=32")]
    BadKeyLength(usize),

    #[error("gate arities differ: {0} vs {1}")]
    ArityMismatch(usize, usize),

    #[error("{name} must be at least 1")]
    ZeroCount { name: &'static str },

    #[error("convergence tolerance must be positive, got {0}")]
    BadTolerance(f64),

    #[error("probability must lie in [0, 1], got {0}")]
    BadProbability(f64),

    #[error("invalid medium: {0}")]
    InvalidMedium(String),

    #[error("unsupported file version {0}")]
    UnsupportedVersion(u32),

    #[error("serialization failed: {0}")]
    Serialization(#[from] serde_json::Error),
}
