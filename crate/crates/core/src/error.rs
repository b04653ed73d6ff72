use thiserror::Error;

/// Errors raised by the algebra, the state registry and the invariant code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variable count {0} outside supported range 1..=16")]
    VariableCount(usize),

    #[error("variable index {index} out of range for {n} variables")]
    VariableIndex { index: usize, n: usize },

    #[error("mismatched variable counts: {0} vs {1}")]
    MismatchedCount(usize, usize),

    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("division by zero")]
    DivisionByZero,

    #[error("zero state")]
    ZeroState,

    #[error("exact backend cannot take square roots; use degree-aware normalization")]
    ExactNormalize,

    #[error("{kind} series about a nonzero constant term has irrational coefficients on the exact backend")]
    InexactSeries { kind: &'static str },

    #[error("invariant degree {0} is odd")]
    OddDegree(u32),

    #[error("invalid qubit subset: {0}")]
    InvalidSubset(String),

    #[error("expected a {expected}-qubit state, got {got}")]
    QubitCount { expected: usize, got: usize },

    #[error("unsupported parameter for {state}: {reason}")]
    UnsupportedState { state: String, reason: String },

    #[error("{0} requires the floating-point backend")]
    FloatOnly(String),

    #[error("sweep needs at least 2 points, got {0}")]
    DegenerateGrid(usize),

    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
