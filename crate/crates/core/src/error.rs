use thiserror::Error;

/// Errors raised by the exact-arithmetic, lattice and decomposition routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("gcd of zero and zero is undefined")]
    GcdOfZeros,

    #[error("operation `{0}` requires a nonzero input")]
    ZeroInput(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("amplitude at index {index} is not in Q(i); state is not lattice-representable")]
    NotLatticeRepresentable { index: usize },

    #[error(
        "vector is not a Barnes Wall lattice member (first violation at x = {index}: {entry})"
    )]
    NotMember { index: usize, entry: String },

    #[error("overlap with the target state is zero; relative error is infinite")]
    ZeroOverlap,

    #[error("post-selection onto a zero-probability outcome (qubit {qubit}, outcome {outcome})")]
    ZeroProbability { qubit: usize, outcome: u8 },

    #[error("unsupported qubit count {n}: {reason}")]
    UnsupportedQubitCount { n: usize, reason: &'static str },

    #[error("qubit index {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("family of states is linearly dependent")]
    DependentFamily,

    #[error("target lies outside the span of the generators (residual {residual:e})")]
    OutsideSpan { residual: f64 },

    #[error("resource budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
