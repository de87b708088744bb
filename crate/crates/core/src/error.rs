use thiserror::Error;

/// Errors raised by the exact and numerical layers of the core crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("malformed rational `{0}`")]
    MalformedRational(String),

    #[error("cannot integrate an arity-0 polynomial over the time simplex")]
    EmptySimplex,

    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index tuple must contain at least one multi-index")]
    EmptyTuple,

    #[error("malformed index tuple `{input}`: {reason}")]
    MalformedTuple { input: String, reason: String },

    #[error(
        "coefficient budget exceeded at j = {j}: |alpha| + 2j = {weight} > budget {budget}"
    )]
    CapacityExceeded { j: usize, weight: u32, budget: u32 },

    #[error("invariant order must be at least 2, got {0}")]
    OrderTooSmall(u32),

    #[error("derivative order {order} along one axis exceeds the stencil limit {max}")]
    DerivativeOrder { order: u32, max: u32 },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("invalid potential: {0}")]
    Potential(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
