use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operands belong to different symplectic contexts")]
    ContextMismatch,

    #[error("invalid symplectic context: {0}")]
    InvalidContext(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },

    #[error("ghost variable `{name}` raised to power {exponent} at byte {offset}")]
    GhostExponent {
        name: String,
        exponent: u64,
        offset: usize,
    },

    #[error("expected a phase-space polynomial, found `{0}`")]
    NotPhaseSpace(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("denominator must be an even element with invertible body")]
    BadDenominator,

    #[error("constraint matrix is singular: first-class constraints present")]
    FirstClass,

    #[error("constraint algorithm did not close after {stages} stages; unresolved: {expr}")]
    MaxStagesExceeded { stages: usize, expr: String },

    #[error("expression denominator vanishes on the constraint surface")]
    SingularOnSurface,

    #[error("wavefunction does not decay at the grid boundary (|psi| = {0:e})")]
    BoundaryDecay(f64),

    #[error("coefficient matching needs a nonempty test basis")]
    EmptyBasis,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
