use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input data (wrong length, empty grid, ...).
    #[error("invalid input: {0}")]
    Input(String),

    #[error("eigenvalue search found {found} of {requested} roots below beta = {search_max}")]
    InsufficientRange {
        requested: usize,
        found: usize,
        search_max: f64,
    },

    #[error("quadrature did not converge after {refinements} refinements")]
    Quadrature { refinements: usize },

    #[error("derivative order {0} is not supported (max 3)")]
    UnsupportedDerivative(u8),

    /// The L1 approximation needs at least one past increment.
    #[error("fractional derivative needs at least two samples")]
    InsufficientHistory,

    #[error("nonlinear solve failed at step {step}: {reason}")]
    StepFailure { step: usize, reason: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}
