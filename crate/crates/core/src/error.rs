use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation requested at (or numerically indistinguishable from) a pole.
    #[error("pole: {0}")]
    Pole(String),

    /// Parameter combination the implementation deliberately does not cover.
    #[error("unsupported case: {0}")]
    Unsupported(String),

    /// Quadrature failed to meet the requested tolerance.
    #[error("quadrature failure ({message}); error estimate {estimate:e}")]
    Quadrature { estimate: f64, message: String },

    /// A certified series truncation could not be established.
    #[error("truncation failure: {0}")]
    Truncation(String),

    /// Series or sum does not converge for the given parameters.
    #[error("divergent: {0}")]
    Divergent(String),

    /// Operation requires a primitive character.
    #[error("character mod {0} is not primitive")]
    NotPrimitive(u64),

    /// Malformed or inconsistent input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A table- or cap-limited computation was asked to exceed its limit.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
