use alloc::string::String;

/// Errors raised by the library. Report-style operations never error; they
/// return their findings instead.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An exact search was asked for on more points than the configured limit.
    #[error("{what}: {size} points exceeds exact limit {limit}")]
    ExactLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    /// A construction would exceed its memory or enumeration budget.
    #[error("{what}: needs {needed}, budget {budget}")]
    Budget {
        what: &'static str,
        needed: u128,
        budget: u128,
    },
    /// A parameter is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Inputs have inconsistent shapes.
    #[error("shape mismatch: {0}")]
    Shape(String),
    /// A required collection is empty.
    #[error("empty input: {0}")]
    Empty(&'static str),
    /// A distortion target below the least achievable distortion.
    #[error("infeasible distortion target {target}, minimum is {minimum}")]
    Infeasible { target: f64, minimum: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}
