use thiserror::Error;

/// Errors raised by the library. Undecidable comparisons are not errors;
/// they surface as `Undetermined` values instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("exponent budget exceeded: {0}")]
    Budget(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("model is not certified convex: {0}")]
    NotConvex(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("empty input: {0}")]
    Empty(String),
}

pub type Result<T> = std::result::Result<T, Error>;
