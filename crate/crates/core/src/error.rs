use thiserror::Error;

/// Errors raised by body construction, function algebra and the check suites.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("invalid function: {0}")]
    InvalidFunction(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("empty intersection")]
    EmptyIntersection,
    #[error("union is not convex (hull excess {excess:e})")]
    NonConvexUnion { excess: f64 },
    #[error("divergent quantity: {0}")]
    Divergent(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;
