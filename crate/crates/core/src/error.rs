use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HoroError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point lies outside the domain")]
    OutsideDomain,
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("{op} is not available for domain kind {kind}")]
    Unsupported { op: &'static str, kind: String },
    #[error("quadrature did not reach tolerance within {0} subintervals")]
    Quadrature(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("sequence does not converge: {0}")]
    NonConvergent(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, HoroError>;
