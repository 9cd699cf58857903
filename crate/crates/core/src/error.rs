use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: domain has complex dimension {expected}, point has {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point is not interior to the domain (defining function value {value:.3e})")]
    NotInterior { value: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite integrand value at node {node:?}")]
    NonFinite { node: Vec<f64> },

    #[error("series tail bound {bound:.3e} cannot reach tolerance {tol:.3e} within {terms} terms")]
    TailNotCertified { bound: f64, tol: f64, terms: usize },

    #[error("divergent integral: {0}")]
    Divergent(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),
}

pub type Result<T> = std::result::Result<T, Error>;
