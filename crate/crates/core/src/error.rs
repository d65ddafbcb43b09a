use thiserror::Error;

/// Errors raised by the geometry, dynamics and spectral routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration matrix is singular (|det| = {det:e})")]
    SingularConfiguration { det: f64 },

    #[error("configuration has non-positive orientation (det = {det:e})")]
    OrientationError { det: f64 },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid inertia model: {0}")]
    InvalidModel(String),

    #[error("Legendre map is degenerate: {0}")]
    DegenerateLegendre(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("invalid representation label: {0}")]
    InvalidLabel(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("shape mismatch: {0}")]
    ShapeError(String),

    #[error("eigenvalue count did not converge: {0}")]
    Unconverged(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
