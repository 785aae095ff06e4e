use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("unphysical covariance matrix: {0}")]
    Unphysical(String),

    #[error("matrix is not symplectic (deviation {deviation:e})")]
    NotSymplectic { deviation: f64 },

    #[error("invalid mode partition: {0}")]
    InvalidPartition(String),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("state is not pure (det = {det}); use the numerical minimizer instead")]
    NotPure { det: f64 },

    #[error("invalid fit problem: {0}")]
    InvalidProblem(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
