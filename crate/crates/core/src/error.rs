use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("matrix is not positive definite (min eigenvalue {0:e})")]
    NotPositiveDefinite(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid real operation: {0}")]
    InvalidOperation(String),

    #[error("invalid Gaussian state: {0}")]
    InvalidGaussian(String),

    #[error("Bloch vector norm {0} exceeds 1")]
    BlochNormExceeded(f64),

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("probability {0} outside (0, 1)")]
    ProbabilityOutOfRange(f64),

    #[error("mu = {0} outside the allowed range")]
    MuOutOfRange(f64),

    #[error("normalizer of random channel is numerically singular")]
    SingularNormalizer,

    #[error("covariance sum is singular (det <= 0)")]
    SingularSum,

    #[error("symplectic eigenvalue nu = {0} below 1")]
    NuBelowOne(f64),

    #[error("Fock truncation unreliable: thermal tail mass {0:e} beyond cutoff")]
    TruncationUnreliable(f64),

    #[error("Fock cutoff {0} too small (need at least 16)")]
    CutoffTooSmall(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
