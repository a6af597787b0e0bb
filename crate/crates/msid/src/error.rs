//! Error taxonomy shared by all modules.

use thiserror::Error;

/// Errors produced by model validation, solvers, and estimators.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix argument has the wrong shape for the requested operation.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A matrix that must be finite contains NaN or infinite entries.
    #[error("non-finite entries in {0}")]
    NonFinite(String),

    /// A dynamics matrix is not stable (spectral radius at or above one).
    #[error("unstable dynamics: spectral radius {radius:.6} of {what} is >= 1")]
    Instability { what: String, radius: f64 },

    /// A covariance-role matrix is not symmetric positive (semi)definite.
    #[error("invalid covariance {what}: {reason}")]
    Covariance { what: String, reason: String },

    /// A matrix that must be inverted is numerically singular.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// An iterative solver exhausted its iteration cap.
    #[error("{solver} failed to converge within {cap} iterations")]
    Convergence { solver: String, cap: usize },

    /// The Riccati solution is not stabilizing: the closed-loop matrix
    /// A - KC has spectral radius materially above one.
    #[error("non-stabilizing Riccati solution: closed-loop spectral radius {radius:.12}")]
    NonStabilizing { radius: f64 },

    /// A scalar parameter is out of its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A time series is too short for the requested operation.
    #[error("series too short: {0}")]
    Length(String),

    /// The state dimension of an embedding would exceed the supported cap.
    #[error("state dimension {dim} exceeds the supported maximum {max}")]
    Size { dim: usize, max: usize },

    /// A regression design is rank deficient and cannot be solved as-is.
    #[error("ill-conditioned regression: {0} (consider a small positive ridge)")]
    Conditioning(String),

    /// A computed variance that must be positive is not.
    #[error("numerical degeneracy: {0}")]
    Degeneracy(String),

    /// A channel index is outside 1..=M.
    #[error("channel index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
