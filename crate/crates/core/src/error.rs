use thiserror::Error;

use crate::tropical_horn::GenericityReport;

#[derive(Debug, Error)]
pub enum HornError {
    #[error("rank must be a positive integer")]
    ZeroRank,

    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    #[error("malformed network: {0}")]
    MalformedNetwork(String),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("index set invalid: {0}")]
    InvalidIndexSet(String),

    #[error("phase on edge {edge} has modulus {modulus}, expected 1")]
    NonUnitPhase { edge: usize, modulus: f64 },

    #[error("matrix is not Hermitian (max asymmetry {asymmetry:e})")]
    NonHermitian { asymmetry: f64 },

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("interlacing is not strict: {0}")]
    NonStrictInterlacing(String),

    #[error("tableau is outside the Gelfand-Zeitlin cone")]
    NotInGzCone,

    #[error("scale factor must be positive")]
    NonPositiveScale,

    #[error("no chamber found for rank {n}: {reason}")]
    ChamberNotFound { n: usize, reason: String },

    #[error("chamber verification failed: {0}")]
    ChamberMismatch(String),

    #[error("weighting is not generic at delta = {}", .0.delta)]
    NotGeneric(Box<GenericityReport>),

    #[error("empty sample")]
    EmptySample,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = HornError> = std::result::Result<T, E>;
