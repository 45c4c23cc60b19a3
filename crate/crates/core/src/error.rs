use thiserror::Error;

use crate::units::Dimension;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: Dimension, got: Dimension },

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },

    #[error("invalid cell pattern: {0}")]
    InvalidPattern(String),

    #[error("invalid device spec: {0}")]
    InvalidDevice(String),

    #[error("basis string {basis:?} does not fit pattern of length {len}")]
    BasisMismatch { basis: String, len: usize },

    #[error("chain of {sites} sites exceeds the configured maximum of {max} for {repr}")]
    ChainTooLong { sites: usize, max: usize, repr: &'static str },

    #[error("state is not normalized: {0}")]
    NotNormalized(String),

    #[error("operator is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("Kraus set is not trace preserving (deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("observable {0:?} does not match chain length {1}")]
    ObservableMismatch(String, usize),

    #[error("step size {dt} ns violates integrator preconditions: {reason}")]
    StepSize { dt: f64, reason: String },

    #[error("selective pulse infeasible: {0}")]
    Infeasible(String),

    #[error("invalid pulse event: {0}")]
    InvalidEvent(String),

    #[error("invalid program: {0}")]
    InvalidProgram(String),

    #[error("invalid gate rule: {0}")]
    InvalidRule(String),

    #[error("{0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
