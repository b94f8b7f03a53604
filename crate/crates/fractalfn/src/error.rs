use thiserror::Error;

/// Errors produced by construction invariants and numerical routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid interval: lo={lo} must be strictly below hi={hi}")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid scaling vector: {0}")]
    InvalidScaling(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("x={x} outside domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("base/seed endpoint mismatch at {end}: expected {expected}, got {actual}")]
    EndpointMismatch {
        end: &'static str,
        expected: f64,
        actual: f64,
    },

    #[error("function is not periodic: |f(lo) - f(hi)| = {gap}")]
    NotPeriodic { gap: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "fixed-point iteration did not converge after {iterations} sweeps (last step {final_step})"
    )]
    NonConvergence { iterations: usize, final_step: f64 },

    #[error("denominator is not positive on the sample grid (min value {min_value})")]
    DenominatorNotPositive { min_value: f64 },

    #[error("approximation target not reached with available degrees (best gap {best_gap}); try larger m, n")]
    DegreeExhausted { best_gap: f64 },

    #[error("no operator norm data available for this base operator")]
    NormDataUnavailable,
}

pub type Result<T> = std::result::Result<T, Error>;
