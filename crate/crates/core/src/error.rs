use alloc::string::String;

/// Errors raised by the simulation core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("exhaustive search refused: {n} variables exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("amplitudes diverged in round {round}")]
    Divergence { round: usize },

    #[error("non-finite value in input")]
    NonFinite,

    #[error("truncation leakage {leakage:e} exceeds {limit:e}; increase n_max")]
    Truncation { leakage: f64, limit: f64 },

    #[error("step {dt} violates stability guard (rate bound {rate_bound}, limit dt*rate < 0.1)")]
    StepTooLarge { dt: f64, rate_bound: f64 },

    #[error("no convergence: residual norm {residual:e}")]
    NoConvergence { residual: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
