use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum GhError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field contains non-finite samples (first at index {index})")]
    PoisonedField { index: usize },

    #[error("kernel/grid mismatch: {0}")]
    KernelMismatch(String),

    #[error("operation requires {expected} regime, got s_c = {s_c}")]
    WrongRegime { expected: &'static str, s_c: f64 },

    #[error("nonpositive energy {0}: use the negative-energy clause")]
    NonpositiveEnergy(f64),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("iteration diverged: stabilizing factor {0:e} left [1e-6, 1e6]")]
    Divergence(f64),

    #[error("ground state is not converged (residual {residual:e} > tol {tol:e})")]
    Unconverged { residual: f64, tol: f64 },

    #[error("no root in bracket [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("checkpoint format: {0}")]
    Format(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, GhError>;
