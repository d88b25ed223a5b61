use thiserror::Error;

/// Errors produced by frame parsing, graph construction and the numerical kernels.
#[derive(Debug, Error)]
pub enum Error {
    /// Text input that does not follow the declared format. Carries the
    /// 1-based line number where parsing stopped.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A frame violating its structural invariants (non-positive box,
    /// mismatched lengths, non-finite coordinates).
    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    /// A run configuration that cannot produce a well-defined result,
    /// e.g. a cutoff at or above half the shortest box edge.
    #[error("configuration error: {0}")]
    Config(String),

    /// An out-of-range or inconsistent parameter passed to an operation.
    #[error("parameter error: {0}")]
    Param(String),

    /// An iterative eigensolver or linear solver stopped at its iteration
    /// cap without meeting the requested tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// An internal consistency check failed. This always indicates a bug,
    /// never invalid input.
    #[error("internal consistency error: {0}")]
    Internal(String),

    /// Pooled distributions that never intersect between their modes.
    #[error("distributions do not cross")]
    NoCrossing,

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
