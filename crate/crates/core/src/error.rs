use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix or truncation dimension outside the supported range.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// Operation requested in a coupling regime where it is not defined
    /// (e.g. the real similarity transformation at or beyond the
    /// exceptional point).
    #[error("regime error: {0}")]
    Regime(String),

    /// Iterative kernel failed to converge or produced non-finite values.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// Time stepping produced a non-finite state or was misconfigured.
    #[error("step error: {0}")]
    Step(String),

    /// Phase-space frame mismatch.
    #[error("frame error: {0}")]
    Frame(String),

    /// Operands carry incompatible basis tags or dimensions.
    #[error("basis mismatch: {0}")]
    Basis(String),

    /// Invalid run configuration (CLI flags, parameter ranges).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
