use thiserror::Error;

/// Errors produced by state construction, overlap evaluation, sweeps, and
/// file parsing.
#[derive(Debug, Error)]
pub enum Error {
    /// The requested Fock-space dimension is below the smallest usable size.
    #[error("dimension must be at least {min}, got {got}")]
    DimensionTooSmall { min: usize, got: usize },

    /// Two objects that must live in the same space do not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    /// A vector was built from an empty amplitude list.
    #[error("amplitude list is empty")]
    EmptyAmplitudes,

    /// A number-basis index lies outside the truncated space.
    #[error("basis index {index} out of range for dimension {dim}")]
    BasisIndexOutOfRange { index: usize, dim: usize },

    /// A superposition collapsed to (numerically) zero norm.
    #[error("null state: squared norm {norm_sqr:.3e} is below {limit:.3e}")]
    NullState { norm_sqr: f64, limit: f64 },

    /// A sweep specification failed validation.
    #[error("invalid sweep specification: {0}")]
    InvalidSweep(String),

    /// A scalar parameter failed validation.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A config or spec file could not be parsed.
    #[error("parse: {0}")]
    Parse(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
