use thiserror::Error;

/// Errors raised by grids, fields, steppers and file IO.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: expected {expected} values, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// The fixed-point iteration of the implicit step did not settle; the step size is
    /// too large for the data and should be reduced.
    #[error("fixed-point iteration did not converge in {iterations} iterations (last increment {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("coefficient band overflow: output wavenumber {wavenumber} does not fit the grid")]
    BandOverflow { wavenumber: i64 },

    #[error("malformed snapshot: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
