//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Error, Debug)]
pub enum Error {
    /// Operand dimensions do not line up.
    #[error("dimension mismatch: {context} (expected {expected}, got {actual})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A tensor product would exceed the configured dense-storage limit.
    #[error("tensor product dimension {dim} exceeds the configured maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    /// A matrix that must be Hermitian is not, within tolerance.
    #[error("matrix is not Hermitian (max |M - M\u{2020}| = {violation:.3e}, tolerance {tolerance:.3e})")]
    NotHermitian { violation: f64, tolerance: f64 },

    /// A matrix that must be positive semidefinite has a significantly
    /// negative eigenvalue.
    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },

    /// A density matrix violates positivity beyond the clamping window.
    #[error("invalid quantum state (eigenvalue {eigenvalue:.3e} below -{tolerance:.1e})")]
    InvalidState { eigenvalue: f64, tolerance: f64 },

    /// The Laguerre series tail did not fall below the acceptance threshold;
    /// the step size must be reduced.
    #[error("time step {dt:.3e} too large: series tail {tail:.3e} exceeds {threshold:.3e}")]
    StepTooLarge { dt: f64, tail: f64, threshold: f64 },

    /// Step calibration halved dt below the sanity floor.
    #[error("step calibration failed: dt underflowed below {floor:.1e}")]
    CalibrationFailed { floor: f64 },

    /// The evolution produced a non-finite amplitude.
    #[error("numeric failure at t = {t}: non-finite state amplitude")]
    NumericFailure { t: f64 },

    /// Two traces do not share a sample grid.
    #[error("trace grids differ: {context}")]
    GridMismatch { context: String },

    /// A run configuration file could not be parsed.
    #[error("config error: {message}")]
    Config { message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: config problems exit 2, numeric
    /// failures exit 3, everything else 1.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Io(_) => 2,
            Error::NumericFailure { .. } | Error::StepTooLarge { .. } => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
