use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("eigensolver did not converge: {0}")]
    NonConvergence(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("dilation factor must be nonnegative, got {0}")]
    NegativeScale(f64),

    #[error("invalid direction count {count} for dimension {d}")]
    InvalidCount { d: usize, count: usize },

    #[error("covariance matrix is not positive semidefinite (min eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("kappa * m = {0} is not a positive integer")]
    NonIntegerSize(f64),

    #[error("non-positive input: {0}")]
    NonPositiveInput(String),

    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    #[error("quadrature failed to reach tolerance {tolerance:e} within {panels} panels (error estimate {estimate:e})")]
    QuadratureFailure { tolerance: f64, panels: usize, estimate: f64 },

    #[error("horizon {horizon} is shorter than the required {required}")]
    HorizonTooShort { horizon: f64, required: f64 },

    #[error("tuple violates the isometry constraint (residual {0:e})")]
    ConstraintViolation(f64),

    #[error("unknown figure id {0:?}")]
    UnknownFigure(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of a numerical routine, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence(_) | Error::QuadratureFailure { .. }
        )
    }

    pub(crate) fn dims(expected: usize, got: usize) -> Self {
        Error::DimensionMismatch { expected, got }
    }
}
