use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("no maximal MUB construction available for dimension {0}")]
    UnsupportedDimension(usize),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid rate function: {0}")]
    InvalidRate(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("exponential weight overflow at t = {t} (exponent {exponent:.3}); rescale the time horizon")]
    WeightOverflow { t: f64, exponent: f64 },

    #[error("no unique stationary state (lambda3 = 1)")]
    NoStationaryState,

    #[error("map is not invertible at t = {t} (smallest eigenvalue {eigenvalue:e})")]
    NonInvertible { t: f64, eigenvalue: f64 },

    #[error("ODE integration did not converge after {doublings} step doublings (last change {change:e})")]
    NonConvergence { doublings: usize, change: f64 },

    #[error("divisibility hierarchy violated at t = {t}: {detail}")]
    HierarchyViolation { t: f64, detail: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Configuration problems are user errors; everything numeric is a
    /// failure of the run itself.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::UnsupportedDimension(_) | Error::InvalidRate(_)
        )
    }

    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian { .. }
                | Error::NotPositive { .. }
                | Error::NonFinite(_)
                | Error::WeightOverflow { .. }
                | Error::NonInvertible { .. }
                | Error::NonConvergence { .. }
                | Error::HierarchyViolation { .. }
                | Error::NoStationaryState
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
