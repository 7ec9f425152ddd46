use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("mismatched operands: {0}")]
    Mismatch(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("Beltrami coefficient out of range: sup |mu_2| = {0}")]
    Beltrami(f64),
    #[error("map is not orientation preserving (min Jacobian {0})")]
    Orientation(f64),
    #[error("no spectral gap in the dbar kernel for k = {k}: singular values {tail:?}")]
    KernelGap { k: i32, tail: Vec<f64> },
    #[error("{what}: residual {value:e} above tolerance {tol:e}")]
    Residual { what: String, value: f64, tol: f64 },
    #[error("{what} did not converge: history {history:?}")]
    Divergence { what: String, history: Vec<f64> },
    #[error("linear algebra failure: {0}")]
    Linalg(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable category used in error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Mismatch(_) => "mismatch",
            Error::Invalid(_) => "invalid",
            Error::Beltrami(_) => "beltrami",
            Error::Orientation(_) => "orientation",
            Error::KernelGap { .. } => "kernel_gap",
            Error::Residual { .. } => "residual",
            Error::Divergence { .. } => "divergence",
            Error::Linalg(_) => "linalg",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Linalg(e.to_string())
    }
}
