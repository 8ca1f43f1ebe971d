use thiserror::Error;

pub type Result<T> = std::result::Result<T, EngineError>;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Core(#[from] oddvar_core::Error),
    #[error("circulant embedding failed: eigenvalue {index} is {value:e} (below -1e-9)")]
    Spectral { index: usize, value: f64 },
    #[error("covariance matrix is not positive definite at leading minor {minor}")]
    Cholesky { minor: usize },
    #[error("{points} grid points exceed the Cholesky cap of {cap}")]
    TooLarge { points: usize, cap: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl EngineError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
