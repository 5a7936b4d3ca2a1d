use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("Green function evaluated at the source point")]
    Singularity,

    #[error("zero frequency: {0}")]
    ZeroFrequency(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("direction {0:?} is outside the admissible set: {1}")]
    Direction([f64; 3], &'static str),

    #[error("grid mismatch: expected {expected} voxels, got {got}")]
    GridMismatch { expected: usize, got: usize },

    #[error("sampling violates {constraint}: {detail}")]
    Sampling {
        constraint: &'static str,
        detail: String,
    },

    #[error("pulse amplitude |f̂(ω)| = {amplitude:e} at ω = {omega:e} is below the conditioning threshold")]
    Conditioning { omega: f64, amplitude: f64 },

    #[error("sample at θ = {theta:?} excluded: {reason}")]
    Excluded { theta: [f64; 3], reason: &'static str },

    #[error("v = {0:?} is not in the kernel table")]
    UnknownSample([f64; 3]),

    #[error("linear system is singular (pivot {pivot:e} at column {column})")]
    SingularMatrix { column: usize, pivot: f64 },

    #[error("residual {residual:e} exceeds tolerance {tolerance:e}")]
    Residual { residual: f64, tolerance: f64 },

    #[error("regularization parameter must be positive, got {0:e}")]
    Regularization(f64),

    #[error("k-space coverage {coverage:.3} below required {required:.3}")]
    Coverage { coverage: f64, required: f64 },

    #[error("shape {index} extends outside the sample box")]
    ShapeOutsideDomain { index: usize },

    #[error("array shape mismatch: {0}")]
    Shape(String),

    #[error("file {path} is truncated: expected {expected} bytes, found {found}")]
    Truncated {
        path: PathBuf,
        expected: u64,
        found: u64,
    },

    #[error("malformed data: {0}")]
    Format(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularMatrix { .. }
                | Error::Residual { .. }
                | Error::Conditioning { .. }
                | Error::Coverage { .. }
        )
    }
}
