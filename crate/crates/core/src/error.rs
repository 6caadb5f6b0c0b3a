use thiserror::Error;

/// Errors raised by the estimators, the scale calculus and the experiment
/// harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("non-finite coordinate at point {point}, axis {axis}")]
    NonFiniteCoordinate { point: usize, axis: usize },

    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error(
        "tree and parameters disagree on `{field}`: tree has {tree}, parameters have {params}"
    )]
    ParameterMismatch {
        field: &'static str,
        tree: String,
        params: String,
    },

    #[error("density is degenerate: {0}")]
    DegenerateDensity(String),

    #[error("point {index} at {coordinate} lies outside the density support")]
    OutsideSupport { index: usize, coordinate: f64 },

    #[error("experiment hypotheses violated: {0}")]
    Hypothesis(String),

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("unsupported schema version `{0}`")]
    UnsupportedVersion(String),

    #[error("data error at line {line}: {message}")]
    Data { line: usize, message: String },

    #[error("serialization failed: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
