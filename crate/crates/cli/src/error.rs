use std::fmt;

use clustertree::Error;

/// A failed invocation, classified by exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, missing arguments or an unreadable config file.
    Usage(String),
    /// Input that cannot be read or parsed.
    Data(String),
    /// Parameters that are out of range or inconsistent.
    Param(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Param(_) => 4,
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        CliError::Data(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Param(m) => write!(f, "parameter error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::EmptyPointSet
            | Error::NonFiniteCoordinate { .. }
            | Error::DimensionMismatch { .. }
            | Error::OutsideSupport { .. }
            | Error::MalformedTree(_)
            | Error::UnsupportedVersion(_)
            | Error::Data { .. }
            | Error::Serialization(_) => CliError::Data(msg),
            Error::InvalidParameter { .. }
            | Error::IndexOutOfRange { .. }
            | Error::InvalidQuery(_)
            | Error::ParameterMismatch { .. }
            | Error::DegenerateDensity(_)
            | Error::Hypothesis(_) => CliError::Param(msg),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
