use crate::numerics::NumericsError;
use crate::specfun::SpecialError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular point: {0}")]
    Singular(String),
    #[error("sampling failed: {0}")]
    Sampling(String),
    #[error("envelope violation at x = {x}: density {density} exceeds envelope {envelope}")]
    EnvelopeViolation { x: f64, density: f64, envelope: f64 },
    #[error("rejection sampler starved after {attempts} proposals")]
    Starvation { attempts: u64 },
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Broad classes of failure, each with a stable process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Domain,
    Numerical,
    Validation,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Domain => 2,
            ErrorKind::Numerical => 3,
            ErrorKind::Validation => 4,
        }
    }
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Domain(_) | Error::Singular(_) => ErrorKind::Domain,
            Error::Special(SpecialError::Domain { .. } | SpecialError::Pole { .. }) => ErrorKind::Domain,
            Error::Numerics(NumericsError::Invalid(_)) => ErrorKind::Domain,
            Error::Validation(_) => ErrorKind::Validation,
            _ => ErrorKind::Numerical,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind().exit_code()
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
