use thiserror::Error;

use crate::region::RegionError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error("incompatible model: {0}")]
    IncompatibleModel(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid evidence: {0}")]
    InvalidEvidence(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Short machine-readable tag used by the command line front end.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Region(crate::region::RegionError::AmbientMismatch { .. }) => "ambient_mismatch",
            Error::Region(_) => "region",
            Error::IncompatibleModel(_) => "incompatible_model",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::InvalidEvidence(_) => "invalid_evidence",
            Error::Precondition(_) => "precondition",
            Error::Unsupported(_) => "unsupported",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
