use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("wavelet spectrum is not admissible: {0}")]
    NotAdmissible(String),

    /// The wavelet band of at least one scale cannot be represented on the
    /// discrete frequency grid.
    #[error("band coverage: {0}")]
    BandCoverage(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
