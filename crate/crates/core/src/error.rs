use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("malformed input: {0}")]
    MalformedInput(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("unphysical symplectic eigenvalue {sigma} (must be >= 1/2)")]
    UnphysicalEigenvalue { sigma: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("no normalizable ground state: {0}")]
    NoGroundState(String),

    #[error("numerical failure: {what} (residual {residual:e})")]
    NumericalFailure { what: String, residual: f64 },

    #[error("truncation too coarse: tail mass {tail_mass:e} exceeds bound, need n_max >= {required_n_max}")]
    Truncation {
        tail_mass: f64,
        required_n_max: usize,
    },

    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
