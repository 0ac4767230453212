use alloc::string::String;

use crate::scalars::Q;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// The answer depends on coefficients beyond the known truncation.
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("element is not invertible: {0}")]
    NotInvertible(String),
    #[error("stratum is not regular: {0}")]
    NotRegular(String),
    #[error("resonant residue: {0}")]
    Resonant(String),
    #[error("point is not compatible with the torus: {0}")]
    NotCompatible(String),
    #[error("not a regular conjugacy class: {0}")]
    NotRegularClass(String),
    #[error("invalid formal type: {0}")]
    InvalidFormalType(String),
    #[error("torus or depth mismatch: {0}")]
    Mismatch(String),
    #[error("linear system has no solution: {0}")]
    NoSolution(String),
    #[error("eigenvalues do not lie in the coefficient field: {0}")]
    EigenvaluesOutsideField(String),
    #[error("malformed input: {0}")]
    Invalid(String),
    #[error("slope search did not terminate after {0} descent steps")]
    Stalled(usize),
}

impl Error {
    pub(crate) fn precision(what: &str, needed: &Q, known: &Q) -> Self {
        Error::InsufficientPrecision(alloc::format!("{what} needs grade {needed}, known below {known}"))
    }
}
