//! Error type shared by all estimation modules.

use thiserror::Error;

/// Failure modes of the estimation pipeline.
///
/// `InvalidArgument` covers caller mistakes (out-of-range parameters, empty
/// input). `DegenerateSample` means the data admit no estimate (for example a
/// zero interquartile spread). `UndefinedExponent` is the moment-ratio
/// analogue (a vanishing one- or two-step moment). `NumericalFailure` marks
/// non-convergent quadrature or similar breakdowns.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("undefined exponent: {0}")]
    UndefinedExponent(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        Error::DegenerateSample(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::NumericalFailure(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
