use thiserror::Error;

use crate::axioms::AxiomReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("{what} exceeds cap ({size} > {cap})")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    #[error("{axiom} fails")]
    Axiom { axiom: &'static str, report: AxiomReport },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    #[error("matching is not firm-rational: {0}")]
    NotFirmRational(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
