use thiserror::Error;

/// Errors raised by the exact engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("rejected: {0}")]
    Rejected(String),
    #[error("formal atom degree overflow: {0}")]
    AtomOverflow(String),
    #[error("calibration error: {0}")]
    Calibration(String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("pipeline inconsistency: {0}")]
    Inconsistent(String),
    #[error("insufficient jet order: need {required}, have {have}")]
    InsufficientJetOrder { required: usize, have: usize },
    #[error("singular evaluation: {0}")]
    Singular(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("ansatz insufficient: {0}")]
    Ansatz(String),
}

pub type Result<T> = std::result::Result<T, Error>;
