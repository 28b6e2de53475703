use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A precondition of a construction or check does not hold.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown node {0}")]
    UnknownNode(String),

    #[error("transition {transition} is not enabled: {reason}")]
    NotEnabled { transition: String, reason: String },

    #[error("resource bound exceeded: {0}")]
    Resource(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
