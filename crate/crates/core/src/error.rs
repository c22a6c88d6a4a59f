use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported prime {0} (need an odd prime <= 31)")]
    UnsupportedPrime(u32),
    #[error("singular generator {0}")]
    SingularGenerator(String),
    #[error("unknown group {0}")]
    UnknownGroup(String),
    #[error("algebra mismatch: {0} vs {1}")]
    AlgebraMismatch(String, String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("invalid descriptor {id}: {msg}")]
    Descriptor { id: String, msg: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
