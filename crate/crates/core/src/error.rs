use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("closure exceeded the cap of {cap} ({what})")]
    CapExceeded { what: String, cap: u64 },
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("group order {order} is not a power of {p}")]
    NotPGroup { order: usize, p: u64 },
    #[error("word arity {expected} does not match assignment length {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("modulus {n} is not coprime to n0 = {n0}")]
    NotCoprime { n: u64, n0: u64 },
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
    #[error("polynomial evaluation is not an integer: {0}")]
    NonIntegerResult(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("invalid chain: {0}")]
    ChainInvalid(String),
    #[error("graph has {vertices} vertices, above the cap of {cap}")]
    SizeCap { vertices: u64, cap: u64 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn cap(what: impl Into<String>, cap: u64) -> Self {
        Error::CapExceeded { what: what.into(), cap }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
