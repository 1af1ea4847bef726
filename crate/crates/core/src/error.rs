use crate::membership::SubgroupKind;

/// Errors produced by the group engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("cannot parse portrait {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: String, right: String },

    #[error("vertex {position} does not exist on level {level}")]
    InvalidVertex { level: usize, position: usize },

    #[error("operation requires a binary signature, got {0}")]
    NonBinary(String),

    #[error("operation requires depth at least {required}, got {actual}")]
    DepthTooSmall { required: usize, actual: usize },

    #[error("root label must be 0, got {0}")]
    RootNotTrivial(u32),

    #[error("element {element} is not in the {kind} subgroup")]
    NotInSubgroup { element: String, kind: SubgroupKind },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("size {size} exceeds cap {cap}")]
    CapExceeded { size: String, cap: u64 },

    #[error("subset check failed: {0}")]
    NotSubset(String),

    /// A constructed witness failed re-verification. Indicates a bug in a
    /// multiplication or conjugation convention.
    #[error("witness verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
