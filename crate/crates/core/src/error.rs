use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected ground size {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ground size must be at least 1")]
    EmptyGround,

    #[error("element {element} is outside the ground set [1, {ground_size}]")]
    ElementOutOfRange { element: usize, ground_size: usize },

    #[error("duplicate member {0} in set family")]
    DuplicateMember(String),

    #[error("family is not uniform: member {member} has size {found}, expected {expected}")]
    NotUniform {
        member: usize,
        expected: usize,
        found: usize,
    },

    #[error("member {member} has odd size {size}; an even-sized family is required")]
    OddMember { member: usize, size: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("subspace of dimension {dim} exceeds the enumeration cap {cap}")]
    EnumerationTooLarge { dim: usize, cap: usize },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("{}: line {line}: {message}", path.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "<input>".into()))]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        message: String,
    },

    #[error("not a Steiner system S({n},{k},{t}): {t}-set {tset} lies in {count} blocks")]
    SteinerCover {
        n: usize,
        k: usize,
        t: usize,
        tset: String,
        count: usize,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
