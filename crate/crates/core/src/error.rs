use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("unknown side `{0}`")]
    UnknownSide(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("duplicate side label `{0}`")]
    DuplicateSide(String),

    #[error("idempotent mismatch: {0}")]
    IdempotentMismatch(String),

    #[error("side `{label}` must be of kind {expected}")]
    SideKind { label: String, expected: &'static str },

    #[error("term {0} is not invertible")]
    NotInvertible(String),

    #[error("refusing to cancel self-loop on `{0}`")]
    SelfLoop(String),

    #[error("cancelling {0} produces an infinite family of operations")]
    InfiniteZigzag(String),

    #[error("neither factor of the tensor product is bounded")]
    Unbounded,

    #[error("complex has {n} generators, above the cap of {cap}")]
    SizeCap { n: usize, cap: usize },

    #[error("invalid model: {}", .0.join("; "))]
    InvalidModel(Vec<String>),

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("invalid range: {0}")]
    Range(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
