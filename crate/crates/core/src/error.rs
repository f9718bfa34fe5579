use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cannot derive a partition name from `{path}`: {reason}")]
    Naming { path: String, reason: String },

    #[error("partition name `{name}` is derived from both `{first}` and `{second}`")]
    Collision { name: String, first: String, second: String },

    #[error("cannot convert `{path}`: {message}")]
    Conversion { path: String, message: String },

    #[error("malformed module unit `{path}`: {message}")]
    MalformedUnit { path: PathBuf, message: String },

    #[error("invalid symbol manifest `{dependency}`: {message}")]
    Manifest { dependency: String, message: String },

    #[error("cannot emit build rules: {0}")]
    Emit(String),

    #[error("`{0}` is not a node of the include graph")]
    UnknownNode(String),
}
