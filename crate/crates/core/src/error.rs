use std::path::PathBuf;

use crate::dom::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("node {0} does not belong to this tree")]
    UnknownNode(NodeId),
    #[error("document has no text content")]
    EmptyDocument,
    #[error("block set is empty")]
    EmptyBlockSet,
    #[error("cannot expand past the root node")]
    AtRoot,
    #[error("node {0} has no children")]
    NoChildren(NodeId),
    #[error("input could not be decoded")]
    InputNotDecodable,
    #[error("invalid node path `{path}`: {reason}")]
    InvalidPath { path: String, reason: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("gold manifest error: {0}")]
    Manifest(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
