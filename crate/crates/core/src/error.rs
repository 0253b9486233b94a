use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("vertex {0} has no neighbors")]
    IsolatedVertex(VertexId),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid subgraph: {0}")]
    InvalidSubgraph(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("configuration mismatch: {0}")]
    Mismatch(String),
    #[error("target set is empty")]
    EmptyTarget,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
