use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

use crate::nodeset::NodeId;

/// One problem found while checking an instance description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("self-loop at node {0}")]
    SelfLoop(i64),
    #[error("edge ({0}, {1}) references a node outside V")]
    EdgeOutOfRange(i64, i64),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(NodeId, NodeId),
    #[error("asymmetric adjacency: node {from} lists {to} but not the reverse")]
    AsymmetricAdjacency { from: NodeId, to: NodeId },
    #[error("snapshot node {0} outside V")]
    SnapshotOutOfRange(i64),
    #[error("negative threshold {value} at node {node}")]
    NegativeThreshold { node: NodeId, value: i64 },
    #[error("threshold vector has length {found}, expected {expected}")]
    ThresholdLengthMismatch { expected: usize, found: usize },
    #[error("negative budget {0}")]
    NegativeBudget(i64),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("label vector has length {found}, expected {expected}")]
    LabelLengthMismatch { expected: usize, found: usize },
    #[error("missing field \"snapshot\"")]
    MissingSnapshot,
    #[error("missing field \"dynamics\" and no mode override given")]
    MissingDynamics,
    #[error("mode override given but the instance already fixes \"dynamics\"")]
    ConflictingDynamics,
}

/// The full list of violations for a rejected instance.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ValidationErrors(pub Vec<Violation>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl From<Violation> for ValidationErrors {
    fn from(v: Violation) -> Self {
        ValidationErrors(vec![v])
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    Validation(#[from] ValidationErrors),
    #[error("parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("node id {0} out of range")]
    NodeOutOfRange(NodeId),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("operation requires {expected} dynamics, instance uses {found}")]
    WrongMode { expected: String, found: String },
    #[error("certificate does not replay: {0}")]
    Replay(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("corpus missing: {0}")]
    CorpusMissing(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
