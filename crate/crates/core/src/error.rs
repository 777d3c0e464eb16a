use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid label {0:?}: labels must be non-empty")]
    InvalidLabel(String),
    #[error("unknown edge label {0:?}")]
    UnknownEdgeLabel(String),
    #[error("node {0} has no construct labels")]
    NodeWithoutLabels(usize),
    #[error("edge endpoint {endpoint} out of range (node count {node_count})")]
    DanglingEndpoint { endpoint: u32, node_count: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(u32),
    #[error("duplicate model id {0:?}")]
    DuplicateModelId(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("manifest references missing graph file {}", .0.display())]
    MissingGraphFile(PathBuf),

    #[error("document {doc}: {message}")]
    Import { doc: String, message: String },
    #[error("no document in {} could be imported", .0.display())]
    NothingImported(PathBuf),

    #[error("invalid filter: {0}")]
    InvalidFilter(String),
    #[error("model id mismatch at position {index}: {before:?} vs {after:?}")]
    ModelMismatch {
        index: usize,
        before: String,
        after: String,
    },

    #[error("graph {0:?} is not connected")]
    Disconnected(String),
    #[error("graph {0:?} has no edges")]
    NoEdges(String),
    #[error("invalid mining configuration: {0}")]
    InvalidMiningConfig(String),

    #[error("invalid clustering input: {0}")]
    InvalidClustering(String),

    #[error("node {node} has contradictory roles: {roles}")]
    ContradictoryRoles { node: u32, roles: String },

    #[error("configuration error: {0}")]
    Config(String),
    #[error("stage {stage} requires missing artifact {}", artifact.display())]
    MissingArtifact { stage: String, artifact: PathBuf },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }
}
