use thiserror::Error;

use crate::graph::{EdgeId, VertexId, Violation};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex id {0}")]
    UnknownVertex(VertexId),

    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),

    #[error("invalid exchange graph: {}", join(.0))]
    InvalidGraph(Vec<Violation>),

    #[error("edge {0} is already in the set")]
    EdgeAlreadyPresent(EdgeId),

    #[error("vertex {0} lies outside every budget block")]
    VertexOutsideBlocks(VertexId),

    #[error("invalid budget: {0}")]
    InvalidBudget(String),

    #[error("instance too large for {what}: {size} exceeds limit {limit}")]
    TooLarge {
        what: &'static str,
        size: u128,
        limit: u128,
    },

    #[error("prior must be positive definite")]
    NotPositiveDefinite,

    #[error("base pose graph is disconnected")]
    Disconnected,

    #[error("invalid pose graph: {0}")]
    InvalidPoseGraph(String),

    #[error("{planner} does not support the {regime} budget regime")]
    RegimeMismatch {
        planner: &'static str,
        regime: &'static str,
    },

    #[error("{0} requires a modular objective")]
    NonModular(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("trace was not produced by {0}")]
    ForeignTrace(&'static str),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors raised by enumeration guards.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::TooLarge { .. })
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
