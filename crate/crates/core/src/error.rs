use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on vertex {0}")]
    Loop(VertexId),

    #[error("vertex {0} out of range for a graph with {1} vertices")]
    VertexOutOfRange(VertexId, usize),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("edge {0} does not belong to the graph")]
    UnknownEdge(EdgeId),

    #[error("no edge between {0} and {1}")]
    MissingEdge(VertexId, VertexId),

    #[error("not a path in the graph: {0}")]
    NotAPath(String),

    #[error("chord endpoint {0} is not on the cycle")]
    OffCycle(VertexId),

    #[error("{0} is a cycle edge, not a chord")]
    NotAChord(String),

    #[error("graph has no edges")]
    NoEdges,

    #[error("invariant violated at level {level}, step {step}: {detail}")]
    Invariant {
        level: usize,
        step: &'static str,
        detail: String,
    },

    #[error("certificate: {0}")]
    Certificate(String),
}

impl Error {
    /// An invariant violation whose level is filled in by the caller.
    pub(crate) fn invariant(step: &'static str, detail: impl Into<String>) -> Error {
        Error::Invariant {
            level: 0,
            step,
            detail: detail.into(),
        }
    }

    pub(crate) fn at_level(self, level: usize) -> Error {
        match self {
            Error::Invariant { step, detail, .. } => Error::Invariant {
                level,
                step,
                detail,
            },
            other => other,
        }
    }

    pub fn is_invariant(&self) -> bool {
        matches!(self, Error::Invariant { .. })
    }
}

/// Returns an invariant error from the enclosing function when `cond` fails.
macro_rules! ensure {
    ($cond:expr, $step:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::invariant($step, format!($($fmt)+)));
        }
    };
}
pub(crate) use ensure;
