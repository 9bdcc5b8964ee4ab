use std::path::PathBuf;

use thiserror::Error;

use crate::graph::Vertex;

/// Violations of the neighbor/edge oracle contract.
///
/// These always indicate a bug in the caller (usually a reconstructor
/// asking for a vertex or index that does not exist) and are never
/// swallowed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("index {index} is outside 1..={degree} for vertex {vertex}")]
    IndexOutOfRange {
        vertex: Vertex,
        index: usize,
        degree: usize,
    },
    #[error("degenerate query ({0}, {0}): self-loops never exist")]
    DegenerateQuery(Vertex),
    #[error("in-neighbor access on an undirected graph")]
    NotDirected,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("parallel edge ({0}, {1})")]
    ParallelEdge(Vertex, Vertex),
    #[error("{edges} edges exceed the edge budget {m_bound}")]
    OverBudget { edges: usize, m_bound: usize },
    #[error("incompatible graphs: {0}")]
    Incompatible(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("parameter {name} = {value} is invalid: {reason}")]
    Invalid {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("{0}")]
    Constraint(String),
}

impl ConfigError {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        ConfigError::Invalid {
            name,
            value,
            reason,
        }
    }
}

/// Errors from the exact (non-sublinear) verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("expected an {expected} graph")]
    WrongGraphKind { expected: &'static str },
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("exhaustive check limited to n <= {limit}, got {n}")]
    SizeLimit { n: usize, limit: usize },
}

/// Errors raised by the reconstructors beyond plain oracle violations.
#[derive(Debug, Error)]
pub enum ReconError {
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("extreme-set verification limited to {limit} vertices, got {size}")]
    SetTooLarge { size: usize, limit: usize },
    #[error("distance estimator is unsound for this reconstructor: {0}")]
    EstimatorUnsound(String),
    #[error(transparent)]
    Check(#[from] CheckError),
}
