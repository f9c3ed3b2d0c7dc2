use thiserror::Error;

use crate::Vertex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is not connected (vertex {unreachable} unreachable from 0)")]
    NotConnected { unreachable: Vertex },
    #[error("graph is not median: triple {triple:?} has {medians} medians")]
    NotMedian {
        triple: (Vertex, Vertex, Vertex),
        medians: usize,
    },
    #[error("wall of edge {edge:?} has a non-convex side")]
    WallNotConvex { edge: (Vertex, Vertex) },
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("vertex set {0:?} is not convex")]
    NotConvex(Vec<Vertex>),
    #[error("empty vertex set")]
    EmptySet,
    #[error("objects belong to different ambient graphs")]
    AmbientMismatch,
    #[error("{what} too large: {size} exceeds bound {bound}")]
    TooLarge {
        what: &'static str,
        size: u128,
        bound: u128,
    },
    #[error("invalid permutation {name:?}: {reason}")]
    InvalidPermutation { name: String, reason: String },
    #[error("permutation {name:?} is not a graph automorphism")]
    NotAutomorphism { name: String },
    #[error("basepoint {0} does not have trivial stabiliser")]
    BasepointNotFree(Vertex),
    #[error("lamp support point {0} is not in the orbit of the base basepoint")]
    NotInOrbit(Vertex),
    #[error("action leaves the truncated model")]
    SupportOutsideModel,
    #[error(
        "truncation too small: pruning radius {needed} exceeds model radius {available} ({side})"
    )]
    TruncationTooSmall {
        side: &'static str,
        needed: u64,
        available: u64,
    },
    #[error("search bound exceeded: more than {0} nodes")]
    BoundExceeded(usize),
    #[error("invalid document: {0}")]
    InvalidDocument(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
