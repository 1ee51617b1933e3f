use thiserror::Error;

use crate::embed::Witness;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph is empty")]
    EmptyGraph,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not outerplanar: {0}")]
    NotOuterplanar(Witness),
    #[error("vertex {0} does not occur in any bag")]
    AbsentVertex(usize),
    #[error("decomposition has no bags")]
    EmptyDecomposition,
    #[error("input is not a tree")]
    NotATree,
    #[error("the root block has no parent")]
    RootHasNoParent,
    #[error("vertex {vertex} is not a cut vertex with a child block below block {block}")]
    NotACutVertex { block: usize, vertex: usize },
    #[error("vertex {vertex} is not in block {block}")]
    NotInBlock { block: usize, vertex: usize },
    #[error("block {0} has no Hamiltonian cycle yet")]
    NotEmbedded(usize),
    #[error("size guard: n = {n} exceeds the limit {limit}; use bounds-only mode")]
    SizeGuard { n: usize, limit: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
