use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid path witness: {0}")]
    InvalidWitness(String),
    #[error("instance is not simple: {0}")]
    NotSimple(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("oracle cap exceeded: {size} > {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
