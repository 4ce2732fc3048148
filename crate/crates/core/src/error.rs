use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0} (graphs are simple)")]
    SelfLoop(usize),

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    /// An exhaustive engine was asked to run on a graph larger than its cap.
    #[error("{engine} is capped at {cap} vertices, graph has {n}")]
    CapExceeded {
        engine: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("search budget exhausted after {nodes} node expansions")]
    BudgetExhausted { nodes: u64 },

    #[error("not a matching: {0}")]
    NotAMatching(String),

    #[error("permutation is not dyadic: it has a cycle of length {0}")]
    NotDyadic(usize),

    #[error("invalid graph permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid semiderangement: {0}")]
    InvalidSemiderangement(String),

    #[error("graph is not bipartite")]
    NotBipartite,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
