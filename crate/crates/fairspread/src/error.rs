use crate::graph::NodeId;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("node '{id}' appears in the edge file but has no attribute row")]
    MissingAttribute { id: String },

    #[error("node '{id}' has group value '{value}', expected 1 or 2")]
    InvalidGroup { id: String, value: String },

    #[error("group {group} is empty; per-group fractions are undefined")]
    EmptyGroup { group: u8 },

    #[error("seed id {id} is out of range for a graph with {node_count} nodes")]
    SeedOutOfRange { id: NodeId, node_count: usize },

    #[error("seedset contains duplicate node {id}")]
    DuplicateSeed { id: NodeId },

    #[error("requested k={k} seeds but the graph has only {node_count} nodes")]
    SeedBudgetTooLarge { k: usize, node_count: usize },

    #[error("group {group} budget k_i={budget} exceeds group size {group_size}")]
    GroupBudgetTooLarge {
        group: u8,
        budget: usize,
        group_size: usize,
    },

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("beta {0} is outside [0, 1]")]
    InvalidBeta(f64),

    #[error("realization count must be at least 1")]
    ZeroRealizations,

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("exact enumeration requires at most {max} edges, graph has {edges}")]
    EnumerationTooLarge { edges: usize, max: usize },

    #[error("transport solver did not converge within the pivot budget")]
    TransportNoConvergence,

    #[error("unknown algorithm '{0}'")]
    UnknownAlgorithm(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
