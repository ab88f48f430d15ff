use thiserror::Error;

/// Errors produced by ingestion, statistics, models and generators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no edges")]
    NoEdges,

    #[error("edge {u} -> {v} has no reverse edge (input is not symmetric)")]
    Asymmetric { u: u64, v: u64 },

    #[error("node {node} out of range (graph has {node_count} nodes)")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("degree statistics undefined: graph has no edges")]
    DegreeStatsUndefined,

    #[error("graph has no node with degree >= {0}")]
    NoEligibleNodes(usize),

    #[error("no nodes of degree {0}")]
    NoSuchDegreeClass(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("model inputs: {0}")]
    ModelInput(String),

    #[error("k_max = {k_max} truncates mass {truncated_mass:.3e} (limit {limit:.0e})")]
    InsufficientSupport {
        k_max: usize,
        truncated_mass: f64,
        limit: f64,
    },

    #[error("degree sequence is not graphical after rounding (stub total {stubs} is odd); try node_count = {suggested_node_count}")]
    NonGraphical {
        stubs: u64,
        suggested_node_count: usize,
    },

    #[error("conflict repair failed: realized joint degree distribution drifted {tv:.3e} (limit {limit:.0e}) from the sampled one")]
    RepairFailed { tv: f64, limit: f64 },

    #[error("infeasible wiring: {0}")]
    InfeasibleWiring(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
