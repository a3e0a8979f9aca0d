use thiserror::Error;

/// Errors raised by graph construction, solvers, classifiers and the harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("node {node} out of range for a graph of {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("edge ({i}, {j}) has non-positive weight {weight}")]
    NonPositiveWeight { i: usize, j: usize, weight: f64 },

    #[error("node {node} is isolated (zero degree)")]
    IsolatedNode { node: usize },

    #[error("{copy} copy of node {node} is isolated in the bipartite lift")]
    IsolatedBipartiteCopy { node: usize, copy: &'static str },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),

    #[error("invalid solver options: {0}")]
    InvalidOptions(String),

    #[error("connected component #{component} ({size} nodes, containing node {first_node}) has no boundary node")]
    ComponentWithoutBoundary {
        component: usize,
        size: usize,
        first_node: usize,
    },

    #[error("linear system is singular")]
    SingularSystem,

    #[error("exact solve needs {unknowns} unknowns, above the limit of {limit}; use iterative mode")]
    TooLargeForExact { unknowns: usize, limit: usize },

    #[error("invalid seed set: {0}")]
    InvalidSeeds(String),

    #[error("label {label} has no seed")]
    LabelWithoutSeed { label: u32 },

    #[error("invalid block model parameters: {0}")]
    InvalidParams(String),

    #[error("block graph has {n} nodes, above the builder limit of {limit}")]
    TooLargeForBuilder { n: usize, limit: usize },

    #[error("graph generation failed: {0}")]
    Generation(String),

    #[error("seed sampling failed: {0}")]
    Sampling(String),

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
