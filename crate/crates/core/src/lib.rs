//! Semi-supervised node classification by heat diffusion.
//!
//! Seeds with known labels act as heat sources on a weighted graph. For each
//! label, the seeds of that label are held at temperature 1 and all other
//! seeds at 0, and the equilibrium (harmonic) temperatures of the remaining
//! nodes score that label. Subtracting each diffusion's mean temperature
//! before taking the argmax ("centering") makes the classifier consistent on
//! block models regardless of how seeds are distributed across labels.
//!
//! * [`graph`]: compressed-row graphs, the random-walk operator, bipartite lift.
//! * [`solver`]: Dirichlet problems, Jacobi iteration and a dense exact solve.
//! * [`classifier`]: vanilla, weighted and centered one-vs-all classifiers.
//! * [`block_model`]: closed-form block-model temperatures and graph generators.
//! * [`harness`]: seed sampling, metrics and repeatable experiments.

pub mod block_model;
pub mod classifier;
pub mod error;
pub mod graph;
pub mod harness;
pub mod solver;

pub use block_model::{
    build_deterministic_block_graph, closed_form_temperatures, sbm_generate, vanilla_consistency_condition,
    BlockInstance, BlockModelParams, BlockTemperatures,
};
pub use classifier::{
    center, classify, classify_binary, diffuse_one_vs_all, Classification, ScoreMatrix, SeedSet, Threshold,
    Variant,
};
pub use error::{Error, Result};
pub use graph::{directed_to_bipartite, Graph, NodePartition};
pub use harness::{
    binary_per_label_experiment, macro_f1, run_experiment, sample_seeds, BinaryExperimentConfig,
    ExperimentConfig, GraphSource, MultiLabels, ResultTable, SamplingKind, SamplingPolicy, SeedPolicy, Sweep,
};
pub use solver::{
    residual, solve, solve_exact, solve_iterative, DirichletProblem, SolveMode, SolverOptions, StopReason,
    TemperatureField,
};
