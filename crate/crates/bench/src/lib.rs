//! Inputs shared by the benchmarks.

use dirichlet_core::{sbm_generate, BlockInstance, BlockModelParams, DirichletProblem};

/// Two-block SBM with `n` nodes per block, 5% of each block seeded, and an
/// expected within-block degree of about `degree`.
pub fn two_block_sbm(n: usize, degree: f64, seed: u64) -> BlockInstance {
    let p = (degree / n as f64).min(1.0);
    let params = BlockModelParams::new(vec![n, n], vec![n / 20, n / 20], p, p / 10.0).expect("valid parameters");
    sbm_generate(&params, seed).expect("generator succeeds")
}

/// Boundary with the seeds of `hot` at 1 and the rest at 0.
pub fn one_vs_all_boundary(inst: &BlockInstance, hot: u32) -> Vec<(usize, f64)> {
    inst.seeds.iter().map(|(i, l)| (i, if l == hot { 1.0 } else { 0.0 })).collect()
}

pub fn problem(inst: &BlockInstance) -> DirichletProblem<'_> {
    DirichletProblem::new(&inst.graph, &one_vs_all_boundary(inst, 1)).expect("valid boundary")
}
