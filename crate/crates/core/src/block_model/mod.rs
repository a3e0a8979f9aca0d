//! Block model: closed-form equilibrium temperatures and graph builders.
//!
//! `K` blocks of sizes `n_1..n_K` hold `s_1..s_K` seeds, labelled by block.
//! Intra-block edges weigh `p`, inter-block edges `q`. When the seeds of one
//! block (the *hot* label) are held at 1 and all other seeds at 0, every
//! non-seed node of block `k` reaches the same temperature `T_k`, with
//!
//! ```text
//! a_k = s_k (p − q) + n q
//! (1 − Σ_j (n_j − s_j) q / a_j) · T̄ = (s_h / n) (n_h (p − q) + n q) / a_h
//! a_h T_h = s_h (p − q) + n T̄ q
//! a_k T_k = n T̄ q                              (k ≠ h)
//! ```
//!
//! These hold exactly on the complete weighted graph in which every node
//! also carries a self-loop of weight `p`, which is what
//! [`build_deterministic_block_graph`] produces.

mod sbm;

pub use sbm::{sbm_generate, sbm_generate_with, SbmOptions};

use crate::classifier::SeedSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodePartition};

/// Node limit for the dense deterministic builder.
pub const DEFAULT_BUILDER_LIMIT: usize = 5_000;

/// Block sizes, per-block seed counts, and intra/inter weights.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockModelParams {
    pub sizes: Vec<usize>,
    pub seeds: Vec<usize>,
    pub p: f64,
    pub q: f64,
}

impl BlockModelParams {
    pub fn new(sizes: Vec<usize>, seeds: Vec<usize>, p: f64, q: f64) -> Result<Self> {
        let params = Self { sizes, seeds, p, q };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::InvalidParams("at least one block is required".into()));
        }
        if self.sizes.len() != self.seeds.len() {
            return Err(Error::InvalidParams(format!(
                "{} block sizes but {} seed counts",
                self.sizes.len(),
                self.seeds.len()
            )));
        }
        for (k, (&n_k, &s_k)) in self.sizes.iter().zip(&self.seeds).enumerate() {
            if s_k == 0 || s_k > n_k {
                return Err(Error::InvalidParams(format!(
                    "block {}: need 0 < seeds ({s_k}) <= size ({n_k})",
                    k + 1
                )));
            }
        }
        for (name, value) in [("p", self.p), ("q", self.q)] {
            if !(value > 0.0) || !value.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be positive, got {value}")));
            }
        }
        Ok(())
    }

    pub fn k(&self) -> u32 {
        self.sizes.len() as u32
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Block (1-based) of every node, blocks laid out contiguously.
    pub fn block_of_nodes(&self) -> Vec<u32> {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(k, &n_k)| std::iter::repeat(k as u32 + 1).take(n_k))
            .collect()
    }

    /// First node of each block.
    pub fn block_starts(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .scan(0, |acc, &n_k| {
                let start = *acc;
                *acc += n_k;
                Some(start)
            })
            .collect()
    }

    /// Seeds are the first `s_k` nodes of block `k`.
    pub fn default_seeds(&self) -> Result<SeedSet> {
        let seeds = self
            .block_starts()
            .iter()
            .zip(&self.seeds)
            .enumerate()
            .flat_map(|(k, (&start, &s_k))| (start..start + s_k).map(move |i| (i, k as u32 + 1)))
            .collect();
        SeedSet::new(seeds, self.k())
    }

    pub fn truth(&self) -> Result<NodePartition> {
        NodePartition::from_dense(&self.block_of_nodes())
    }

    fn check_label(&self, label: u32) -> Result<usize> {
        if label == 0 || label > self.k() {
            return Err(Error::InvalidParams(format!(
                "label {label} outside 1..={}",
                self.k()
            )));
        }
        Ok(label as usize - 1)
    }

    fn a(&self, k: usize) -> f64 {
        self.seeds[k] as f64 * (self.p - self.q) + self.n() as f64 * self.q
    }

    /// `Σ_j (n_j − s_j) q / (s_j (p − q) + n q)`.
    fn interior_sum(&self) -> f64 {
        (0..self.sizes.len())
            .map(|j| (self.sizes[j] - self.seeds[j]) as f64 * self.q / self.a(j))
            .sum()
    }
}

/// A generated graph with its ground truth and seeds.
#[derive(Debug, Clone)]
pub struct BlockInstance {
    pub graph: Graph,
    pub truth: NodePartition,
    pub seeds: SeedSet,
}

/// Equilibrium temperatures of one hot-label diffusion on the block model.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTemperatures {
    pub hot: u32,
    /// Non-seed temperature of each block, index `k - 1` for block `k`.
    pub per_block: Vec<f64>,
    pub mean: f64,
    /// `T_k − T̄`.
    pub deltas: Vec<f64>,
}

pub fn closed_form_temperatures(params: &BlockModelParams, hot: u32) -> Result<BlockTemperatures> {
    params.validate()?;
    let h = params.check_label(hot)?;
    let n = params.n() as f64;
    let (p, q) = (params.p, params.q);

    let denominator = 1.0 - params.interior_sum();
    if !(denominator > 0.0) {
        return Err(Error::InvalidParams(format!(
            "mean-temperature denominator is {denominator}"
        )));
    }
    let s_h = params.seeds[h] as f64;
    let n_h = params.sizes[h] as f64;
    let mean = (s_h / n) * (n_h * (p - q) + n * q) / params.a(h) / denominator;

    let per_block: Vec<f64> = (0..params.sizes.len())
        .map(|k| {
            let heat = if k == h { s_h * (p - q) } else { 0.0 };
            (heat + n * mean * q) / params.a(k)
        })
        .collect();
    let deltas = per_block.iter().map(|t| t - mean).collect();
    Ok(BlockTemperatures {
        hot,
        per_block,
        mean,
        deltas,
    })
}

pub fn build_deterministic_block_graph(params: &BlockModelParams) -> Result<BlockInstance> {
    build_deterministic_block_graph_with_limit(params, DEFAULT_BUILDER_LIMIT)
}

/// Complete weighted graph: weight `p` inside blocks (self-loops included),
/// `q` across blocks.
pub fn build_deterministic_block_graph_with_limit(
    params: &BlockModelParams,
    limit: usize,
) -> Result<BlockInstance> {
    params.validate()?;
    let n = params.n();
    if n > limit {
        return Err(Error::TooLargeForBuilder { n, limit });
    }
    let blocks = params.block_of_nodes();
    let mut edges = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            let w = if blocks[i] == blocks[j] { params.p } else { params.q };
            edges.push((i, j, w));
        }
    }
    Ok(BlockInstance {
        graph: Graph::from_edges(n, &edges)?,
        truth: params.truth()?,
        seeds: params.default_seeds()?,
    })
}

/// Both sides of the vanilla correctness inequality for block `hot` against
/// label `other`:
///
/// ```text
/// s_h q (n_h(p−q) + nq) / a_h + s_h (p−q)(1 − Σ_j (n_j − s_j) q / a_j)
///     >  s_o q (n_o(p−q) + nq) / a_o
/// ```
pub fn vanilla_condition_sides(params: &BlockModelParams, hot: u32, other: u32) -> Result<(f64, f64)> {
    params.validate()?;
    let h = params.check_label(hot)?;
    let o = params.check_label(other)?;
    if h == o {
        return Err(Error::InvalidParams("hot and other labels must differ".into()));
    }
    let n = params.n() as f64;
    let (p, q) = (params.p, params.q);
    let side = |k: usize| {
        params.seeds[k] as f64 * q * (params.sizes[k] as f64 * (p - q) + n * q) / params.a(k)
    };
    let lhs = side(h) + params.seeds[h] as f64 * (p - q) * (1.0 - params.interior_sum());
    Ok((lhs, side(o)))
}

/// Whether non-seed nodes of block `hot` score higher in the `hot` diffusion
/// than in the `other` diffusion under raw (uncentered) temperatures.
///
/// Block `b` is classified correctly by the vanilla rule when this holds for
/// every `other ≠ b`.
pub fn vanilla_consistency_condition(params: &BlockModelParams, hot: u32, other: u32) -> Result<bool> {
    let (lhs, rhs) = vanilla_condition_sides(params, hot, other)?;
    Ok(lhs > rhs)
}

/// Small-seed-fraction form of the vanilla condition:
/// `s_h (n_h(p−q) + nq) > s_o (n_o(p−q) + nq)`.
pub fn vanilla_low_seed_condition(params: &BlockModelParams, hot: u32, other: u32) -> Result<bool> {
    let (lhs, rhs) = low_seed_sides(params, hot, other)?;
    Ok(lhs > rhs)
}

pub fn low_seed_sides(params: &BlockModelParams, hot: u32, other: u32) -> Result<(f64, f64)> {
    params.validate()?;
    let h = params.check_label(hot)?;
    let o = params.check_label(other)?;
    let n = params.n() as f64;
    let side = |k: usize| {
        params.seeds[k] as f64 * (params.sizes[k] as f64 * (params.p - params.q) + n * params.q)
    };
    Ok((side(h), side(o)))
}
