//! Repeatable classification experiments.
//!
//! An [`ExperimentConfig`] names a graph source, a seeding policy, the
//! variants to compare, and an optional sweep axis. [`run_experiment`] runs
//! every `(sweep point, repetition)` pair as an independent task. Within a
//! task all variants share one graph, one seed set and one set of
//! diffusions, so their scores differ only by the scoring rule.
//!
//! Randomness: task `(point, rep)` reads from the ChaCha8 stream
//! `(point << 32) | rep` of a generator keyed by the master seed. The first
//! two words drawn seed the graph generator and the seed sampler. Tasks can
//! therefore run in any order or in parallel with identical results.

pub mod metrics;
pub mod sampling;

use std::collections::hash_map::DefaultHasher;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};
use std::sync::Arc;
use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::block_model::{build_deterministic_block_graph, sbm_generate, BlockModelParams};
use crate::classifier::{decide, diffuse_all, score, SeedSet, Variant};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodePartition};
use crate::solver::SolverOptions;

pub use metrics::{evaluate, macro_f1, mean_std, per_class_f1, Evaluation};
pub use sampling::{sample_seeds, seed_budget, SamplingKind, SamplingPolicy};

#[derive(Debug, Clone)]
pub enum GraphSource {
    /// A fixed graph with (possibly partial) ground truth.
    Loaded {
        graph: Arc<Graph>,
        truth: Arc<NodePartition>,
    },
    /// A fresh stochastic block model sample per task.
    Sbm(BlockModelParams),
    /// The deterministic complete block graph.
    Block(BlockModelParams),
}

/// How seeds are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum SeedPolicy {
    /// The block model's own seed counts: the first `s_k` nodes of each block
    /// for `Block`, a uniform draw of `s_k` nodes per block for `Sbm`.
    BlockCounts,
    Sample { kind: SamplingKind, fraction: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    None,
    /// Seeds of label 1 become `ratio · s_2` (block sources) or `ratio` times
    /// the sampled count of the most frequent label (loaded graphs).
    SeedRatio(Vec<f64>),
    /// Block 1 becomes `ratio` times as large as block 2; seeds follow block
    /// sizes with the total seed count unchanged. With `fixed_total`, the
    /// node count is kept and the other blocks share the rest equally.
    SizeRatio { ratios: Vec<f64>, fixed_total: bool },
}

impl Sweep {
    fn points(&self) -> Vec<Option<f64>> {
        match self {
            Sweep::None => vec![None],
            Sweep::SeedRatio(r) | Sweep::SizeRatio { ratios: r, .. } => r.iter().map(|&x| Some(x)).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub source: GraphSource,
    pub policy: SeedPolicy,
    pub variants: Vec<Variant>,
    pub repetitions: usize,
    pub solver: SolverOptions,
    pub sweep: Sweep,
    pub master_seed: u64,
    /// Record wall-clock times; when off, `wall_ms` is written as 0 so
    /// output files are byte-reproducible.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidExperiment("repetitions must be at least 1".into()));
        }
        if self.variants.is_empty() {
            return Err(Error::InvalidExperiment("no variant selected".into()));
        }
        self.solver.validate()?;
        let loaded = matches!(self.source, GraphSource::Loaded { .. });
        if loaded && self.policy == SeedPolicy::BlockCounts {
            return Err(Error::InvalidExperiment(
                "block seed counts need a block-model source".into(),
            ));
        }
        if loaded && matches!(self.sweep, Sweep::SizeRatio { .. }) {
            return Err(Error::InvalidExperiment(
                "a size-ratio sweep needs a block-model source".into(),
            ));
        }
        if let GraphSource::Sbm(params) | GraphSource::Block(params) = &self.source {
            params.validate()?;
            if !matches!(self.sweep, Sweep::None) && params.sizes.len() < 2 {
                return Err(Error::InvalidExperiment("ratio sweeps need at least 2 blocks".into()));
            }
        }
        for x in self.sweep.points().into_iter().flatten() {
            if !(x > 0.0) || !x.is_finite() {
                return Err(Error::InvalidExperiment(format!("sweep value {x} must be positive")));
            }
        }
        Ok(())
    }
}

/// One variant on one task.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub variant: Variant,
    pub point: usize,
    pub sweep: Option<f64>,
    pub rep: usize,
    pub macro_f1: f64,
    pub per_class_f1: Vec<f64>,
    pub accuracy: f64,
    pub wall_ms: f64,
    pub iterations: usize,
    /// Fingerprint of the graph and seeds this row was computed on.
    pub input_hash: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FailedRun {
    pub point: usize,
    pub sweep: Option<f64>,
    pub rep: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub variant: Variant,
    pub sweep: Option<f64>,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
}

/// Raw per-run rows (sorted by point, repetition, variant) and failures.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResultTable {
    pub rows: Vec<RunRecord>,
    pub failures: Vec<FailedRun>,
}

pub const RAW_CSV_HEADER: &str = "variant,sweep,rep,macro_f1,accuracy,wall_ms,iters";
pub const AGGREGATE_CSV_HEADER: &str = "variant,sweep,mean,std";

fn sweep_cell(sweep: Option<f64>) -> String {
    sweep.map_or_else(|| "none".to_string(), |x| x.to_string())
}

impl ResultTable {
    /// Mean and sample standard deviation of macro-F1 per (sweep point,
    /// variant), recomputed from the raw rows.
    pub fn aggregate(&self) -> Vec<AggregateRow> {
        let mut keys: Vec<(usize, Option<f64>, Variant)> = Vec::new();
        for r in &self.rows {
            if !keys.iter().any(|k| k.0 == r.point && k.2 == r.variant) {
                keys.push((r.point, r.sweep, r.variant));
            }
        }
        keys.into_iter()
            .map(|(point, sweep, variant)| {
                let values: Vec<f64> = self
                    .rows
                    .iter()
                    .filter(|r| r.point == point && r.variant == variant)
                    .map(|r| r.macro_f1)
                    .collect();
                let (mean, std) = mean_std(&values);
                AggregateRow {
                    variant,
                    sweep,
                    count: values.len(),
                    mean,
                    std,
                }
            })
            .collect()
    }

    /// Aggregate for one variant at one sweep value (`None` for no sweep).
    pub fn summary(&self, variant: Variant, sweep: Option<f64>) -> Option<AggregateRow> {
        self.aggregate()
            .into_iter()
            .find(|a| a.variant == variant && a.sweep == sweep)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(RAW_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.variant,
                sweep_cell(r.sweep),
                r.rep,
                r.macro_f1,
                r.accuracy,
                r.wall_ms,
                r.iterations
            );
        }
        out
    }

    pub fn aggregate_csv(&self) -> String {
        let mut out = String::from(AGGREGATE_CSV_HEADER);
        out.push('\n');
        for a in self.aggregate() {
            let _ = writeln!(out, "{},{},{},{}", a.variant, sweep_cell(a.sweep), a.mean, a.std);
        }
        out
    }
}

/// Per-task generator: stream `(point << 32) | rep` under the master seed.
pub fn task_rng(master_seed: u64, point: usize, rep: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(((point as u64) << 32) | rep as u64);
    rng
}

fn fingerprint(graph: &Graph, seeds: &SeedSet) -> u64 {
    let mut h = DefaultHasher::new();
    let (offsets, targets, weights) = graph.csr();
    offsets.hash(&mut h);
    targets.hash(&mut h);
    for w in weights {
        w.to_bits().hash(&mut h);
    }
    seeds.hash(&mut h);
    h.finish()
}

fn params_at(params: &BlockModelParams, sweep: &Sweep, value: Option<f64>) -> Result<BlockModelParams> {
    let mut p = params.clone();
    match (sweep, value) {
        (Sweep::SeedRatio(_), Some(r)) => {
            let s1 = ((r * p.seeds[1] as f64).round() as usize).max(1);
            if s1 > p.sizes[0] {
                return Err(Error::InvalidExperiment(format!(
                    "seed ratio {r} needs {s1} seeds in block 1 of size {}",
                    p.sizes[0]
                )));
            }
            p.seeds[0] = s1;
        }
        (Sweep::SizeRatio { fixed_total, .. }, Some(r)) => {
            let total_seeds: usize = p.seeds.iter().sum();
            if *fixed_total {
                let n = p.n() as f64;
                let others = (p.sizes.len() - 1) as f64;
                let n1 = (n * r / (r + others)).round() as usize;
                let rest = (p.n() - n1) / (p.sizes.len() - 1);
                p.sizes = std::iter::once(n1)
                    .chain(std::iter::repeat(rest).take(p.sizes.len() - 1))
                    .collect();
            } else {
                p.sizes[0] = (r * p.sizes[1] as f64).round() as usize;
            }
            p.seeds = sampling::balanced_quotas(&p.sizes, total_seeds);
        }
        _ => {}
    }
    p.validate()?;
    Ok(p)
}

struct Task {
    graph: Arc<Graph>,
    truth: Arc<NodePartition>,
    seeds: SeedSet,
}

fn prepare(cfg: &ExperimentConfig, value: Option<f64>, rng: &mut ChaCha8Rng) -> Result<Task> {
    let graph_seed = rng.next_u64();
    let sample_seed = rng.next_u64();
    let mut sampler = ChaCha8Rng::seed_from_u64(sample_seed);

    let (graph, truth, block_seeds) = match &cfg.source {
        GraphSource::Loaded { graph, truth } => (Arc::clone(graph), Arc::clone(truth), None),
        GraphSource::Sbm(base) => {
            let params = params_at(base, &cfg.sweep, value)?;
            let inst = sbm_generate(&params, graph_seed)?;
            (Arc::new(inst.graph), Arc::new(inst.truth), Some((params, inst.seeds)))
        }
        GraphSource::Block(base) => {
            let params = params_at(base, &cfg.sweep, value)?;
            let inst = build_deterministic_block_graph(&params)?;
            (Arc::new(inst.graph), Arc::new(inst.truth), Some((params, inst.seeds)))
        }
    };

    let seeds = match (&cfg.policy, block_seeds) {
        (SeedPolicy::BlockCounts, Some((_, seeds))) if matches!(cfg.source, GraphSource::Block(_)) => seeds,
        (SeedPolicy::BlockCounts, Some((params, _))) => sampling::sample_seeds_with(
            &truth,
            &graph,
            &SamplingKind::ExplicitCounts(params.seeds.clone()),
            0.0,
            &mut sampler,
        )?,
        (SeedPolicy::BlockCounts, None) => {
            return Err(Error::InvalidExperiment(
                "block seed counts need a block-model source".into(),
            ))
        }
        (SeedPolicy::Sample { kind, fraction }, block) => {
            let mut kind = kind.clone();
            if let (Sweep::SeedRatio(_), Some(r), SamplingKind::ExplicitCounts(counts)) =
                (&cfg.sweep, value, &mut kind)
            {
                if counts.len() >= 2 && block.is_none() {
                    counts[0] = ((r * counts[1] as f64).round() as usize).max(1);
                }
            }
            let seeds = sampling::sample_seeds_with(&truth, &graph, &kind, *fraction, &mut sampler)?;
            match (&cfg.sweep, value, block) {
                (Sweep::SeedRatio(_), Some(r), None) if !matches!(kind, SamplingKind::ExplicitCounts(_)) => {
                    let dominant = dominant_label(&truth);
                    let base = seeds.counts()[dominant as usize - 1];
                    let target = (r * base as f64).round() as usize;
                    sampling::boost_label(&seeds, &truth, dominant, target, &mut sampler)?
                }
                _ => seeds,
            }
        }
    };
    Ok(Task { graph, truth, seeds })
}

/// Most frequent label, ties to the smallest id.
fn dominant_label(truth: &NodePartition) -> u32 {
    let counts = truth.class_counts();
    let mut best = 0;
    for (k, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = k;
        }
    }
    best as u32 + 1
}

fn run_task(
    cfg: &ExperimentConfig,
    point: usize,
    value: Option<f64>,
    rep: usize,
) -> Result<Vec<RunRecord>> {
    let mut rng = task_rng(cfg.master_seed, point, rep);
    let task = prepare(cfg, value, &mut rng)?;
    let started = Instant::now();
    let fields = diffuse_all(&task.graph, &task.seeds, &cfg.solver)?;
    let solve_ms = started.elapsed().as_secs_f64() * 1e3;
    let iterations = fields.iter().map(|f| f.stats.iterations).max().unwrap_or(0);
    let input_hash = fingerprint(&task.graph, &task.seeds);

    let eval_nodes: Vec<usize> = task
        .truth
        .labeled_nodes()
        .filter(|&(node, _)| task.seeds.label_of(node).is_none())
        .map(|(node, _)| node)
        .collect();
    let truth: Vec<u32> = eval_nodes.iter().map(|&i| task.truth.get(i).unwrap_or(0)).collect();

    Ok(cfg
        .variants
        .iter()
        .map(|&variant| {
            let started = Instant::now();
            let classification = decide(&score(&fields, &task.seeds, variant), &task.seeds);
            let pred: Vec<u32> = eval_nodes.iter().map(|&i| classification.labels[i]).collect();
            let eval = evaluate(&pred, &truth, task.truth.k());
            let wall_ms = solve_ms + started.elapsed().as_secs_f64() * 1e3;
            RunRecord {
                variant,
                point,
                sweep: value,
                rep,
                macro_f1: eval.macro_f1,
                per_class_f1: eval.per_class_f1,
                accuracy: eval.accuracy,
                wall_ms: if cfg.timing { wall_ms } else { 0.0 },
                iterations,
                input_hash,
            }
        })
        .collect())
}

/// Runs every `(sweep point, repetition)` task in parallel. A failing task is
/// logged and listed in [`ResultTable::failures`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    let points = cfg.sweep.points();
    let tasks: Vec<(usize, Option<f64>, usize)> = points
        .iter()
        .enumerate()
        .flat_map(|(p, &v)| (0..cfg.repetitions).map(move |r| (p, v, r)))
        .collect();
    let outcomes: Vec<_> = tasks
        .par_iter()
        .map(|&(point, value, rep)| (point, value, rep, run_task(cfg, point, value, rep)))
        .collect();
    let mut table = ResultTable::default();
    for (point, sweep, rep, outcome) in outcomes {
        match outcome {
            Ok(rows) => table.rows.extend(rows),
            Err(e) => {
                log::warn!("point {point} repetition {rep} failed: {e}");
                table.failures.push(FailedRun {
                    point,
                    sweep,
                    rep,
                    error: e.to_string(),
                });
            }
        }
    }
    Ok(table)
}

/// Per-node label sets; an empty set marks an unlabelled node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiLabels {
    sets: Vec<Vec<u32>>,
    k: u32,
}

impl MultiLabels {
    pub fn new(mut sets: Vec<Vec<u32>>, k: u32) -> Result<Self> {
        for (node, set) in sets.iter_mut().enumerate() {
            set.sort_unstable();
            set.dedup();
            if let Some(&l) = set.iter().find(|&&l| l == 0 || l > k) {
                return Err(Error::InvalidSeeds(format!(
                    "node {node} has label {l} outside 1..={k}"
                )));
            }
        }
        Ok(Self { sets, k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn labels_of(&self, node: usize) -> &[u32] {
        &self.sets[node]
    }

    /// Labels by decreasing frequency (ties to the smaller id), zero counts dropped.
    pub fn by_frequency(&self) -> Vec<(u32, usize)> {
        let mut counts = vec![0usize; self.k as usize];
        for set in &self.sets {
            for &l in set {
                counts[l as usize - 1] += 1;
            }
        }
        let mut ranked: Vec<(u32, usize)> = counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(k, c)| (k as u32 + 1, c))
            .collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        ranked
    }

    /// Binary ground truth for one label: 1 = carries `label`, 2 = labelled
    /// without it, unlabelled nodes stay unlabelled.
    pub fn one_vs_rest(&self, label: u32) -> Result<NodePartition> {
        let labels = self
            .sets
            .iter()
            .map(|set| match set.is_empty() {
                true => None,
                false if set.contains(&label) => Some(1),
                false => Some(2),
            })
            .collect();
        NodePartition::new(labels, 2)
    }
}

#[derive(Debug, Clone)]
pub struct BinaryExperimentConfig {
    /// Seed fraction of the labelled nodes, sampled with balanced quotas.
    pub fraction: f64,
    pub variants: Vec<Variant>,
    pub repetitions: usize,
    pub solver: SolverOptions,
    pub master_seed: u64,
    pub timing: bool,
}

/// For each of the `top_labels` most frequent labels, a binary task (label
/// vs. rest among labelled nodes) with balanced seeds. Each row holds the F1
/// of the positive class averaged over those labels in `macro_f1`, and the
/// individual F1 values in `per_class_f1`.
pub fn binary_per_label_experiment(
    g: &Graph,
    labels: &MultiLabels,
    top_labels: usize,
    cfg: &BinaryExperimentConfig,
) -> Result<ResultTable> {
    if labels.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            actual: labels.len(),
        });
    }
    if cfg.repetitions == 0 || cfg.variants.is_empty() || top_labels == 0 {
        return Err(Error::InvalidExperiment(
            "need at least one repetition, variant and label".into(),
        ));
    }
    cfg.solver.validate()?;
    let ranked = labels.by_frequency();
    if ranked.len() < top_labels {
        return Err(Error::InvalidExperiment(format!(
            "asked for the top {top_labels} labels but only {} are present",
            ranked.len()
        )));
    }
    let targets: Vec<u32> = ranked[..top_labels].iter().map(|&(l, _)| l).collect();
    let truths = targets
        .iter()
        .map(|&l| labels.one_vs_rest(l))
        .collect::<Result<Vec<_>>>()?;

    let outcomes: Vec<(usize, Result<Vec<RunRecord>>)> = (0..cfg.repetitions)
        .into_par_iter()
        .map(|rep| (rep, binary_repetition(g, &truths, cfg, rep)))
        .collect();
    let mut table = ResultTable::default();
    for (rep, outcome) in outcomes {
        match outcome {
            Ok(rows) => table.rows.extend(rows),
            Err(e) => {
                log::warn!("repetition {rep} failed: {e}");
                table.failures.push(FailedRun {
                    point: 0,
                    sweep: None,
                    rep,
                    error: e.to_string(),
                });
            }
        }
    }
    Ok(table)
}

fn binary_repetition(
    g: &Graph,
    truths: &[NodePartition],
    cfg: &BinaryExperimentConfig,
    rep: usize,
) -> Result<Vec<RunRecord>> {
    let mut rng = task_rng(cfg.master_seed, 0, rep);
    let nv = cfg.variants.len();
    let mut f1 = vec![Vec::with_capacity(truths.len()); nv];
    let mut acc = vec![0.0; nv];
    let mut wall_ms = vec![0.0; nv];
    let mut iterations = 0;
    let mut hasher = DefaultHasher::new();
    for truth in truths {
        let mut sampler = ChaCha8Rng::seed_from_u64(rng.next_u64());
        let seeds = sampling::sample_seeds_with(truth, g, &SamplingKind::Balanced, cfg.fraction, &mut sampler)?;
        fingerprint(g, &seeds).hash(&mut hasher);
        let started = Instant::now();
        let fields = diffuse_all(g, &seeds, &cfg.solver)?;
        let solve_ms = started.elapsed().as_secs_f64() * 1e3;
        iterations = iterations.max(fields.iter().map(|f| f.stats.iterations).max().unwrap_or(0));
        let eval_nodes: Vec<usize> = truth
            .labeled_nodes()
            .filter(|&(node, _)| seeds.label_of(node).is_none())
            .map(|(node, _)| node)
            .collect();
        let expected: Vec<u32> = eval_nodes.iter().map(|&i| truth.get(i).unwrap_or(0)).collect();
        for (v, &variant) in cfg.variants.iter().enumerate() {
            let started = Instant::now();
            let c = decide(&score(&fields, &seeds, variant), &seeds);
            let pred: Vec<u32> = eval_nodes.iter().map(|&i| c.labels[i]).collect();
            let eval = evaluate(&pred, &expected, 2);
            f1[v].push(eval.per_class_f1[0]);
            acc[v] += eval.accuracy / truths.len() as f64;
            wall_ms[v] += solve_ms + started.elapsed().as_secs_f64() * 1e3;
        }
    }
    let input_hash = hasher.finish();
    Ok(cfg
        .variants
        .iter()
        .enumerate()
        .map(|(v, &variant)| RunRecord {
            variant,
            point: 0,
            sweep: None,
            rep,
            macro_f1: f1[v].iter().sum::<f64>() / f1[v].len() as f64,
            per_class_f1: f1[v].clone(),
            accuracy: acc[v],
            wall_ms: if cfg.timing { wall_ms[v] } else { 0.0 },
            iterations,
            input_hash,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn block_cfg(params: BlockModelParams) -> ExperimentConfig {
        ExperimentConfig {
            source: GraphSource::Block(params),
            policy: SeedPolicy::BlockCounts,
            variants: vec![Variant::Vanilla, Variant::Centered],
            repetitions: 1,
            solver: SolverOptions::exact(),
            sweep: Sweep::None,
            master_seed: 1,
            timing: false,
        }
    }

    #[test]
    fn block_source_rows_and_csv() {
        let params = BlockModelParams::new(vec![50, 50], vec![10, 2], 2.0, 1.0).unwrap();
        let table = run_experiment(&block_cfg(params)).unwrap();
        assert_eq!(table.rows.len(), 2);
        assert!(table.failures.is_empty());
        let centered = &table.rows[1];
        assert_eq!(centered.variant, Variant::Centered);
        assert_eq!(centered.accuracy, 1.0);
        // vanilla labels all 48 interior nodes of block 2 as label 1
        assert!((table.rows[0].accuracy - 40.0 / 88.0).abs() < 1e-12);
        let csv = table.to_csv();
        assert!(csv.starts_with("variant,sweep,rep,macro_f1,accuracy,wall_ms,iters\n"));
        assert!(csv.contains("centered,none,0,1,1,0,0\n"));
        assert_eq!(table.aggregate_csv(), "variant,sweep,mean,std\nvanilla,none,".to_string()
            + &format!("{},0\ncentered,none,1,0\n", table.rows[0].macro_f1));
    }

    #[test]
    fn config_validation() {
        let params = BlockModelParams::new(vec![5, 5], vec![1, 1], 2.0, 1.0).unwrap();
        let mut cfg = block_cfg(params.clone());
        cfg.repetitions = 0;
        assert!(run_experiment(&cfg).is_err());
        let mut cfg = block_cfg(params);
        cfg.variants.clear();
        assert!(run_experiment(&cfg).is_err());
    }

    #[test]
    fn sweep_parameters() {
        let base = BlockModelParams::new(vec![100, 100], vec![5, 5], 2.0, 1.0).unwrap();
        let p = params_at(&base, &Sweep::SeedRatio(vec![3.0]), Some(3.0)).unwrap();
        assert_eq!(p.seeds, vec![15, 5]);
        let sized = Sweep::SizeRatio {
            ratios: vec![4.0],
            fixed_total: true,
        };
        let p = params_at(&base, &sized, Some(4.0)).unwrap();
        assert_eq!(p.sizes, vec![160, 40]);
        assert_eq!(p.seeds, vec![8, 2]);
        let grown = Sweep::SizeRatio {
            ratios: vec![2.0],
            fixed_total: false,
        };
        let p = params_at(&base, &grown, Some(2.0)).unwrap();
        assert_eq!(p.sizes, vec![200, 100]);
        assert_eq!(p.seeds, vec![7, 3]);
    }

    #[test]
    fn task_streams_are_distinct_and_stable() {
        let a = task_rng(7, 0, 0).next_u64();
        assert_eq!(a, task_rng(7, 0, 0).next_u64());
        assert_ne!(a, task_rng(7, 0, 1).next_u64());
        assert_ne!(a, task_rng(7, 1, 0).next_u64());
        assert_ne!(a, task_rng(8, 0, 0).next_u64());
    }

    #[test]
    fn multi_labels() {
        let m = MultiLabels::new(vec![vec![2, 1], vec![], vec![2], vec![3, 2]], 3).unwrap();
        assert_eq!(m.by_frequency(), vec![(2, 3), (1, 1), (3, 1)]);
        let t = m.one_vs_rest(1).unwrap();
        assert_eq!(t.labels(), &[Some(1), None, Some(2), Some(2)]);
        assert!(MultiLabels::new(vec![vec![4]], 3).is_err());
    }
}
