//! Benchmark configuration files.
//!
//! One `key = value` pair per line; `#` starts a comment line. Lists are
//! comma-separated, and a numeric list may use an inclusive integer range
//! `a..b`. Relative dataset paths are resolved against the directory of the
//! configuration file. See the README for the full key reference.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use dirichlet_core::harness::BinaryExperimentConfig;
use dirichlet_core::{
    BlockModelParams, ExperimentConfig, GraphSource, SamplingKind, SeedPolicy, SolveMode, SolverOptions, Sweep,
    Variant,
};

use crate::error::{CliError, Result};
use crate::io::{Delimiter, DatasetSpec, EdgeListOptions, LabelOptions, Side};

const COMMON_KEYS: &[&str] = &["name", "kind", "master_seed"];
const RUN_KEYS: &[&str] = &["repetitions", "variants", "max_iter", "tol", "mode", "timing"];
const DATASET_KEYS: &[&str] = &["graph", "labels", "directed", "weighted", "delimiter", "comment", "side"];
const EXPERIMENT_KEYS: &[&str] = &[
    "source",
    "sizes",
    "seeds",
    "p",
    "q",
    "sampling",
    "fraction",
    "counts",
    "sweep",
    "sweep_values",
    "fixed_total",
];
const BINARY_KEYS: &[&str] = &["fraction", "top_labels"];
const GRID_KEYS: &[&str] = &["points", "max_nodes", "max_blocks"];

#[derive(Debug, Clone)]
pub enum SourceSpec {
    Sbm(BlockModelParams),
    Block(BlockModelParams),
    Dataset(DatasetSpec),
}

/// An experiment whose dataset, if any, is loaded when it runs.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub source: SourceSpec,
    pub policy: SeedPolicy,
    pub variants: Vec<Variant>,
    pub repetitions: usize,
    pub solver: SolverOptions,
    pub sweep: Sweep,
    pub master_seed: u64,
    pub timing: bool,
}

impl ExperimentPlan {
    pub fn build(&self) -> Result<ExperimentConfig> {
        let source = match &self.source {
            SourceSpec::Sbm(p) => GraphSource::Sbm(p.clone()),
            SourceSpec::Block(p) => GraphSource::Block(p.clone()),
            SourceSpec::Dataset(spec) => {
                let bundle = spec.load()?;
                GraphSource::Loaded {
                    graph: Arc::new(bundle.edges.graph),
                    truth: Arc::new(bundle.labels.partition()?),
                }
            }
        };
        Ok(ExperimentConfig {
            source,
            policy: self.policy.clone(),
            variants: self.variants.clone(),
            repetitions: self.repetitions,
            solver: self.solver,
            sweep: self.sweep.clone(),
            master_seed: self.master_seed,
            timing: self.timing,
        })
    }
}

/// Random block-model parameter sets checked against the closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub points: usize,
    pub max_nodes: usize,
    pub max_blocks: usize,
    pub master_seed: u64,
}

#[derive(Debug, Clone)]
pub enum Job {
    Experiment(ExperimentPlan),
    BinaryPerLabel {
        dataset: DatasetSpec,
        top_labels: usize,
        cfg: BinaryExperimentConfig,
    },
    LemmaGrid(GridConfig),
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Prefix of the output files; defaults to the file stem.
    pub name: String,
    pub job: Job,
}

struct Entries {
    values: BTreeMap<String, (usize, String)>,
    problems: Vec<String>,
    base: PathBuf,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.values.get(key)
    }

    fn get<T: FromStr>(&mut self, key: &str, default: T) -> T
    where
        T::Err: std::fmt::Display,
    {
        self.opt(key).unwrap_or(default)
    }

    fn opt<T: FromStr>(&mut self, key: &str) -> Option<T>
    where
        T::Err: std::fmt::Display,
    {
        let (line, raw) = self.values.get(key)?.clone();
        match raw.parse::<T>() {
            Ok(v) => Some(v),
            Err(e) => {
                self.problems.push(format!("line {line}: `{key}`: cannot parse `{raw}`: {e}"));
                None
            }
        }
    }

    fn required<T: FromStr>(&mut self, key: &str, context: &str) -> Option<T>
    where
        T::Err: std::fmt::Display,
    {
        if self.values.contains_key(key) {
            self.opt(key)
        } else {
            self.problems.push(format!("missing key `{key}` ({context})"));
            None
        }
    }

    fn list<T: FromStr>(&mut self, key: &str) -> Option<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        let (line, raw) = self.values.get(key)?.clone();
        match parse_list(&raw) {
            Ok(v) => Some(v),
            Err(e) => {
                self.problems.push(format!("line {line}: `{key}`: {e}"));
                None
            }
        }
    }

    fn required_list<T: FromStr>(&mut self, key: &str, context: &str) -> Option<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        if self.values.contains_key(key) {
            self.list(key)
        } else {
            self.problems.push(format!("missing key `{key}` ({context})"));
            None
        }
    }

    fn problem(&mut self, key: &str, message: impl std::fmt::Display) {
        match self.values.get(key) {
            Some((line, _)) => self.problems.push(format!("line {line}: `{key}`: {message}")),
            None => self.problems.push(format!("`{key}`: {message}")),
        }
    }

    fn path(&mut self, key: &str, context: &str) -> Option<PathBuf> {
        let raw: String = self.required(key, context)?;
        let p = PathBuf::from(raw);
        Some(if p.is_absolute() { p } else { self.base.join(p) })
    }
}

/// Comma-separated values; an integer range `a..b` expands inclusively.
fn parse_list<T: FromStr>(raw: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    let mut out = Vec::new();
    for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((a, b)) = item.split_once("..") {
            let (a, b): (i64, i64) = match (a.trim().parse(), b.trim().parse()) {
                (Ok(a), Ok(b)) if a <= b => (a, b),
                _ => return Err(format!("bad range `{item}`")),
            };
            for x in a..=b {
                out.push(x.to_string().parse().map_err(|e| format!("`{x}`: {e}"))?);
            }
        } else {
            out.push(item.parse().map_err(|e| format!("`{item}`: {e}"))?);
        }
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

struct Flag(bool);

impl FromStr for Flag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "true" | "yes" | "1" => Ok(Flag(true)),
            "false" | "no" | "0" => Ok(Flag(false)),
            _ => Err("expected true or false".into()),
        }
    }
}

struct Mode(SolveMode);

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "iterative" => Ok(Mode(SolveMode::Iterative)),
            "exact" => Ok(Mode(SolveMode::Exact)),
            _ => Err("expected iterative or exact".into()),
        }
    }
}

pub fn parse_solve_mode(s: &str) -> Result<SolveMode, String> {
    s.parse::<Mode>().map(|m| m.0)
}

pub fn load(path: &Path) -> Result<BenchConfig> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text, path)
}

pub fn parse(text: &str, path: &Path) -> Result<BenchConfig> {
    let mut values = BTreeMap::new();
    let mut problems = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            problems.push(format!("line {line_no}: expected `key = value`, got `{line}`"));
            continue;
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if let Some((first, _)) = values.get(&key) {
            problems.push(format!("line {line_no}: `{key}` already set on line {first}"));
            continue;
        }
        values.insert(key, (line_no, value));
    }
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut e = Entries {
        values,
        problems,
        base,
    };

    let kind: String = e.get("kind", "experiment".to_string());
    let allowed: Vec<&str> = match kind.as_str() {
        "experiment" => [COMMON_KEYS, RUN_KEYS, EXPERIMENT_KEYS, DATASET_KEYS].concat(),
        "binary_per_label" => [COMMON_KEYS, RUN_KEYS, BINARY_KEYS, DATASET_KEYS].concat(),
        "lemma_grid" => [COMMON_KEYS, GRID_KEYS].concat(),
        other => {
            e.problem("kind", format!("unknown kind `{other}` (expected experiment, binary_per_label or lemma_grid)"));
            Vec::new()
        }
    };
    let known: Vec<&str> = [COMMON_KEYS, RUN_KEYS, DATASET_KEYS, EXPERIMENT_KEYS, BINARY_KEYS, GRID_KEYS].concat();
    if !allowed.is_empty() {
        let stray: Vec<(String, usize)> = e
            .values
            .iter()
            .filter(|(k, _)| !allowed.contains(&k.as_str()))
            .map(|(k, (line, _))| (k.clone(), *line))
            .collect();
        for (key, line) in stray {
            if known.contains(&key.as_str()) {
                e.problems.push(format!("line {line}: `{key}` does not apply to kind `{kind}`"));
            } else {
                e.problems.push(format!("line {line}: unknown key `{key}`"));
            }
        }
    }

    let name = e.get(
        "name",
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "bench".into()),
    );
    let master_seed: u64 = e.get("master_seed", 0);
    let job = match kind.as_str() {
        "experiment" => experiment(&mut e, master_seed).map(Job::Experiment),
        "binary_per_label" => binary(&mut e, master_seed),
        "lemma_grid" => Some(Job::LemmaGrid(GridConfig {
            points: e.get("points", 50),
            max_nodes: e.get("max_nodes", 200),
            max_blocks: e.get("max_blocks", 4),
            master_seed,
        })),
        _ => None,
    };
    if let Some(Job::LemmaGrid(g)) = &job {
        if g.points == 0 || g.max_blocks < 2 || g.max_nodes < 2 * g.max_blocks {
            e.problems
                .push("lemma grid needs points ≥ 1, max_blocks ≥ 2 and max_nodes ≥ 2·max_blocks".into());
        }
    }
    match job {
        Some(job) if e.problems.is_empty() => Ok(BenchConfig { name, job }),
        _ => Err(CliError::Config {
            path: path.to_path_buf(),
            problems: e.problems,
        }),
    }
}

struct Run {
    variants: Vec<Variant>,
    repetitions: usize,
    solver: SolverOptions,
    timing: bool,
}

fn run_keys(e: &mut Entries) -> Run {
    let variants = e.list::<Variant>("variants").unwrap_or_else(|| vec![Variant::Vanilla, Variant::Centered]);
    let repetitions: usize = e.get("repetitions", 10);
    if repetitions == 0 {
        e.problem("repetitions", "must be at least 1");
    }
    let defaults = SolverOptions::default();
    let solver = SolverOptions {
        max_iterations: e.get("max_iter", defaults.max_iterations),
        tolerance: e.get("tol", defaults.tolerance),
        mode: e.get("mode", Mode(defaults.mode)).0,
    };
    if let Err(err) = solver.validate() {
        e.problems.push(err.to_string());
    }
    let timing = e.get("timing", Flag(false)).0;
    Run {
        variants,
        repetitions,
        solver,
        timing,
    }
}

fn dataset(e: &mut Entries, context: &str) -> Option<DatasetSpec> {
    let graph = e.path("graph", context);
    let labels = e.path("labels", context);
    let delimiter: Option<Delimiter> = e.opt("delimiter");
    let comment_prefix = e.get("comment", "#".to_string());
    let edge_options = EdgeListOptions {
        directed: e.get("directed", Flag(false)).0,
        weighted: e.get("weighted", Flag(false)).0,
        comment_prefix: comment_prefix.clone(),
        delimiter,
    };
    let label_options = LabelOptions {
        comment_prefix,
        delimiter,
        multi: false,
        side: e.get("side", Side::Source),
    };
    Some(DatasetSpec {
        graph: graph?,
        labels: labels?,
        edge_options,
        label_options,
    })
}

fn block_params(e: &mut Entries, context: &str) -> Option<BlockModelParams> {
    let sizes = e.required_list::<usize>("sizes", context);
    let seeds = e.required_list::<usize>("seeds", context);
    let p = e.required::<f64>("p", context);
    let q = e.required::<f64>("q", context);
    match BlockModelParams::new(sizes?, seeds?, p?, q?) {
        Ok(params) => Some(params),
        Err(err) => {
            e.problems.push(format!("block model: {err}"));
            None
        }
    }
}

fn experiment(e: &mut Entries, master_seed: u64) -> Option<ExperimentPlan> {
    let run = run_keys(e);
    let source_kind: Option<String> = e.required("source", "sbm, block or dataset");
    let source = match source_kind.as_deref() {
        Some("sbm") => block_params(e, "needed by source = sbm").map(SourceSpec::Sbm),
        Some("block") => block_params(e, "needed by source = block").map(SourceSpec::Block),
        Some("dataset") => dataset(e, "needed by source = dataset").map(SourceSpec::Dataset),
        Some(other) => {
            e.problem("source", format!("unknown source `{other}` (expected sbm, block or dataset)"));
            None
        }
        None => None,
    };
    let is_dataset = matches!(source_kind.as_deref(), Some("dataset"));
    for key in ["sizes", "seeds", "p", "q"] {
        if is_dataset && e.raw(key).is_some() {
            e.problem(key, "does not apply to source = dataset");
        }
    }
    if !is_dataset {
        for key in DATASET_KEYS {
            if e.raw(key).is_some() {
                e.problem(key, "only applies to source = dataset");
            }
        }
    }

    let default_sampling = if is_dataset { "uniform" } else { "block_counts" };
    let sampling: String = e.get("sampling", default_sampling.to_string());
    let fraction: f64 = e.get("fraction", 0.01);
    if !(fraction > 0.0 && fraction <= 1.0) {
        e.problem("fraction", "must lie in (0, 1]");
    }
    let policy = match sampling.as_str() {
        "block_counts" => Some(SeedPolicy::BlockCounts),
        "uniform" => Some(SeedPolicy::Sample {
            kind: SamplingKind::Uniform,
            fraction,
        }),
        "degree" => Some(SeedPolicy::Sample {
            kind: SamplingKind::Degree,
            fraction,
        }),
        "balanced" => Some(SeedPolicy::Sample {
            kind: SamplingKind::Balanced,
            fraction,
        }),
        "explicit" => e
            .required_list::<usize>("counts", "needed by sampling = explicit")
            .map(|counts| SeedPolicy::Sample {
                kind: SamplingKind::ExplicitCounts(counts),
                fraction,
            }),
        other => {
            e.problem(
                "sampling",
                format!("unknown policy `{other}` (expected block_counts, uniform, degree, balanced or explicit)"),
            );
            None
        }
    };
    if is_dataset && sampling == "block_counts" {
        e.problem("sampling", "block_counts needs a block-model source");
    }
    if sampling != "explicit" && e.raw("counts").is_some() {
        e.problem("counts", "only applies to sampling = explicit");
    }

    let sweep_kind: String = e.get("sweep", "none".to_string());
    let sweep = match sweep_kind.as_str() {
        "none" => {
            for key in ["sweep_values", "fixed_total"] {
                if e.raw(key).is_some() {
                    e.problem(key, "needs a sweep");
                }
            }
            Some(Sweep::None)
        }
        "seed_ratio" => e
            .required_list::<f64>("sweep_values", "needed by the sweep")
            .map(Sweep::SeedRatio),
        "size_ratio" => {
            let fixed_total = e.get("fixed_total", Flag(false)).0;
            e.required_list::<f64>("sweep_values", "needed by the sweep")
                .map(|ratios| Sweep::SizeRatio { ratios, fixed_total })
        }
        other => {
            e.problem("sweep", format!("unknown sweep `{other}` (expected none, seed_ratio or size_ratio)"));
            None
        }
    };
    if is_dataset && sweep_kind == "size_ratio" {
        e.problem("sweep", "size_ratio needs a block-model source");
    }
    Some(ExperimentPlan {
        source: source?,
        policy: policy?,
        variants: run.variants,
        repetitions: run.repetitions,
        solver: run.solver,
        sweep: sweep?,
        master_seed,
        timing: run.timing,
    })
}

fn binary(e: &mut Entries, master_seed: u64) -> Option<Job> {
    let run = run_keys(e);
    let mut dataset = dataset(e, "needed by kind = binary_per_label");
    if let Some(d) = dataset.as_mut() {
        d.label_options.multi = true;
    }
    let fraction: f64 = e.get("fraction", 0.01);
    if !(fraction > 0.0 && fraction <= 1.0) {
        e.problem("fraction", "must lie in (0, 1]");
    }
    let top_labels: usize = e.get("top_labels", 3);
    if top_labels == 0 {
        e.problem("top_labels", "must be at least 1");
    }
    Some(Job::BinaryPerLabel {
        dataset: dataset?,
        top_labels,
        cfg: BinaryExperimentConfig {
            fraction,
            variants: run.variants,
            repetitions: run.repetitions,
            solver: run.solver,
            master_seed,
            timing: run.timing,
        },
    })
}
