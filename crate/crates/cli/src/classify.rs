use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use dirichlet_core::classifier::{decide, diffuse_all, score};
use dirichlet_core::{
    residual, sample_seeds, DirichletProblem, SamplingKind, SamplingPolicy, SeedSet, SolverOptions, StopReason,
    Variant,
};

use crate::error::{CliError, Result};
use crate::io::{self, Delimiter, EdgeListOptions, LabelNames, LabelOptions, Side};
use crate::{parse_mode, write_output, SamplePolicy};

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("seeding").required(true).args(["seeds_file", "sample"])))]
pub struct ClassifyArgs {
    /// Edge list: `src dst [weight]` per line.
    #[arg(long)]
    pub graph: PathBuf,
    /// Label file: `node label` per line. Required with --sample.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Seed file: `node label` per line.
    #[arg(long)]
    pub seeds_file: Option<PathBuf>,
    /// Draw seeds from the labelled nodes instead of reading them.
    #[arg(long, value_enum, requires = "labels")]
    pub sample: Option<SamplePolicy>,
    /// Fraction of labelled nodes to seed with --sample.
    #[arg(long, default_value_t = 0.01)]
    pub fraction: f64,
    #[arg(long, default_value = "centered")]
    pub variant: Variant,
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// `iterative` (Jacobi sweeps) or `exact` (dense solve, small graphs).
    #[arg(long, default_value = "iterative", value_parser = parse_mode)]
    pub mode: dirichlet_core::SolveMode,
    /// Output CSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Random seed for --sample.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Exit with status 2 if a diffusion stops at --max-iter before reaching --tol.
    #[arg(long)]
    pub strict: bool,
    /// Read arcs and lift the graph to its bipartite form.
    #[arg(long)]
    pub directed: bool,
    /// Read the third column as the edge weight.
    #[arg(long)]
    pub weighted: bool,
    /// tab, comma or space; detected from the first line when omitted.
    #[arg(long)]
    pub delimiter: Option<Delimiter>,
    #[arg(long, default_value = "#")]
    pub comment: String,
    /// Copies of a directed graph to classify: source or destination.
    #[arg(long, default_value = "source")]
    pub side: Side,
}

pub fn run(args: &ClassifyArgs) -> Result<()> {
    let started = Instant::now();
    let edge_opts = EdgeListOptions {
        directed: args.directed,
        weighted: args.weighted,
        comment_prefix: args.comment.clone(),
        delimiter: args.delimiter,
    };
    let label_opts = LabelOptions {
        comment_prefix: args.comment.clone(),
        delimiter: args.delimiter,
        multi: false,
        side: args.side,
    };
    let edges = io::load_edge_list(&args.graph, &edge_opts)?;
    let labels = match &args.labels {
        Some(path) => Some(io::load_labels(path, &edges, &label_opts)?),
        None => None,
    };
    let names: LabelNames = match (&labels, &args.seeds_file) {
        (Some(l), _) => l.names.clone(),
        (None, Some(path)) => io::seed_file_names(path, &label_opts)?,
        (None, None) => return Err(CliError::Usage("--sample needs --labels".into())),
    };

    let seeds = match (&args.seeds_file, args.sample) {
        (Some(path), _) => SeedSet::new(io::load_seeds(path, &edges, &names, &label_opts)?, names.k())?,
        (None, Some(policy)) => {
            let truth = labels
                .as_ref()
                .ok_or_else(|| CliError::Usage("--sample needs --labels".into()))?
                .partition()?;
            let kind = match policy {
                SamplePolicy::Uniform => SamplingKind::Uniform,
                SamplePolicy::Degree => SamplingKind::Degree,
                SamplePolicy::Balanced => SamplingKind::Balanced,
            };
            sample_seeds(&truth, &edges.graph, &SamplingPolicy::new(kind, args.fraction, args.seed))?
        }
        (None, None) => return Err(CliError::Usage("give --seeds-file or --sample".into())),
    };

    let opts = SolverOptions {
        max_iterations: args.max_iter,
        tolerance: args.tol,
        mode: args.mode,
    };
    let solve_started = Instant::now();
    let fields = diffuse_all(&edges.graph, &seeds, &opts)?;
    let classification = decide(&score(&fields, &seeds, args.variant), &seeds);
    let solve_ms = solve_started.elapsed().as_secs_f64() * 1e3;

    let mut worst_residual: f64 = 0.0;
    if seeds.len() < edges.graph.n() {
        for (idx, field) in fields.iter().enumerate() {
            let hot = idx as u32 + 1;
            let boundary: Vec<(usize, f64)> = seeds
                .iter()
                .map(|(node, l)| (node, if l == hot { 1.0 } else { 0.0 }))
                .collect();
            let problem = DirichletProblem::new(&edges.graph, &boundary)?;
            worst_residual = worst_residual.max(residual(&problem, &field.values)?);
        }
    }

    let mut csv = String::from("node_id,label,confidence\n");
    let mut rows = 0usize;
    for node in edges.nodes_on(args.side) {
        if classification.is_seed[node] {
            continue;
        }
        let label = names.name(classification.labels[node]);
        let _ = writeln!(csv, "{},{},{}", edges.name_of(node), label, classification.confidence[node]);
        rows += 1;
    }
    write_output(args.out.as_deref(), &csv)?;

    let iterations = fields.iter().map(|f| f.stats.iterations).max().unwrap_or(0);
    let unconverged = fields.iter().filter(|f| f.stats.stop == StopReason::MaxIterations).count();
    eprintln!(
        "{} {} nodes with {} labels from {} seeds: iterations {}, residual {:.3e}, solve {:.1} ms, total {:.1} ms",
        args.variant,
        rows,
        names.k(),
        seeds.len(),
        iterations,
        worst_residual,
        solve_ms,
        started.elapsed().as_secs_f64() * 1e3
    );
    if unconverged > 0 {
        let last = fields.iter().map(|f| f.stats.last_change).fold(0.0, f64::max);
        let message = format!(
            "{unconverged} of {} diffusions stopped after {} sweeps with change {last:.3e} > tol {:e}",
            fields.len(),
            args.max_iter,
            args.tol
        );
        if args.strict {
            return Err(CliError::NotConverged(message));
        }
        log::warn!("{message}");
    }
    Ok(())
}
