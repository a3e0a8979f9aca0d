//! Command-line front end for heat-diffusion node classification.
//!
//! The `dirichlet` binary has three subcommands:
//!
//! * `classify` labels the nodes of an edge-list graph from seeds;
//! * `bench` runs an experiment described by a configuration file;
//! * `oracle` prints closed-form block-model temperatures.
//!
//! Exit status is 0 on success, 1 for usage and validation errors, and 2 for
//! numerical failures (a singular system, or a diffusion that stops at
//! `--max-iter` under `--strict`).

pub mod bench;
pub mod classify;
pub mod config;
pub mod error;
pub mod io;
pub mod oracle;

use std::fs;
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};

pub use error::{CliError, Result};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "DIRICHLET_THREADS";

#[derive(Debug, Parser)]
#[command(name = "dirichlet", version, about = "Semi-supervised node classification by heat diffusion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify the nodes of a graph from labelled seeds.
    Classify(classify::ClassifyArgs),
    /// Run a benchmark configuration and write result CSVs.
    Bench(bench::BenchArgs),
    /// Closed-form temperatures of the deterministic block model.
    Oracle(oracle::OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SamplePolicy {
    Uniform,
    Degree,
    Balanced,
}

pub fn parse_mode(s: &str) -> Result<dirichlet_core::SolveMode, String> {
    config::parse_solve_mode(s)
}

pub(crate) fn write_output(path: Option<&Path>, contents: &str) -> Result<()> {
    match path {
        Some(path) => fs::write(path, contents).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

/// Sizes the global thread pool from `DIRICHLET_THREADS`, if set.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size the thread pool: {e}")))
}

pub fn run(cli: &Cli) -> Result<()> {
    configure_threads()?;
    match &cli.command {
        Command::Classify(args) => classify::run(args),
        Command::Bench(args) => bench::run(args),
        Command::Oracle(args) => oracle::run(args),
    }
}
