//! Discrete Dirichlet problem: temperatures fixed on a boundary set, harmonic
//! (`T_i = (P T)_i`) everywhere else.
//!
//! Two routes are provided. [`solve_iterative`] runs Jacobi sweeps of
//! `X ← Q X + R Y` starting from cold interior nodes. [`solve_exact`] assembles
//! the dense system `(I − Q) X = R Y` over the interior and solves it by LU
//! with partial pivoting; it is meant for validation on small graphs.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Interior size above which exact solves are refused by default.
pub const DEFAULT_EXACT_LIMIT: usize = 10_000;

/// Graphs with at least this many nodes get parallel sweeps.
const PARALLEL_SWEEP_MIN_NODES: usize = 16_384;
const SWEEP_CHUNK: usize = 4_096;

/// A graph with a boundary set `S` and one fixed temperature per boundary node.
#[derive(Debug, Clone)]
pub struct DirichletProblem<'g> {
    graph: &'g Graph,
    is_boundary: Vec<bool>,
    initial: Vec<f64>,
    interior: Vec<usize>,
    boundary_len: usize,
}

impl<'g> DirichletProblem<'g> {
    /// `boundary` lists `(node, temperature)` pairs. The set must be a
    /// nonempty strict subset of the nodes, with no node listed twice.
    pub fn new(graph: &'g Graph, boundary: &[(usize, f64)]) -> Result<Self> {
        let n = graph.n();
        if boundary.is_empty() {
            return Err(Error::InvalidBoundary("boundary set is empty".into()));
        }
        let mut is_boundary = vec![false; n];
        let mut initial = vec![0.0; n];
        for &(node, temp) in boundary {
            if node >= n {
                return Err(Error::NodeOutOfRange { node, n });
            }
            if is_boundary[node] {
                return Err(Error::InvalidBoundary(format!(
                    "node {node} is given more than one temperature"
                )));
            }
            if !temp.is_finite() {
                return Err(Error::InvalidBoundary(format!(
                    "node {node} has non-finite temperature {temp}"
                )));
            }
            is_boundary[node] = true;
            initial[node] = temp;
        }
        if boundary.len() == n {
            return Err(Error::InvalidBoundary(
                "boundary covers every node; nothing to solve".into(),
            ));
        }
        let interior = (0..n).filter(|&i| !is_boundary[i]).collect();
        Ok(Self {
            graph,
            is_boundary,
            initial,
            interior,
            boundary_len: boundary.len(),
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        self.is_boundary[node]
    }

    /// Interior (non-boundary) nodes in ascending order.
    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn boundary_len(&self) -> usize {
        self.boundary_len
    }

    /// Fails if some connected component contains no boundary node; the
    /// temperatures there would be undetermined.
    pub fn check_components(&self) -> Result<()> {
        let (count, ids) = self.graph.component_ids();
        if count == 1 {
            return Ok(());
        }
        let mut covered = vec![false; count];
        for (node, &c) in ids.iter().enumerate() {
            if self.is_boundary[node] {
                covered[c] = true;
            }
        }
        if let Some(component) = covered.iter().position(|&c| !c) {
            let size = ids.iter().filter(|&&c| c == component).count();
            let first_node = ids.iter().position(|&c| c == component).unwrap_or(0);
            return Err(Error::ComponentWithoutBoundary {
                component,
                size,
                first_node,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMode {
    Iterative,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Upper bound on Jacobi sweeps.
    pub max_iterations: usize,
    /// Stop once the sup-norm change of a sweep drops below this.
    pub tolerance: f64,
    pub mode: SolveMode,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 100,
            tolerance: 1e-9,
            mode: SolveMode::Iterative,
        }
    }
}

impl SolverOptions {
    pub fn iterative(max_iterations: usize, tolerance: f64) -> Self {
        Self {
            max_iterations,
            tolerance,
            mode: SolveMode::Iterative,
        }
    }

    pub fn exact() -> Self {
        Self {
            mode: SolveMode::Exact,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidOptions("max_iterations must be at least 1".into()));
        }
        if !(self.tolerance >= 0.0) {
            return Err(Error::InvalidOptions(format!(
                "tolerance must be nonnegative, got {}",
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Which condition ended a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Tolerance,
    MaxIterations,
    Exact,
    /// Every node was on the boundary.
    NoInterior,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    /// Sup-norm change of the last sweep (zero for exact solves).
    pub last_change: f64,
    pub stop: StopReason,
}

/// One temperature per node, with the mean over all nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureField {
    pub values: Vec<f64>,
    pub mean: f64,
    pub stats: SolveStats,
}

impl TemperatureField {
    pub fn new(values: Vec<f64>, stats: SolveStats) -> Self {
        let mean = mean(&values);
        Self {
            values,
            mean,
            stats,
        }
    }
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

/// Jacobi iteration state for one problem.
#[derive(Debug)]
pub struct IterativeSolver<'p, 'g> {
    problem: &'p DirichletProblem<'g>,
    current: Vec<f64>,
    next: Vec<f64>,
    iterations: usize,
}

impl<'p, 'g> IterativeSolver<'p, 'g> {
    /// Boundary nodes at their fixed temperature, interior nodes at zero.
    pub fn new(problem: &'p DirichletProblem<'g>) -> Self {
        Self {
            problem,
            current: problem.initial.clone(),
            next: problem.initial.clone(),
            iterations: 0,
        }
    }

    /// One full Jacobi sweep over the interior; returns the sup-norm change.
    pub fn sweep(&mut self) -> f64 {
        let graph = self.problem.graph;
        let is_boundary = &self.problem.is_boundary;
        let current = &self.current;
        let update = |offset: usize, chunk: &mut [f64]| -> f64 {
            let mut change: f64 = 0.0;
            for (k, slot) in chunk.iter_mut().enumerate() {
                let i = offset + k;
                if is_boundary[i] {
                    continue;
                }
                let value = graph.transition_row(i, current);
                change = change.max((value - current[i]).abs());
                *slot = value;
            }
            change
        };
        let change = if graph.n() >= PARALLEL_SWEEP_MIN_NODES {
            self.next
                .par_chunks_mut(SWEEP_CHUNK)
                .enumerate()
                .map(|(c, chunk)| update(c * SWEEP_CHUNK, chunk))
                .reduce(|| 0.0, f64::max)
        } else {
            update(0, &mut self.next)
        };
        std::mem::swap(&mut self.current, &mut self.next);
        self.iterations += 1;
        change
    }

    pub fn values(&self) -> &[f64] {
        &self.current
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn into_values(self) -> Vec<f64> {
        self.current
    }
}

/// Solves with the route selected by `opts.mode`.
pub fn solve(problem: &DirichletProblem<'_>, opts: &SolverOptions) -> Result<TemperatureField> {
    match opts.mode {
        SolveMode::Iterative => solve_iterative(problem, opts),
        SolveMode::Exact => solve_exact(problem),
    }
}

/// Jacobi sweeps until the change drops below `opts.tolerance` or
/// `opts.max_iterations` sweeps have run.
pub fn solve_iterative(
    problem: &DirichletProblem<'_>,
    opts: &SolverOptions,
) -> Result<TemperatureField> {
    opts.validate()?;
    problem.check_components()?;
    let mut solver = IterativeSolver::new(problem);
    let mut last_change = f64::INFINITY;
    let mut stop = StopReason::MaxIterations;
    while solver.iterations() < opts.max_iterations {
        last_change = solver.sweep();
        if last_change < opts.tolerance {
            stop = StopReason::Tolerance;
            break;
        }
    }
    let stats = SolveStats {
        iterations: solver.iterations(),
        last_change,
        stop,
    };
    Ok(TemperatureField::new(solver.into_values(), stats))
}

pub fn solve_exact(problem: &DirichletProblem<'_>) -> Result<TemperatureField> {
    solve_exact_with_limit(problem, DEFAULT_EXACT_LIMIT)
}

/// Dense direct solve of `(I − Q) X = R Y`, refusing more than `limit` unknowns.
pub fn solve_exact_with_limit(
    problem: &DirichletProblem<'_>,
    limit: usize,
) -> Result<TemperatureField> {
    let interior = problem.interior();
    let unknowns = interior.len();
    if unknowns > limit {
        return Err(Error::TooLargeForExact { unknowns, limit });
    }
    problem.check_components()?;

    let graph = problem.graph;
    let mut index = vec![usize::MAX; graph.n()];
    for (r, &i) in interior.iter().enumerate() {
        index[i] = r;
    }
    let mut system = DMatrix::<f64>::identity(unknowns, unknowns);
    let mut rhs = DVector::<f64>::zeros(unknowns);
    for (r, &i) in interior.iter().enumerate() {
        let d = graph.degree(i);
        for (j, w) in graph.neighbors(i) {
            let pij = w / d;
            if problem.is_boundary[j] {
                rhs[r] += pij * problem.initial[j];
            } else {
                system[(r, index[j])] -= pij;
            }
        }
    }
    let solution = system.lu().solve(&rhs).ok_or(Error::SingularSystem)?;
    if solution.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularSystem);
    }

    let mut values = problem.initial.clone();
    for (r, &i) in interior.iter().enumerate() {
        values[i] = solution[r];
    }
    let stats = SolveStats {
        iterations: 0,
        last_change: 0.0,
        stop: StopReason::Exact,
    };
    Ok(TemperatureField::new(values, stats))
}

/// Harmonicity defect: `max_{i ∉ S} |T_i − (P T)_i|`.
pub fn residual(problem: &DirichletProblem<'_>, values: &[f64]) -> Result<f64> {
    let graph = problem.graph;
    if values.len() != graph.n() {
        return Err(Error::DimensionMismatch {
            expected: graph.n(),
            actual: values.len(),
        });
    }
    Ok(problem
        .interior
        .iter()
        .map(|&i| (values[i] - graph.transition_row(i, values)).abs())
        .fold(0.0, f64::max))
}
