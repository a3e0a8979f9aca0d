//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the report prints in order; exits nonzero if any check fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use dirichlet_cli::bench::run_config;
use dirichlet_cli::io::{load_edge_list, load_labels, load_seeds, EdgeListOptions, LabelOptions};
use dirichlet_core::block_model::{build_deterministic_block_graph, closed_form_temperatures};
use dirichlet_core::harness::sampling::sample_seeds_with;
use dirichlet_core::solver::IterativeSolver;
use dirichlet_core::{
    classify, classify_binary, residual, run_experiment, sbm_generate, solve_exact, solve_iterative,
    vanilla_consistency_condition, BlockModelParams, DirichletProblem, ExperimentConfig, Graph, GraphSource,
    NodePartition, SamplingKind, SeedPolicy, SeedSet, SolverOptions, Sweep, Threshold, Variant,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ORACLE_TOL: f64 = 1e-10;
const WORKED_TOL: f64 = 1e-12;
const SOLVER_AGREEMENT_TOL: f64 = 1e-8;
const SOLVER_TOL: f64 = 1e-10;
const SOLVER_MAX_SWEEPS: usize = 10_000;
const RESIDUAL_FACTOR: f64 = 10.0;
const SBM_MIN_GAP: f64 = 0.10;
const SBM_MIN_CENTERED: f64 = 0.90;
const KARATE_MAX_ERRORS: usize = 2;
const SWEEP_TIME_RATIO_MAX: f64 = 12.0;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixture(name: &str) -> PathBuf {
    root().join("fixtures").join(name)
}

fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn boundary(seeds: &SeedSet, hot: u32) -> Vec<(usize, f64)> {
    seeds.iter().map(|(i, l)| (i, if l == hot { 1.0 } else { 0.0 })).collect()
}

fn oracle_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut worst: f64 = 0.0;
    let mut worst_mean: f64 = 0.0;
    for _ in 0..50 {
        let k = rng.gen_range(2..=4);
        let sizes: Vec<usize> = (0..k).map(|_| rng.gen_range(2..=200 / k)).collect();
        let seeds: Vec<usize> = sizes.iter().map(|&n| rng.gen_range(1..n)).collect();
        let p = rng.gen_range(0.05..5.0);
        let q = rng.gen_range(0.05..5.0);
        let params = BlockModelParams::new(sizes, seeds, p, q).unwrap();
        let inst = build_deterministic_block_graph(&params).unwrap();
        let blocks = params.block_of_nodes();
        for hot in 1..=k as u32 {
            let closed = closed_form_temperatures(&params, hot).unwrap();
            let problem = DirichletProblem::new(&inst.graph, &boundary(&inst.seeds, hot)).unwrap();
            let exact = solve_exact(&problem).unwrap();
            for (i, &t) in exact.values.iter().enumerate() {
                if inst.seeds.label_of(i).is_none() {
                    worst = worst.max((t - closed.per_block[blocks[i] as usize - 1]).abs());
                }
            }
            worst_mean = worst_mean.max((exact.mean - closed.mean).abs());
        }
    }
    outcome(
        worst <= ORACLE_TOL && worst_mean <= ORACLE_TOL,
        format!("50 parameter sets, max block error {worst:.2e}, max mean error {worst_mean:.2e} (tol {ORACLE_TOL:e})"),
    )
}

fn worked_instance() -> Outcome {
    let params = BlockModelParams::new(vec![2, 2], vec![1, 1], 2.0, 1.0).unwrap();
    let closed = closed_form_temperatures(&params, 1).unwrap();
    let inst = build_deterministic_block_graph(&params).unwrap();
    let problem = DirichletProblem::new(&inst.graph, &boundary(&inst.seeds, 1)).unwrap();
    let exact = solve_exact(&problem).unwrap();
    // node 1 is the non-seed of block 1, node 3 that of block 2
    let checks = [
        (closed.mean, 0.5),
        (closed.per_block[0], 0.6),
        (closed.per_block[1], 0.4),
        (exact.mean, 0.5),
        (exact.values[1], 0.6),
        (exact.values[3], 0.4),
    ];
    let err = checks.iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    outcome(
        err <= WORKED_TOL,
        format!(
            "closed form T̄={} T=({}, {}), exact T̄={} T=({}, {}), max error {err:.1e}",
            closed.mean, closed.per_block[0], closed.per_block[1], exact.mean, exact.values[1], exact.values[3]
        ),
    )
}

fn consistency_grid() -> Outcome {
    let size_pairs = [(20, 20), (200, 20), (20, 200), (60, 20), (20, 60)];
    let seed_pairs = [(1, 1), (2, 1), (5, 1), (10, 1), (1, 2), (1, 5), (1, 10), (3, 3), (10, 10), (4, 2)];
    let weights = [(2.0, 1.0), (1.05, 1.0), (10.0, 1.0), (0.3, 0.01)];
    let mut points = 0;
    let mut failures = Vec::new();
    let mut vanilla_failures = 0;
    for &(n1, n2) in &size_pairs {
        for &(s1, s2) in &seed_pairs {
            for &(p, q) in &weights {
                points += 1;
                let params = BlockModelParams::new(vec![n1, n2], vec![s1, s2], p, q).unwrap();
                let inst = build_deterministic_block_graph(&params).unwrap();
                let blocks = params.block_of_nodes();
                let opts = SolverOptions::exact();
                let (_, c) = classify(&inst.graph, &inst.seeds, Variant::Centered, &opts).unwrap();
                let wrong = (0..blocks.len()).filter(|&i| !c.is_seed[i] && c.labels[i] != blocks[i]).count();
                if wrong > 0 {
                    failures.push(format!("{params:?}: {wrong} wrong"));
                }
                let (_, v) = classify(&inst.graph, &inst.seeds, Variant::Vanilla, &opts).unwrap();
                if (0..blocks.len()).any(|i| !v.is_seed[i] && v.labels[i] != blocks[i]) {
                    vanilla_failures += 1;
                }
            }
        }
    }
    outcome(
        failures.is_empty() && points == 200,
        format!(
            "{points} grid points, centered accuracy 1.0 on {} (vanilla below 1.0 on {vanilla_failures}){}",
            points - failures.len(),
            failures.first().map(|f| format!("; first failure {f}")).unwrap_or_default()
        ),
    )
}

fn vanilla_witness() -> Outcome {
    let params = BlockModelParams::new(vec![50, 50], vec![10, 2], 2.0, 1.0).unwrap();
    let condition = vanilla_consistency_condition(&params, 2, 1).unwrap();
    let inst = build_deterministic_block_graph(&params).unwrap();
    let blocks = params.block_of_nodes();
    let opts = SolverOptions::exact();
    let (_, vanilla) = classify(&inst.graph, &inst.seeds, Variant::Vanilla, &opts).unwrap();
    let (_, centered) = classify(&inst.graph, &inst.seeds, Variant::Centered, &opts).unwrap();
    let block2: Vec<usize> = (0..100).filter(|&i| blocks[i] == 2 && !vanilla.is_seed[i]).collect();
    let vanilla_wrong = block2.iter().filter(|&&i| vanilla.labels[i] != 2).count();
    let centered_wrong = (0..100).filter(|&i| !centered.is_seed[i] && centered.labels[i] != blocks[i]).count();
    outcome(
        !condition && vanilla_wrong == block2.len() && centered_wrong == 0,
        format!(
            "condition for block 2: {condition}; vanilla wrong on {vanilla_wrong}/{} block-2 non-seeds, centered wrong on {centered_wrong}/88 non-seeds",
            block2.len()
        ),
    )
}

struct Fixture {
    name: &'static str,
    graph: Graph,
    seeds: SeedSet,
}

fn load_fixtures() -> Vec<Fixture> {
    let label_opts = LabelOptions::default();
    let mut out = Vec::new();

    let karate = load_edge_list(&fixture("karate.edges"), &EdgeListOptions::default()).unwrap();
    let names = load_labels(&fixture("karate.labels"), &karate, &label_opts).unwrap().names;
    let seeds = load_seeds(&fixture("karate.seeds"), &karate, &names, &label_opts).unwrap();
    out.push(Fixture {
        name: "karate",
        seeds: SeedSet::new(seeds, names.k()).unwrap(),
        graph: karate.graph,
    });

    let weighted = EdgeListOptions {
        weighted: true,
        ..Default::default()
    };
    let block = load_edge_list(&fixture("block.edges"), &weighted).unwrap();
    let names = load_labels(&fixture("block.labels"), &block, &label_opts).unwrap().names;
    let seeds = load_seeds(&fixture("block.seeds"), &block, &names, &label_opts).unwrap();
    out.push(Fixture {
        name: "block",
        seeds: SeedSet::new(seeds, names.k()).unwrap(),
        graph: block.graph,
    });

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let planted = load_edge_list(&fixture("planted.edges"), &EdgeListOptions::default()).unwrap();
    let truth = load_labels(&fixture("planted.labels"), &planted, &label_opts).unwrap().partition().unwrap();
    let seeds = sample_seeds_with(&truth, &planted.graph, &SamplingKind::Uniform, 0.01, &mut rng).unwrap();
    out.push(Fixture {
        name: "planted",
        seeds,
        graph: planted.graph,
    });

    let communities = load_edge_list(&fixture("communities.edges"), &EdgeListOptions::default()).unwrap();
    let multi_opts = LabelOptions {
        multi: true,
        ..Default::default()
    };
    let multi = load_labels(&fixture("communities.labels"), &communities, &multi_opts).unwrap().multi().unwrap();
    let top = multi.by_frequency()[0].0;
    let truth: NodePartition = multi.one_vs_rest(top).unwrap();
    let seeds = sample_seeds_with(&truth, &communities.graph, &SamplingKind::Balanced, 0.01, &mut rng).unwrap();
    out.push(Fixture {
        name: "communities",
        seeds,
        graph: communities.graph,
    });
    out
}

fn solver_equivalence() -> Outcome {
    let opts = SolverOptions::iterative(SOLVER_MAX_SWEEPS, SOLVER_TOL);
    let mut pass = true;
    let mut parts = Vec::new();
    for f in load_fixtures() {
        assert!(f.graph.n() <= 2000 && f.graph.is_connected());
        let mut worst_diff: f64 = 0.0;
        let mut worst_res: f64 = 0.0;
        let mut sweeps = 0;
        for hot in 1..=f.seeds.k() {
            let problem = DirichletProblem::new(&f.graph, &boundary(&f.seeds, hot)).unwrap();
            let it = solve_iterative(&problem, &opts).unwrap();
            let ex = solve_exact(&problem).unwrap();
            worst_diff = worst_diff.max(sup_dist(&it.values, &ex.values));
            worst_res = worst_res.max(residual(&problem, &it.values).unwrap());
            sweeps = sweeps.max(it.stats.iterations);
        }
        let ok = worst_diff <= SOLVER_AGREEMENT_TOL && worst_res <= RESIDUAL_FACTOR * SOLVER_TOL;
        pass &= ok;
        // contraction per sweep, assuming the change decays geometrically from about 1
        let rho = (SOLVER_TOL.ln() / sweeps as f64).exp();
        parts.push(format!(
            "{} (n={}): diff {worst_diff:.1e}, residual {worst_res:.1e}, {sweeps} sweeps, change-to-error factor ~{:.0}",
            f.name,
            f.graph.n(),
            rho / (1.0 - rho)
        ));
    }
    outcome(pass, parts.join("; "))
}

fn sbm_seed_asymmetry() -> Outcome {
    let params = BlockModelParams::new(vec![5000, 5000], vec![250, 250], 1e-3, 1e-4).unwrap();
    let cfg = ExperimentConfig {
        source: GraphSource::Sbm(params),
        policy: SeedPolicy::BlockCounts,
        variants: vec![Variant::Vanilla, Variant::Centered],
        repetitions: 10,
        solver: SolverOptions::default(),
        sweep: Sweep::SeedRatio(vec![1.0, 10.0]),
        master_seed: 2024,
        timing: false,
    };
    let table = run_experiment(&cfg).unwrap();
    let mean = |v, r| table.summary(v, Some(r)).map(|a| a.mean).unwrap_or(f64::NAN);
    let gap = mean(Variant::Centered, 10.0) - mean(Variant::Vanilla, 10.0);
    let centered_1 = mean(Variant::Centered, 1.0);
    outcome(
        table.failures.is_empty() && gap >= SBM_MIN_GAP && centered_1 >= SBM_MIN_CENTERED,
        format!(
            "ratio 10: centered {:.4} vanilla {:.4} gap {gap:.4} (min {SBM_MIN_GAP}); ratio 1: centered {centered_1:.4} (min {SBM_MIN_CENTERED}); {} failed runs",
            mean(Variant::Centered, 10.0),
            mean(Variant::Vanilla, 10.0),
            table.failures.len()
        ),
    )
}

fn karate() -> Outcome {
    let label_opts = LabelOptions::default();
    let edges = load_edge_list(&fixture("karate.edges"), &EdgeListOptions::default()).unwrap();
    let labels = load_labels(&fixture("karate.labels"), &edges, &label_opts).unwrap();
    let truth = labels.partition().unwrap();
    let seeds = load_seeds(&fixture("karate.seeds"), &edges, &labels.names, &label_opts).unwrap();
    let seeds = SeedSet::new(seeds, labels.names.k()).unwrap();
    let errors = |threshold| {
        let c = classify_binary(&edges.graph, &seeds, threshold, &SolverOptions::default()).unwrap();
        (0..edges.graph.n())
            .filter(|&i| !c.is_seed[i] && Some(c.labels[i]) != truth.get(i))
            .map(|i| edges.name_of(i).to_string())
            .collect::<Vec<_>>()
    };
    let centered = errors(Threshold::Mean);
    let half = errors(Threshold::Half);
    outcome(
        centered.len() <= KARATE_MAX_ERRORS,
        format!(
            "centered misclassifies {} of 32 non-seeds {:?} (max {KARATE_MAX_ERRORS}); fixed 0.5 threshold misclassifies {}",
            centered.len(),
            centered,
            half.len()
        ),
    )
}

fn fixtures_centered_vs_vanilla() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["karate", "block", "planted", "communities"] {
        let out = run_config(&root().join("configs").join(format!("{name}.conf")), dir.path()).unwrap();
        let table = out.table.unwrap();
        let c = table.summary(Variant::Centered, None).unwrap();
        let v = table.summary(Variant::Vanilla, None).unwrap();
        let ok = c.count == 10 && v.count == 10 && c.mean >= v.mean;
        pass &= ok;
        parts.push(format!("{name}: centered {:.4} vs vanilla {:.4}", c.mean, v.mean));
    }
    outcome(pass, parts.join("; "))
}

fn bench_determinism() -> Outcome {
    let run = |config: &str, dir: &Path, threads: &str| {
        let status = Command::new(env!("CARGO_BIN_EXE_dirichlet"))
            .args(["bench", "--config"])
            .arg(root().join("configs").join(config))
            .arg("--out-dir")
            .arg(dir)
            .env("DIRICHLET_THREADS", threads)
            .output()
            .unwrap()
            .status;
        assert!(status.success(), "bench {config} failed");
    };
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let configs = ["planted.conf", "karate.conf", "communities.conf", "lemma-grid.conf", "fig2b.conf"];
    for config in configs {
        run(config, a.path(), "1");
        run(config, b.path(), "4");
    }
    let mut files: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    files.sort();
    let differing: Vec<_> = files
        .iter()
        .filter(|f| fs::read(a.path().join(f)).ok() != fs::read(b.path().join(f)).ok())
        .map(|f| f.to_string_lossy().into_owned())
        .collect();
    outcome(
        differing.is_empty() && files.len() == 9,
        format!(
            "{} CSVs from {} configs compared across two runs (1 and 4 threads), {} differ {:?}",
            files.len(),
            configs.len(),
            differing.len(),
            differing
        ),
    )
}

fn median_sweep_time(graph: &Graph, seeds: &SeedSet) -> Duration {
    const SWEEPS: u32 = 10;
    let problem = DirichletProblem::new(graph, &boundary(seeds, 1)).unwrap();
    let mut solver = IterativeSolver::new(&problem);
    solver.sweep();
    let mut times: Vec<Duration> = (0..5)
        .map(|_| {
            let started = Instant::now();
            for _ in 0..SWEEPS {
                solver.sweep();
            }
            started.elapsed() / SWEEPS
        })
        .collect();
    times.sort();
    times[2]
}

fn sweep_complexity() -> Outcome {
    let base = BlockModelParams::new(vec![10_000, 10_000], vec![500, 500], 1e-3, 1e-4).unwrap();
    let dense = BlockModelParams::new(vec![10_000, 10_000], vec![500, 500], 4e-3, 4e-4).unwrap();
    let g1 = sbm_generate(&base, 17).unwrap();
    let g4 = sbm_generate(&dense, 17).unwrap();
    let t1 = median_sweep_time(&g1.graph, &g1.seeds);
    let t4 = median_sweep_time(&g4.graph, &g4.seeds);
    let edge_ratio = g4.graph.num_edges() as f64 / g1.graph.num_edges() as f64;
    let time_ratio = t4.as_secs_f64() / t1.as_secs_f64();
    outcome(
        time_ratio <= SWEEP_TIME_RATIO_MAX,
        format!(
            "m {} -> {} (x{edge_ratio:.2}), median sweep {:.3} ms -> {:.3} ms, ratio {time_ratio:.2} (max {SWEEP_TIME_RATIO_MAX})",
            g1.graph.num_edges(),
            g4.graph.num_edges(),
            t1.as_secs_f64() * 1e3,
            t4.as_secs_f64() * 1e3
        ),
    )
}

type Check = (u32, &'static str, Option<Duration>, fn() -> Outcome);

fn main() {
    let checks: [Check; 10] = [
        (1, "closed-form block temperatures match exact solves", Some(Duration::from_secs(10)), oracle_agreement),
        (2, "worked two-block instance", None, worked_instance),
        (3, "centered classification is exact on the block-model grid", Some(Duration::from_secs(60)), consistency_grid),
        (4, "vanilla failure witness", None, vanilla_witness),
        (5, "iterative and exact solvers agree on fixtures", Some(Duration::from_secs(30)), solver_equivalence),
        (6, "SBM seed asymmetry", Some(Duration::from_secs(300)), sbm_seed_asymmetry),
        (7, "karate club with two seeds", Some(Duration::from_secs(1)), karate),
        (8, "centered at least as good as vanilla on bundled fixtures", None, fixtures_centered_vs_vanilla),
        (9, "bench output is byte-identical across runs", None, bench_determinism),
        (10, "sweep time scales linearly in edges", None, sweep_complexity),
    ];
    let mut failed = 0;
    for (id, name, budget, check) in checks {
        let started = Instant::now();
        let result = check();
        let elapsed = started.elapsed();
        let in_time = budget.map_or(true, |b| elapsed <= b);
        let pass = result.pass && in_time;
        let budget_note = budget.map(|b| format!(" / {}s", b.as_secs())).unwrap_or_default();
        println!(
            "{} criterion {id:>2} {name}: {} [{:.2}s{budget_note}]",
            if pass { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64()
        );
        if !pass {
            failed += 1;
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
