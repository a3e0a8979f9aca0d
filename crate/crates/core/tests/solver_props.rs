mod common;

use common::{connected_graph, path, sup_dist};
use dirichlet_core::solver::IterativeSolver;
use dirichlet_core::{residual, solve_exact, solve_iterative, DirichletProblem, Graph, SolverOptions};
use proptest::prelude::*;

/// Boundary: every third node (at least one, never all), temperatures in [0, 1].
fn boundary_for(n: usize, salt: u64) -> Vec<(usize, f64)> {
    let mut b: Vec<(usize, f64)> = (0..n)
        .filter(|i| i % 3 == 0)
        .map(|i| (i, ((i as u64 * 2654435761 + salt) % 1000) as f64 / 999.0))
        .collect();
    if b.len() == n {
        b.pop();
    }
    b
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn iterative_agrees_with_exact(g in connected_graph(150), salt in any::<u64>()) {
        let b = boundary_for(g.n(), salt);
        let p = DirichletProblem::new(&g, &b).unwrap();
        // the stopping rule bounds the last change, not the error; slowly mixing
        // random graphs need a tighter tolerance to land within 1e-8
        let it = solve_iterative(&p, &SolverOptions::iterative(200_000, 1e-12)).unwrap();
        let ex = solve_exact(&p).unwrap();
        prop_assert!(sup_dist(&it.values, &ex.values) <= 1e-8, "{:?} err {}", it.stats, sup_dist(&it.values, &ex.values));
        prop_assert!(residual(&p, &ex.values).unwrap() <= 1e-12);
        prop_assert!(residual(&p, &it.values).unwrap() <= 1e-6);
        for &(node, t) in &b {
            prop_assert_eq!(it.values[node], t);
            prop_assert_eq!(ex.values[node], t);
        }
    }

    #[test]
    fn maximum_principle_and_monotone_change(g in connected_graph(150), salt in any::<u64>()) {
        let b = boundary_for(g.n(), salt);
        let p = DirichletProblem::new(&g, &b).unwrap();
        let mut solver = IterativeSolver::new(&p);
        let mut last = f64::INFINITY;
        for _ in 0..200 {
            let change = solver.sweep();
            // nonincreasing up to round-off once the iteration has converged
            prop_assert!(change <= last + 1e-14, "change grew: {} -> {}", last, change);
            prop_assert!(solver.values().iter().all(|&t| (0.0..=1.0).contains(&t)));
            last = change;
        }
        let ex = solve_exact(&p).unwrap();
        prop_assert!(ex.values.iter().all(|&t| (-1e-12..=1.0 + 1e-12).contains(&t)));
    }

    #[test]
    fn relabelling_nodes_permutes_the_solution(g in connected_graph(80), salt in any::<u64>()) {
        let n = g.n();
        // rotate-and-reverse permutation
        let perm: Vec<usize> = (0..n).map(|i| (n - 1 - i + salt as usize % n) % n).collect();
        let edges: Vec<_> = g.edges().map(|(i, j, w)| (perm[i], perm[j], w)).collect();
        let h = Graph::from_edges(n, &edges).unwrap();
        let b = boundary_for(n, salt);
        let bp: Vec<_> = b.iter().map(|&(i, t)| (perm[i], t)).collect();
        let tg = solve_exact(&DirichletProblem::new(&g, &b).unwrap()).unwrap();
        let th = solve_exact(&DirichletProblem::new(&h, &bp).unwrap()).unwrap();
        for i in 0..n {
            prop_assert!((tg.values[i] - th.values[perm[i]]).abs() <= 1e-10);
        }
    }

    #[test]
    fn solution_is_linear_in_boundary_values(
        g in connected_graph(80),
        s1 in any::<u64>(),
        s2 in any::<u64>(),
        alpha in -3.0f64..3.0,
        beta in -3.0f64..3.0,
    ) {
        let b1 = boundary_for(g.n(), s1);
        let b2 = boundary_for(g.n(), s2);
        let mix: Vec<_> = b1.iter().zip(&b2).map(|(&(i, x), &(_, y))| (i, alpha * x + beta * y)).collect();
        let solve = |b: &[(usize, f64)]| solve_exact(&DirichletProblem::new(&g, b).unwrap()).unwrap().values;
        let (t1, t2, tm) = (solve(&b1), solve(&b2), solve(&mix));
        for i in 0..g.n() {
            prop_assert!((tm[i] - (alpha * t1[i] + beta * t2[i])).abs() <= 1e-10);
        }
    }
}

#[test]
fn iterative_residual_at_tolerance() {
    // long path converges slowly: the tolerance, not the cap, must stop it
    let g = path(60);
    let p = DirichletProblem::new(&g, &[(0, 1.0), (59, 0.0)]).unwrap();
    let t = solve_iterative(&p, &SolverOptions::iterative(1_000_000, 1e-8)).unwrap();
    assert_eq!(t.stats.stop, dirichlet_core::StopReason::Tolerance);
    assert!(residual(&p, &t.values).unwrap() <= 1e-6);
}
