#![allow(dead_code)]

use dirichlet_core::Graph;
use proptest::prelude::*;

/// Edges of a random connected weighted graph: a random spanning tree plus
/// extra edges.
pub fn connected_edges(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize, f64)>)> {
    (2..=max_n).prop_flat_map(|n| {
        let parents: Vec<_> = (1..n).map(|i| (0..i, 0.1f64..5.0)).collect();
        let extra = prop::collection::vec((0..n, 0..n, 0.1f64..5.0), 0..3 * n);
        (Just(n), parents, extra).prop_map(|(n, parents, extra)| {
            let mut edges: Vec<_> = parents
                .into_iter()
                .enumerate()
                .map(|(k, (p, w))| (k + 1, p, w))
                .collect();
            edges.extend(extra.into_iter().filter(|(i, j, _)| i != j));
            (n, edges)
        })
    })
}

pub fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    connected_edges(max_n).prop_map(|(n, edges)| Graph::from_edges(n, &edges).unwrap())
}

/// Dense adjacency matrix, row-major.
pub fn dense_adjacency(g: &Graph) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; g.n()]; g.n()];
    for (i, j, w) in g.edges() {
        a[i][j] += w;
        if i != j {
            a[j][i] += w;
        }
    }
    a
}

pub fn sup_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Path graph 0-1-…-(n-1) with unit weights.
pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1, 1.0)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// Two cliques of `size` nodes joined by one edge between node `size-1` and `size`.
pub fn barbell(size: usize) -> Graph {
    let mut edges = Vec::new();
    for base in [0, size] {
        for i in 0..size {
            for j in i + 1..size {
                edges.push((base + i, base + j, 1.0));
            }
        }
    }
    edges.push((size - 1, size, 1.0));
    Graph::from_edges(2 * size, &edges).unwrap()
}
