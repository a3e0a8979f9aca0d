//! Sparse weighted undirected graphs in compressed-row form.
//!
//! A [`Graph`] stores its adjacency matrix `A` row by row: for node `i`, the
//! neighbours are `targets[offsets[i]..offsets[i + 1]]` with matching
//! `weights`. Every undirected edge is stored in both rows; a self-loop is
//! stored once on the diagonal and counted once in the degree. Degrees
//! `d = A·1` are cached at construction, so the random-walk operator
//! `P = D⁻¹A` is applied in a single pass over the stored entries.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Immutable sparse weighted undirected graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
}

impl Graph {
    /// Builds a graph from undirected weighted edges.
    ///
    /// Duplicate pairs are summed and `(i, j)` and `(j, i)` name the same edge.
    /// Nodes with zero degree are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut entries = Vec::with_capacity(edges.len() * 2);
        for &(i, j, w) in edges {
            for node in [i, j] {
                if node >= n {
                    return Err(Error::NodeOutOfRange { node, n });
                }
            }
            // NaN fails this test too
            if !(w > 0.0) {
                return Err(Error::NonPositiveWeight { i, j, weight: w });
            }
            entries.push((i, j, w));
            if i != j {
                entries.push((j, i, w));
            }
        }
        // stable, so duplicates are summed in input order in both rows
        entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut offsets = vec![0usize; n + 1];
        let mut targets = Vec::with_capacity(entries.len());
        let mut weights: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, w) in entries {
            if last == Some((i, j)) {
                *weights.last_mut().expect("merged entry exists") += w;
                continue;
            }
            last = Some((i, j));
            offsets[i + 1] += 1;
            targets.push(j);
            weights.push(w);
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }

        let degrees: Vec<f64> = (0..n)
            .map(|i| weights[offsets[i]..offsets[i + 1]].iter().sum())
            .collect();
        if let Some(node) = degrees.iter().position(|&d| d <= 0.0) {
            return Err(Error::IsolatedNode { node });
        }

        Ok(Self {
            n,
            offsets,
            targets,
            weights,
            degrees,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of undirected edges, self-loops included once.
    pub fn num_edges(&self) -> usize {
        let loops = (0..self.n)
            .filter(|&i| self.neighbors(i).any(|(j, _)| j == i))
            .count();
        (self.targets.len() - loops) / 2 + loops
    }

    /// Number of stored adjacency entries (both directions of every edge).
    pub fn num_entries(&self) -> usize {
        self.targets.len()
    }

    pub fn degree(&self, node: usize) -> f64 {
        self.degrees[node]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    pub fn neighbors(&self, node: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.offsets[node]..self.offsets[node + 1];
        self.targets[range.clone()]
            .iter()
            .copied()
            .zip(self.weights[range].iter().copied())
    }

    /// Weight of edge `(i, j)`, zero when absent.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let range = self.offsets[i]..self.offsets[i + 1];
        match self.targets[range.clone()].binary_search(&j) {
            Ok(pos) => self.weights[range.start + pos],
            Err(_) => 0.0,
        }
    }

    /// Raw compressed-row arrays: `(offsets, targets, weights)`.
    pub fn csr(&self) -> (&[usize], &[usize], &[f64]) {
        (&self.offsets, &self.targets, &self.weights)
    }

    /// Every undirected edge once, as `(i, j, w)` with `i <= j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| {
            self.neighbors(i)
                .filter(move |&(j, _)| j >= i)
                .map(move |(j, w)| (i, j, w))
        })
    }

    /// `(P v)_i = (1/d_i) Σ_j A_ij v_j` for a single node.
    #[inline]
    pub fn transition_row(&self, node: usize, v: &[f64]) -> f64 {
        let start = self.offsets[node];
        let end = self.offsets[node + 1];
        let mut acc = 0.0;
        for (&j, &w) in self.targets[start..end].iter().zip(&self.weights[start..end]) {
            acc += w * v[j];
        }
        acc / self.degrees[node]
    }

    /// Applies the random-walk transition operator `P = D⁻¹A` to `v`.
    pub fn transition_apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.n];
        self.transition_apply_into(v, &mut out)?;
        Ok(out)
    }

    pub fn transition_apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: v.len(),
            });
        }
        if out.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: out.len(),
            });
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.transition_row(i, v);
        }
        Ok(())
    }

    /// Component index of every node, plus the number of components.
    /// Components are numbered in order of their smallest node.
    pub fn component_ids(&self) -> (usize, Vec<usize>) {
        let mut ids = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if ids[start] != usize::MAX {
                continue;
            }
            ids[start] = count;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for (v, _) in self.neighbors(u) {
                    if ids[v] == usize::MAX {
                        ids[v] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (count, ids)
    }

    /// Connected components by breadth-first traversal, each sorted ascending.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let (count, ids) = self.component_ids();
        let mut comps = vec![Vec::new(); count];
        for (node, &c) in ids.iter().enumerate() {
            comps[c].push(node);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.component_ids().0 <= 1
    }
}

/// Lifts a directed graph on `n` nodes to an undirected bipartite graph on
/// `2n` nodes: arc `(i, j, w)` becomes edge `(i, n + j, w)`.
///
/// Node `i < n` is the source copy of `i` (outgoing arcs), node `n + i` its
/// destination copy (incoming arcs).
pub fn directed_to_bipartite(n: usize, arcs: &[(usize, usize, f64)]) -> Result<Graph> {
    let mut out_deg = vec![0usize; n];
    let mut in_deg = vec![0usize; n];
    let mut edges = Vec::with_capacity(arcs.len());
    for &(i, j, w) in arcs {
        for node in [i, j] {
            if node >= n {
                return Err(Error::NodeOutOfRange { node, n });
            }
        }
        out_deg[i] += 1;
        in_deg[j] += 1;
        edges.push((i, n + j, w));
    }
    if let Some(node) = out_deg.iter().position(|&d| d == 0) {
        return Err(Error::IsolatedBipartiteCopy {
            node,
            copy: "source",
        });
    }
    if let Some(node) = in_deg.iter().position(|&d| d == 0) {
        return Err(Error::IsolatedBipartiteCopy {
            node,
            copy: "destination",
        });
    }
    Graph::from_edges(2 * n, &edges)
}

/// Optional class labels `1..=k`, one slot per node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodePartition {
    labels: Vec<Option<u32>>,
    k: u32,
}

impl NodePartition {
    pub fn new(labels: Vec<Option<u32>>, k: u32) -> Result<Self> {
        if let Some((node, label)) = labels
            .iter()
            .enumerate()
            .find_map(|(i, l)| l.filter(|&l| l == 0 || l > k).map(|l| (i, l)))
        {
            return Err(Error::InvalidSeeds(format!(
                "node {node} has label {label} outside 1..={k}"
            )));
        }
        Ok(Self { labels, k })
    }

    /// Fully labelled partition; `k` is the largest label.
    pub fn from_dense(labels: &[u32]) -> Result<Self> {
        let k = labels.iter().copied().max().unwrap_or(0);
        Self::new(labels.iter().map(|&l| Some(l)).collect(), k)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn get(&self, node: usize) -> Option<u32> {
        self.labels[node]
    }

    pub fn labels(&self) -> &[Option<u32>] {
        &self.labels
    }

    /// Labelled nodes in ascending order.
    pub fn labeled_nodes(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, l)| l.map(|l| (i, l)))
    }

    pub fn num_labeled(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    /// Node count per label, indexed `0..k` for labels `1..=k`.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.k as usize];
        for (_, l) in self.labeled_nodes() {
            counts[l as usize - 1] += 1;
        }
        counts
    }
}
