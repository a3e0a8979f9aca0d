//! One-vs-all heat-diffusion classifiers.
//!
//! For every label `k`, the seeds of `k` are held at temperature 1 and all
//! other seeds at 0; the resulting harmonic field `T⁽ᵏ⁾` scores label `k`.
//! The scoring rule is the [`Variant`]:
//!
//! * `Vanilla` compares raw temperatures.
//! * `Weighted` multiplies `T⁽ᵏ⁾` by the seed share `s_k / s` of label `k`.
//! * `Centered` subtracts the mean of `T⁽ᵏ⁾` over all nodes first.
//!
//! Each node then takes the label with the largest score, ties going to the
//! smallest label id.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::solver::{self, DirichletProblem, SolveStats, SolverOptions, StopReason, TemperatureField};

/// Labelled seed nodes with labels in `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeedSet {
    seeds: Vec<(usize, u32)>,
    k: u32,
}

impl SeedSet {
    /// Seeds are kept sorted by node id. A node may appear only once.
    pub fn new(mut seeds: Vec<(usize, u32)>, k: u32) -> Result<Self> {
        if seeds.is_empty() {
            return Err(Error::InvalidSeeds("seed set is empty".into()));
        }
        if k == 0 {
            return Err(Error::InvalidSeeds("number of labels must be positive".into()));
        }
        seeds.sort_unstable();
        for w in seeds.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidSeeds(format!(
                    "node {} is seeded more than once",
                    w[0].0
                )));
            }
        }
        if let Some(&(node, label)) = seeds.iter().find(|(_, l)| *l == 0 || *l > k) {
            return Err(Error::InvalidSeeds(format!(
                "node {node} has label {label} outside 1..={k}"
            )));
        }
        Ok(Self { seeds, k })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.seeds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.seeds.iter().copied()
    }

    pub fn label_of(&self, node: usize) -> Option<u32> {
        self.seeds
            .binary_search_by_key(&node, |&(n, _)| n)
            .ok()
            .map(|pos| self.seeds[pos].1)
    }

    /// Seed count per label, indexed `0..k`.
    pub fn counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.k as usize];
        for &(_, l) in &self.seeds {
            counts[l as usize - 1] += 1;
        }
        counts
    }

    /// Fails on the first label without any seed.
    pub fn ensure_every_label(&self) -> Result<()> {
        match self.counts().iter().position(|&c| c == 0) {
            Some(idx) => Err(Error::LabelWithoutSeed {
                label: idx as u32 + 1,
            }),
            None => Ok(()),
        }
    }

    fn check_nodes(&self, n: usize) -> Result<()> {
        match self.seeds.last() {
            Some(&(node, _)) if node >= n => Err(Error::NodeOutOfRange { node, n }),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Vanilla,
    Weighted,
    Centered,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Vanilla, Variant::Weighted, Variant::Centered];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Vanilla => "vanilla",
            Variant::Weighted => "weighted",
            Variant::Centered => "centered",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "vanilla" => Ok(Variant::Vanilla),
            "weighted" => Ok(Variant::Weighted),
            "centered" => Ok(Variant::Centered),
            other => Err(format!(
                "unknown variant `{other}` (expected vanilla, weighted or centered)"
            )),
        }
    }
}

/// Dense `n × K` scores, stored column by column (one column per label).
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    columns: Vec<Vec<f64>>,
    variant: Variant,
}

impl ScoreMatrix {
    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn k(&self) -> u32 {
        self.columns.len() as u32
    }

    pub fn n(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    /// Scores of label `label` (1-based).
    pub fn column(&self, label: u32) -> &[f64] {
        &self.columns[label as usize - 1]
    }

    pub fn get(&self, node: usize, label: u32) -> f64 {
        self.columns[label as usize - 1][node]
    }
}

/// Label and confidence for every node.
///
/// Seeds keep their own label and get infinite confidence. Confidence of a
/// non-seed node is the gap between its best and second-best score.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub labels: Vec<u32>,
    pub confidence: Vec<f64>,
    pub is_seed: Vec<bool>,
}

impl Classification {
    /// `(node, label, confidence)` for every non-seed node.
    pub fn non_seeds(&self) -> impl Iterator<Item = (usize, u32, f64)> + '_ {
        (0..self.labels.len())
            .filter(|&i| !self.is_seed[i])
            .map(|i| (i, self.labels[i], self.confidence[i]))
    }

    pub fn num_non_seeds(&self) -> usize {
        self.is_seed.iter().filter(|s| !**s).count()
    }
}

/// Solves the Dirichlet problem with label `label` seeds hot and the others cold.
pub fn diffuse_one_vs_all(
    g: &Graph,
    seeds: &SeedSet,
    label: u32,
    opts: &SolverOptions,
) -> Result<TemperatureField> {
    seeds.check_nodes(g.n())?;
    if label == 0 || label > seeds.k() {
        return Err(Error::InvalidSeeds(format!(
            "label {label} outside 1..={}",
            seeds.k()
        )));
    }
    if seeds.counts()[label as usize - 1] == 0 {
        return Err(Error::LabelWithoutSeed { label });
    }
    let boundary: Vec<(usize, f64)> = seeds
        .iter()
        .map(|(node, l)| (node, if l == label { 1.0 } else { 0.0 }))
        .collect();
    if boundary.len() == g.n() {
        let mut values = vec![0.0; g.n()];
        for &(node, t) in &boundary {
            values[node] = t;
        }
        let stats = SolveStats {
            iterations: 0,
            last_change: 0.0,
            stop: StopReason::NoInterior,
        };
        return Ok(TemperatureField::new(values, stats));
    }
    let problem = DirichletProblem::new(g, &boundary)?;
    solver::solve(&problem, opts)
}

/// All `K` one-vs-all diffusions, run concurrently. Entry `k - 1` holds label `k`.
pub fn diffuse_all(g: &Graph, seeds: &SeedSet, opts: &SolverOptions) -> Result<Vec<TemperatureField>> {
    seeds.ensure_every_label()?;
    seeds.check_nodes(g.n())?;
    opts.validate()?;
    (1..=seeds.k())
        .into_par_iter()
        .map(|label| diffuse_one_vs_all(g, seeds, label, opts))
        .collect()
}

/// Subtracts the mean over all entries.
pub fn center(values: &[f64]) -> Vec<f64> {
    let mean = solver::mean(values);
    values.iter().map(|v| v - mean).collect()
}

/// Turns one-vs-all fields into scores under `variant`.
pub fn score(fields: &[TemperatureField], seeds: &SeedSet, variant: Variant) -> ScoreMatrix {
    let counts = seeds.counts();
    let total = seeds.len() as f64;
    let columns = fields
        .iter()
        .enumerate()
        .map(|(idx, field)| match variant {
            Variant::Vanilla => field.values.clone(),
            Variant::Centered => center(&field.values),
            Variant::Weighted => {
                let share = counts[idx] as f64 / total;
                field.values.iter().map(|v| v * share).collect()
            }
        })
        .collect();
    ScoreMatrix { columns, variant }
}

/// Argmax over labels for every non-seed node; seeds keep their label.
pub fn decide(scores: &ScoreMatrix, seeds: &SeedSet) -> Classification {
    let n = scores.n();
    let mut labels = vec![0u32; n];
    let mut confidence = vec![f64::INFINITY; n];
    let mut is_seed = vec![false; n];
    for (node, label) in seeds.iter() {
        labels[node] = label;
        is_seed[node] = true;
    }
    for i in (0..n).filter(|&i| !is_seed[i]) {
        let mut best_label = 1;
        let mut best = scores.columns[0][i];
        let mut second = f64::NEG_INFINITY;
        for (idx, col) in scores.columns.iter().enumerate().skip(1) {
            let s = col[i];
            if s > best {
                second = best;
                best = s;
                best_label = idx as u32 + 1;
            } else if s > second {
                second = s;
            }
        }
        labels[i] = best_label;
        confidence[i] = best - second;
    }
    Classification {
        labels,
        confidence,
        is_seed,
    }
}

/// Multi-class classification: `K` diffusions, scoring by `variant`, argmax.
pub fn classify(
    g: &Graph,
    seeds: &SeedSet,
    variant: Variant,
    opts: &SolverOptions,
) -> Result<(ScoreMatrix, Classification)> {
    let fields = diffuse_all(g, seeds, opts)?;
    let scores = score(&fields, seeds, variant);
    let classification = decide(&scores, seeds);
    Ok((scores, classification))
}

/// Decision threshold for two-label classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Threshold {
    /// Fixed at 0.5.
    Half,
    /// Mean temperature over all nodes.
    Mean,
}

/// Two-label classification from a single diffusion (label 1 hot, label 2 cold).
///
/// A node gets label 1 iff its temperature is strictly above the threshold.
/// Confidence is the distance to the threshold.
pub fn classify_binary(
    g: &Graph,
    seeds: &SeedSet,
    threshold: Threshold,
    opts: &SolverOptions,
) -> Result<Classification> {
    if seeds.k() != 2 {
        return Err(Error::InvalidSeeds(format!(
            "binary classification needs exactly 2 labels, got {}",
            seeds.k()
        )));
    }
    seeds.ensure_every_label()?;
    let field = diffuse_one_vs_all(g, seeds, 1, opts)?;
    let theta = match threshold {
        Threshold::Half => 0.5,
        Threshold::Mean => field.mean,
    };
    let n = g.n();
    let mut labels = vec![0u32; n];
    let mut confidence = vec![f64::INFINITY; n];
    let mut is_seed = vec![false; n];
    for (node, label) in seeds.iter() {
        labels[node] = label;
        is_seed[node] = true;
    }
    for i in (0..n).filter(|&i| !is_seed[i]) {
        let t = field.values[i];
        labels[i] = if t > theta { 1 } else { 2 };
        confidence[i] = (t - theta).abs();
    }
    Ok(Classification {
        labels,
        confidence,
        is_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn seed_set_validation() {
        assert!(SeedSet::new(vec![], 2).is_err());
        assert!(SeedSet::new(vec![(0, 3)], 2).is_err());
        assert!(SeedSet::new(vec![(0, 1), (0, 2)], 2).is_err());
        let s = SeedSet::new(vec![(4, 2), (1, 1), (2, 1)], 3).unwrap();
        assert_eq!(s.counts(), vec![2, 1, 0]);
        assert_eq!(s.label_of(4), Some(2));
        assert_eq!(s.label_of(3), None);
        assert_eq!(s.ensure_every_label().unwrap_err(), Error::LabelWithoutSeed { label: 3 });
    }

    #[test]
    fn missing_label_fails_before_solving() {
        let g = path3();
        let seeds = SeedSet::new(vec![(0, 1), (2, 1)], 2).unwrap();
        assert_eq!(
            classify(&g, &seeds, Variant::Centered, &SolverOptions::default()).unwrap_err(),
            Error::LabelWithoutSeed { label: 2 }
        );
    }

    #[test]
    fn center_examples() {
        assert_eq!(center(&[1.0, 0.5, 0.0]), vec![0.5, 0.0, -0.5]);
        assert_eq!(center(&[0.7; 4]), vec![0.0; 4]);
        let c = center(&[1.0, 0.6, 0.0, 0.4]);
        for (x, y) in c.iter().zip([0.5, 0.1, -0.5, -0.1]) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn everything_seeded() {
        let g = path3();
        let seeds = SeedSet::new(vec![(0, 1), (1, 2), (2, 1)], 2).unwrap();
        let field = diffuse_one_vs_all(&g, &seeds, 1, &SolverOptions::default()).unwrap();
        assert_eq!(field.values, vec![1.0, 0.0, 1.0]);
        assert_eq!(field.stats.stop, StopReason::NoInterior);

        let (scores, c) = classify(&g, &seeds, Variant::Weighted, &SolverOptions::default()).unwrap();
        assert_eq!(c.num_non_seeds(), 0);
        assert_eq!(scores.column(1), &[2.0 / 3.0, 0.0, 2.0 / 3.0]);
        assert_eq!(scores.column(2), &[0.0, 1.0 / 3.0, 0.0]);
    }

    #[test]
    fn single_label_is_all_hot() {
        let g = path3();
        let seeds = SeedSet::new(vec![(0, 1)], 1).unwrap();
        let field = diffuse_one_vs_all(&g, &seeds, 1, &SolverOptions::iterative(10_000, 1e-14)).unwrap();
        for v in field.values {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn binary_tie_goes_to_label_two() {
        let g = path3();
        let seeds = SeedSet::new(vec![(0, 1), (2, 2)], 2).unwrap();
        let c = classify_binary(&g, &seeds, Threshold::Mean, &SolverOptions::default()).unwrap();
        assert_eq!(c.labels, vec![1, 2, 2]);
        assert_eq!(c.confidence[1], 0.0);
        let c = classify_binary(&g, &seeds, Threshold::Half, &SolverOptions::default()).unwrap();
        assert_eq!(c.labels[1], 2);
    }

    #[test]
    fn binary_requires_two_labels() {
        let g = path3();
        let seeds = SeedSet::new(vec![(0, 1), (2, 3)], 3).unwrap();
        assert!(classify_binary(&g, &seeds, Threshold::Mean, &SolverOptions::default()).is_err());
    }

    #[test]
    fn argmax_ties_go_to_smallest_label() {
        let g = path3();
        let seeds = SeedSet::new(vec![(0, 1), (2, 2)], 2).unwrap();
        let (_, c) = classify(&g, &seeds, Variant::Vanilla, &SolverOptions::default()).unwrap();
        // both diffusions give node 1 exactly 0.5
        assert_eq!(c.labels, vec![1, 1, 2]);
        assert_eq!(c.confidence[1], 0.0);
    }

    #[test]
    fn variant_names_round_trip() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert!("hot".parse::<Variant>().is_err());
    }
}
