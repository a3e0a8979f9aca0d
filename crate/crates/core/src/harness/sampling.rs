//! Seed-sampling policies.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifier::SeedSet;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodePartition};

const MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub enum SamplingKind {
    /// Simple random sample of labelled nodes.
    Uniform,
    /// Sequential draws without replacement, each with probability
    /// proportional to degree.
    Degree,
    /// Per-label quotas proportional to label frequencies.
    Balanced,
    /// Exactly `counts[k - 1]` seeds of label `k`.
    ExplicitCounts(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPolicy {
    pub kind: SamplingKind,
    /// Fraction of labelled nodes to seed; ignored by `ExplicitCounts`.
    pub fraction: f64,
    pub rng_seed: u64,
}

impl SamplingPolicy {
    pub fn new(kind: SamplingKind, fraction: f64, rng_seed: u64) -> Self {
        Self {
            kind,
            fraction,
            rng_seed,
        }
    }
}

/// `⌈fraction · labeled⌉`, absorbing floating-point noise in the product.
pub fn seed_budget(fraction: f64, labeled: usize) -> usize {
    let raw = fraction * labeled as f64;
    ((raw - 1e-9).ceil().max(1.0) as usize).min(labeled)
}

/// Draws seeds among the labelled nodes of `labels`. Every label present in
/// `labels` receives at least one seed: the budget is raised to the number of
/// labels when needed, and unlucky draws are retried up to 100 times. Deterministic given `policy.rng_seed`.
pub fn sample_seeds(labels: &NodePartition, g: &Graph, policy: &SamplingPolicy) -> Result<SeedSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(policy.rng_seed);
    sample_seeds_with(labels, g, &policy.kind, policy.fraction, &mut rng)
}

pub fn sample_seeds_with(
    labels: &NodePartition,
    g: &Graph,
    kind: &SamplingKind,
    fraction: f64,
    rng: &mut ChaCha8Rng,
) -> Result<SeedSet> {
    if labels.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            actual: labels.len(),
        });
    }
    let candidates: Vec<(usize, u32)> = labels.labeled_nodes().collect();
    if candidates.is_empty() {
        return Err(Error::Sampling("no labelled node to sample from".into()));
    }
    let class_counts = labels.class_counts();
    let present = class_counts.iter().filter(|&&c| c > 0).count();

    let picked: Vec<(usize, u32)> = match kind {
        SamplingKind::ExplicitCounts(counts) => explicit(&candidates, &class_counts, counts, rng)?,
        SamplingKind::Balanced => {
            let total = budget(fraction, candidates.len())?;
            let quotas = balanced_quotas(&class_counts, total.max(present));
            explicit(&candidates, &class_counts, &quotas, rng)?
        }
        SamplingKind::Uniform | SamplingKind::Degree => {
            // a budget below the label count is raised so every label can be seeded
            let total = budget(fraction, candidates.len())?.max(present);
            let mut attempt = 0;
            loop {
                let picked = if *kind == SamplingKind::Uniform {
                    index::sample(rng, candidates.len(), total)
                        .into_iter()
                        .map(|i| candidates[i])
                        .collect()
                } else {
                    degree_draws(&candidates, g, total, rng)
                };
                if covers(&picked, &class_counts) {
                    break picked;
                }
                attempt += 1;
                if attempt >= MAX_ATTEMPTS {
                    return Err(Error::Sampling(format!(
                        "some label received no seed in {MAX_ATTEMPTS} draws"
                    )));
                }
            }
        }
    };
    SeedSet::new(picked, labels.k())
}

fn budget(fraction: f64, labeled: usize) -> Result<usize> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Sampling(format!("fraction must lie in (0, 1], got {fraction}")));
    }
    Ok(seed_budget(fraction, labeled))
}

fn covers(picked: &[(usize, u32)], class_counts: &[usize]) -> bool {
    let mut seen = vec![false; class_counts.len()];
    for &(_, l) in picked {
        seen[l as usize - 1] = true;
    }
    seen.iter().zip(class_counts).all(|(&s, &c)| s || c == 0)
}

/// Efraimidis–Spirakis keys `ln(u) / w`: keeping the `total` largest keys has
/// the same law as `total` sequential degree-proportional draws without
/// replacement.
fn degree_draws(
    candidates: &[(usize, u32)],
    g: &Graph,
    total: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<(usize, u32)> {
    let mut keyed: Vec<(f64, usize)> = candidates
        .iter()
        .enumerate()
        .map(|(pos, &(node, _))| {
            let u: f64 = 1.0 - rng.gen::<f64>();
            (u.ln() / g.degree(node), pos)
        })
        .collect();
    keyed.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    keyed.truncate(total);
    let mut picked: Vec<_> = keyed.into_iter().map(|(_, pos)| candidates[pos]).collect();
    picked.sort_unstable();
    picked
}

/// Largest-remainder apportionment of `total` over the classes, with at
/// least one seed for every nonempty class.
pub fn balanced_quotas(class_counts: &[usize], total: usize) -> Vec<usize> {
    let labeled: usize = class_counts.iter().sum();
    if labeled == 0 {
        return vec![0; class_counts.len()];
    }
    let total = total.min(labeled);
    let exact: Vec<f64> = class_counts
        .iter()
        .map(|&c| total as f64 * c as f64 / labeled as f64)
        .collect();
    let mut quotas: Vec<usize> = exact.iter().map(|x| x.floor() as usize).collect();
    let mut order: Vec<usize> = (0..class_counts.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let mut remaining = total - quotas.iter().sum::<usize>();
    for &k in order.iter().cycle() {
        if remaining == 0 {
            break;
        }
        if quotas[k] < class_counts[k] {
            quotas[k] += 1;
            remaining -= 1;
        }
    }
    // every nonempty class gets a seed, taken from the largest quota
    for k in 0..quotas.len() {
        if class_counts[k] > 0 && quotas[k] == 0 {
            if let Some(donor) = (0..quotas.len())
                .filter(|&j| quotas[j] > 1)
                .max_by_key(|&j| (quotas[j], std::cmp::Reverse(j)))
            {
                quotas[donor] -= 1;
            }
            quotas[k] = 1;
        }
    }
    quotas
}

fn explicit(
    candidates: &[(usize, u32)],
    class_counts: &[usize],
    counts: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(usize, u32)>> {
    if counts.len() != class_counts.len() {
        return Err(Error::Sampling(format!(
            "{} seed counts given for {} labels",
            counts.len(),
            class_counts.len()
        )));
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); class_counts.len()];
    for &(node, l) in candidates {
        by_class[l as usize - 1].push(node);
    }
    let mut picked = Vec::with_capacity(counts.iter().sum());
    for (k, (&want, members)) in counts.iter().zip(&by_class).enumerate() {
        if want > members.len() {
            return Err(Error::Sampling(format!(
                "label {} has {} node(s), cannot draw {want} seeds",
                k + 1,
                members.len()
            )));
        }
        if want == 0 && !members.is_empty() {
            return Err(Error::Sampling(format!("label {} would get no seed", k + 1)));
        }
        for i in index::sample(rng, members.len(), want) {
            picked.push((members[i], k as u32 + 1));
        }
    }
    picked.sort_unstable();
    Ok(picked)
}

/// Adds seeds of `label` (drawn uniformly from its unseeded nodes) until it
/// has `target` seeds.
pub fn boost_label(
    seeds: &SeedSet,
    labels: &NodePartition,
    label: u32,
    target: usize,
    rng: &mut ChaCha8Rng,
) -> Result<SeedSet> {
    let current = seeds.counts()[label as usize - 1];
    if target <= current {
        return Ok(seeds.clone());
    }
    let pool: Vec<usize> = labels
        .labeled_nodes()
        .filter(|&(node, l)| l == label && seeds.label_of(node).is_none())
        .map(|(node, _)| node)
        .collect();
    let extra = (target - current).min(pool.len());
    let mut all: Vec<(usize, u32)> = seeds.iter().collect();
    all.extend(index::sample(rng, pool.len(), extra).into_iter().map(|i| (pool[i], label)));
    SeedSet::new(all, seeds.k())
}
