//! Stochastic block model sampler.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BlockInstance, BlockModelParams};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Rounds of cut resampling before giving up on a detached component.
const MAX_RESAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SbmOptions {
    /// Redraw the cut of every component outside the largest one until the
    /// graph is connected. Isolated nodes are always redrawn.
    pub connect: bool,
}

impl Default for SbmOptions {
    fn default() -> Self {
        Self { connect: true }
    }
}

/// Samples an SBM graph: every unordered pair of distinct nodes is joined
/// independently with probability `p` (same block) or `q` (different blocks),
/// unit weights, no self-loops. Seeds are the first `s_k` nodes of block `k`.
pub fn sbm_generate(params: &BlockModelParams, rng_seed: u64) -> Result<BlockInstance> {
    sbm_generate_with(params, rng_seed, SbmOptions::default())
}

pub fn sbm_generate_with(
    params: &BlockModelParams,
    rng_seed: u64,
    opts: SbmOptions,
) -> Result<BlockInstance> {
    params.validate()?;
    for (name, value) in [("p", params.p), ("q", params.q)] {
        if value > 1.0 {
            return Err(Error::InvalidParams(format!(
                "{name} is a probability and must lie in (0, 1], got {value}"
            )));
        }
    }
    let n = params.n();
    for (k, &n_k) in params.sizes.iter().enumerate() {
        let expected = (n_k - 1) as f64 * params.p + (n - n_k) as f64 * params.q;
        if expected < 1.0 {
            log::warn!("block {} has expected degree {expected:.3} < 1", k + 1);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let starts = params.block_starts();
    let mut pairs = Vec::new();
    for a in 0..params.sizes.len() {
        let (sa, na) = (starts[a], params.sizes[a]);
        let within = (na * na.saturating_sub(1) / 2) as u64;
        for idx in bernoulli_indices(&mut rng, within, params.p) {
            let (i, j) = triangular_pair(idx);
            pairs.push((sa + i, sa + j));
        }
        for b in a + 1..params.sizes.len() {
            let (sb, nb) = (starts[b], params.sizes[b]);
            for idx in bernoulli_indices(&mut rng, (na * nb) as u64, params.q) {
                let idx = idx as usize;
                pairs.push((sa + idx / nb, sb + idx % nb));
            }
        }
    }

    let blocks = params.block_of_nodes();
    repair(&mut pairs, &blocks, params, opts, &mut rng)?;

    let edges: Vec<_> = pairs.into_iter().map(|(i, j)| (i, j, 1.0)).collect();
    Ok(BlockInstance {
        graph: Graph::from_edges(n, &edges)?,
        truth: params.truth()?,
        seeds: params.default_seeds()?,
    })
}

/// Indices in `0..total` kept by independent Bernoulli(`prob`) trials, found
/// by geometric skipping so the cost is proportional to the number kept.
fn bernoulli_indices(rng: &mut ChaCha8Rng, total: u64, prob: f64) -> Vec<u64> {
    let mut out = Vec::new();
    if total == 0 {
        return out;
    }
    if prob >= 1.0 {
        out.extend(0..total);
        return out;
    }
    let log_miss = (1.0 - prob).ln();
    let mut idx: u64 = 0;
    loop {
        // 1 - u lies in (0, 1]
        let u: f64 = 1.0 - rng.gen::<f64>();
        let skip = (u.ln() / log_miss).floor();
        if skip >= (total - idx) as f64 {
            break;
        }
        idx += skip as u64;
        out.push(idx);
        idx += 1;
        if idx >= total {
            break;
        }
    }
    out
}

/// Maps a linear index to the pair `(i, j)` with `j < i`, enumerating
/// `(1,0), (2,0), (2,1), (3,0), …`.
fn triangular_pair(idx: u64) -> (usize, usize) {
    let mut i = ((1.0 + (1.0 + 8.0 * idx as f64).sqrt()) / 2.0).floor() as u64;
    while i * (i - 1) / 2 > idx {
        i -= 1;
    }
    while (i + 1) * i / 2 <= idx {
        i += 1;
    }
    let j = idx - i * (i - 1) / 2;
    (i as usize, j as usize)
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Redraws the (currently empty) cut of detached components. Only pairs that
/// are absent are redrawn, so existing edges never disappear.
fn repair(
    pairs: &mut Vec<(usize, usize)>,
    blocks: &[u32],
    params: &BlockModelParams,
    opts: SbmOptions,
    rng: &mut ChaCha8Rng,
) -> Result<()> {
    let n = blocks.len();
    if n <= 1 {
        return Ok(());
    }
    for round in 0..=MAX_RESAMPLES {
        let mut sets = DisjointSets::new(n);
        for &(i, j) in pairs.iter() {
            sets.union(i, j);
        }
        let roots: Vec<usize> = (0..n).map(|i| sets.find(i)).collect();
        let mut sizes = vec![0usize; n];
        for &r in &roots {
            sizes[r] += 1;
        }
        let largest = (0..n).max_by_key(|&r| (sizes[r], std::cmp::Reverse(r))).unwrap_or(0);
        let mut detached: Vec<usize> = (0..n)
            .filter(|&r| roots[r] == r && r != largest)
            .filter(|&r| opts.connect || sizes[r] == 1)
            .collect();
        if detached.is_empty() {
            return Ok(());
        }
        if round == MAX_RESAMPLES {
            return Err(Error::Generation(format!(
                "{} component(s) still detached after {MAX_RESAMPLES} resamples (e.g. node {})",
                detached.len(),
                detached[0]
            )));
        }
        detached.sort_unstable();
        let mut done = vec![false; n];
        for &root in &detached {
            let members: Vec<usize> = (0..n).filter(|&i| roots[i] == root).collect();
            for &u in &members {
                for v in 0..n {
                    let rv = roots[v];
                    if rv == root || done[rv] {
                        continue;
                    }
                    let prob = if blocks[u] == blocks[v] { params.p } else { params.q };
                    if rng.gen::<f64>() < prob {
                        pairs.push((u.min(v), u.max(v)));
                    }
                }
            }
            done[root] = true;
        }
    }
    Ok(())
}
