//! Monte-Carlo weighted-cascade simulation of influence spread.
//!
//! Seeds are active at wave 0. A node activated at wave t makes exactly one
//! activation attempt on each of its not-yet-activated out-neighbors j at
//! wave t+1, succeeding with probability c_ij / d_j (d_j the weighted
//! in-conductance sum of j). A target that survives an attempt can still be
//! attempted later by other newly activated in-neighbors — one attempt per
//! (activator, target) pair.
//!
//! Runs are reproducible and parallelism-independent: run r draws from its
//! own ChaCha stream derived from (seed, r), and the aggregation over exact
//! integer counts is order-insensitive.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Precomputed per-arc activation probabilities for cascade runs.
pub struct CascadeModel {
    n: usize,
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    prob: Vec<f64>,
}

impl CascadeModel {
    pub fn new(g: &Graph) -> CascadeModel {
        let n = g.n();
        let d = g.in_weights();
        let mut out_offsets = Vec::with_capacity(n + 1);
        let mut out_targets = Vec::with_capacity(g.arc_count());
        let mut prob = Vec::with_capacity(g.arc_count());
        out_offsets.push(0);
        for i in 0..n {
            for (j, c) in g.out_arcs(i) {
                out_targets.push(j);
                // d[j] >= c > 0 because the arc itself contributes to d[j].
                prob.push(c / d[j]);
            }
            out_offsets.push(out_targets.len());
        }
        CascadeModel {
            n,
            out_offsets,
            out_targets,
            prob,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Activation probability of each arc, in the graph's arc order.
    pub fn arc_probabilities(&self) -> &[f64] {
        &self.prob
    }

    /// One cascade realization; returns the number of activated nodes.
    pub fn run(&self, seeds: &[usize], rng: &mut impl Rng) -> usize {
        let mut scratch = CascadeScratch::new(self.n);
        self.run_with_scratch(seeds, rng, &mut scratch)
    }

    fn run_with_scratch(
        &self,
        seeds: &[usize],
        rng: &mut impl Rng,
        scratch: &mut CascadeScratch,
    ) -> usize {
        scratch.begin();
        let queue = &mut scratch.queue;
        queue.clear();
        for &s in seeds {
            if scratch.active.mark(s) {
                queue.push(s);
            }
        }
        let mut activated = queue.len();
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            let range = self.out_offsets[u]..self.out_offsets[u + 1];
            for (idx, &j) in self.out_targets[range.clone()].iter().enumerate() {
                if scratch.active.is_marked(j) {
                    continue;
                }
                if rng.random::<f64>() < self.prob[range.start + idx] {
                    scratch.active.mark(j);
                    queue.push(j);
                    activated += 1;
                }
            }
        }
        activated
    }
}

/// Epoch-stamped visited set so parallel workers can reuse allocation
/// without clearing it between runs.
struct CascadeScratch {
    active: StampSet,
    queue: Vec<usize>,
}

impl CascadeScratch {
    fn new(n: usize) -> CascadeScratch {
        CascadeScratch {
            active: StampSet::new(n),
            queue: Vec::with_capacity(n),
        }
    }

    fn begin(&mut self) {
        self.active.next_epoch();
    }
}

struct StampSet {
    stamp: Vec<u32>,
    epoch: u32,
}

impl StampSet {
    fn new(n: usize) -> StampSet {
        StampSet {
            stamp: vec![0; n],
            epoch: 0,
        }
    }

    fn next_epoch(&mut self) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
    }

    fn mark(&mut self, i: usize) -> bool {
        if self.stamp[i] == self.epoch {
            return false;
        }
        self.stamp[i] = self.epoch;
        true
    }

    fn is_marked(&self, i: usize) -> bool {
        self.stamp[i] == self.epoch
    }
}

/// Monte-Carlo spread estimate over independent cascade runs.
#[derive(Debug, Clone, Serialize)]
pub struct SpreadEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub runs: usize,
    pub rng_seed: u64,
    #[serde(skip)]
    pub counts: Vec<u32>,
}

/// Runs `runs` independent cascades and aggregates mean and standard error.
///
/// Bit-identical for fixed `(rng_seed, runs)` regardless of the rayon worker
/// count: per-run streams come from `set_stream(run_index)` and all sums are
/// exact integer arithmetic.
pub fn estimate_spread(
    cascade: &CascadeModel,
    seeds: &[usize],
    runs: usize,
    rng_seed: u64,
) -> Result<SpreadEstimate> {
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("seed set must be nonempty".into()));
    }
    if runs == 0 {
        return Err(Error::InvalidArgument("run count must be at least 1".into()));
    }
    for &s in seeds {
        if s >= cascade.n() {
            return Err(Error::InvalidArgument(format!(
                "seed index {s} out of range for {} nodes",
                cascade.n()
            )));
        }
    }

    let counts: Vec<u32> = (0..runs)
        .into_par_iter()
        .map_init(
            || CascadeScratch::new(cascade.n()),
            |scratch, r| {
                let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
                rng.set_stream(r as u64);
                cascade.run_with_scratch(seeds, &mut rng, scratch) as u32
            },
        )
        .collect();

    let sum: u64 = counts.iter().map(|&c| c as u64).sum();
    let sum_sq: u128 = counts.iter().map(|&c| (c as u128) * (c as u128)).sum();
    let mean = sum as f64 / runs as f64;
    let stderr = if runs < 2 {
        0.0
    } else {
        let variance =
            (sum_sq as f64 - (sum as f64) * (sum as f64) / runs as f64) / (runs - 1) as f64;
        (variance.max(0.0) / runs as f64).sqrt()
    };
    Ok(SpreadEstimate {
        mean,
        stderr,
        runs,
        rng_seed,
        counts,
    })
}

/// Largest arc count the exhaustive oracle will enumerate (2^|E| outcomes).
pub const ENUMERATION_ARC_CAP: usize = 20;

/// Exact expected spread by enumerating every live-arc outcome. Reference
/// implementation for tiny graphs; independent of the Monte-Carlo path.
pub fn exact_spread_by_enumeration(g: &Graph, seeds: &[usize]) -> Result<f64> {
    let arc_count = g.arc_count();
    if arc_count > ENUMERATION_ARC_CAP {
        return Err(Error::CapExceeded {
            what: "live-arc enumeration",
            size: arc_count,
            cap: ENUMERATION_ARC_CAP,
        });
    }
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("seed set must be nonempty".into()));
    }
    let n = g.n();
    let d = g.in_weights();
    let arcs: Vec<(usize, usize, f64)> = g
        .arcs()
        .map(|(i, j, c)| (i, j, c / d[j]))
        .collect();

    let mut expected = 0.0;
    for outcome in 0u64..(1u64 << arc_count) {
        let mut probability = 1.0;
        for (idx, &(_, _, p)) in arcs.iter().enumerate() {
            if outcome & (1 << idx) != 0 {
                probability *= p;
            } else {
                probability *= 1.0 - p;
            }
        }
        if probability == 0.0 {
            continue;
        }
        // Reachability over live arcs only.
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (idx, &(i, j, _)) in arcs.iter().enumerate() {
            if outcome & (1 << idx) != 0 {
                adjacency[i].push(j);
            }
        }
        let mut seen = vec![false; n];
        let mut queue: Vec<usize> = Vec::new();
        for &s in seeds {
            if !seen[s] {
                seen[s] = true;
                queue.push(s);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            for &v in &adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push(v);
                }
            }
        }
        expected += probability * queue.len() as f64;
    }
    Ok(expected)
}
