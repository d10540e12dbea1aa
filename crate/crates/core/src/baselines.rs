//! Comparison seed selectors: degree ranking, the degree-discount heuristic,
//! PageRank, and Monte-Carlo lazy greedy.
//!
//! All selectors return exactly `k` distinct nodes, break ties toward the
//! lowest original label, and are deterministic given their configuration
//! and RNG seed.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::maximize::{RoundStat, SelectionTrace};
use crate::simulate::{estimate_spread, CascadeModel};

/// Which degree a ranking-based selector uses on directed graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeKind {
    /// Out-degree: audience size along the direction influence flows.
    Out,
    /// In-degree.
    In,
}

/// Shared baseline parameters with the conventional defaults.
#[derive(Debug, Clone)]
pub struct BaselineConfig {
    pub degree_kind: DegreeKind,
    /// Propagation probability of the degree-discount heuristic.
    pub discount_p: f64,
    pub pagerank_damping: f64,
    pub pagerank_tol: f64,
    /// Monte-Carlo runs per spread estimate in greedy selection.
    pub runs: usize,
    pub rng_seed: u64,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig {
            degree_kind: DegreeKind::Out,
            discount_p: 0.01,
            pagerank_damping: 0.85,
            pagerank_tol: 1e-8,
            runs: 10_000,
            rng_seed: 42,
        }
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "seed count k={k} must satisfy 1 <= k <= n ({n})"
        )));
    }
    Ok(())
}

fn degree(g: &Graph, i: usize, kind: DegreeKind) -> usize {
    match kind {
        DegreeKind::Out => g.out_degree(i),
        DegreeKind::In => g.in_degree(i),
    }
}

/// Top-k nodes by degree, as original labels in rank order.
pub fn degree_top_k(g: &Graph, k: usize, kind: DegreeKind) -> Result<Vec<u64>> {
    check_k(k, g.n())?;
    let mut nodes: Vec<usize> = (0..g.n()).collect();
    nodes.sort_unstable_by(|&a, &b| {
        degree(g, b, kind)
            .cmp(&degree(g, a, kind))
            .then(g.label(a).cmp(&g.label(b)))
    });
    Ok(nodes[..k].iter().map(|&i| g.label(i)).collect())
}

/// Degree-discount heuristic: iteratively picks the node maximizing
/// `dd_v = d_v - 2 t_v - (d_v - t_v) t_v p` where `t_v` counts already
/// selected nodes among v's neighbors (same orientation as the degree).
pub fn degree_discount_ic(g: &Graph, k: usize, p: f64, kind: DegreeKind) -> Result<Vec<u64>> {
    check_k(k, g.n())?;
    if !(p.is_finite() && p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "discount propagation probability must lie in (0, 1), got {p}"
        )));
    }
    let n = g.n();
    let d: Vec<f64> = (0..n).map(|i| degree(g, i, kind) as f64).collect();
    let mut t = vec![0.0f64; n];
    let mut dd = d.clone();
    let mut selected = vec![false; n];
    let mut picks = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<usize> = None;
        for v in 0..n {
            if selected[v] {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => {
                    dd[v] > dd[b] || (dd[v] == dd[b] && g.label(v) < g.label(b))
                }
            };
            if better {
                best = Some(v);
            }
        }
        let s = best.expect("k <= n leaves at least one candidate");
        selected[s] = true;
        picks.push(g.label(s));
        // Discount the nodes whose neighborhood (in the ranking orientation)
        // contains s: for out-degree ranking those are s's in-neighbors.
        let affected: Vec<usize> = match kind {
            DegreeKind::Out => g.in_arcs(s).map(|(u, _)| u).collect(),
            DegreeKind::In => g.out_arcs(s).map(|(u, _)| u).collect(),
        };
        for u in affected {
            if selected[u] {
                continue;
            }
            t[u] += 1.0;
            dd[u] = d[u] - 2.0 * t[u] - (d[u] - t[u]) * t[u] * p;
        }
    }
    Ok(picks)
}

/// PageRank scores and the top-k ranking.
#[derive(Debug, Clone)]
pub struct PageRankOutcome {
    pub seeds: Vec<u64>,
    /// Scores by dense node index; they sum to 1.
    pub scores: Vec<f64>,
    pub iterations: usize,
}

/// Power iteration on the reversed graph (rank flows against influence
/// arcs, so influence sources accumulate score). Transition weights are
/// proportional to conductance; dangling mass is spread uniformly.
pub fn pagerank_top_k(g: &Graph, k: usize, damping: f64, tol: f64) -> Result<PageRankOutcome> {
    check_k(k, g.n())?;
    if !(damping.is_finite() && damping > 0.0 && damping < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "pagerank damping must lie in (0, 1), got {damping}"
        )));
    }
    let n = g.n();
    // On the reversed graph the out-weight of j is the in-weight of j here.
    let d = g.in_weights();
    let mut rank = vec![1.0 / n as f64; n];
    let mut next = vec![0.0f64; n];
    let max_iterations = 1000;
    for iteration in 1..=max_iterations {
        next.fill(0.0);
        let mut dangling = 0.0;
        for j in 0..n {
            if d[j] == 0.0 {
                dangling += rank[j];
                continue;
            }
            let share = rank[j] / d[j];
            for (i, c) in g.in_arcs(j) {
                next[i] += share * c;
            }
        }
        let base = (1.0 - damping) / n as f64 + damping * dangling / n as f64;
        let mut delta = 0.0;
        for v in 0..n {
            let value = base + damping * next[v];
            delta += (value - rank[v]).abs();
            next[v] = value;
        }
        std::mem::swap(&mut rank, &mut next);
        if delta <= tol {
            let mut nodes: Vec<usize> = (0..n).collect();
            nodes.sort_unstable_by(|&a, &b| {
                rank[b]
                    .total_cmp(&rank[a])
                    .then(g.label(a).cmp(&g.label(b)))
            });
            return Ok(PageRankOutcome {
                seeds: nodes[..k].iter().map(|&i| g.label(i)).collect(),
                scores: rank,
                iterations: iteration,
            });
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iterations,
        last_update: f64::NAN,
    })
}

/// Stable stream seed for a seed set: estimates depend only on the set, not
/// on which algorithm or round asks for them.
fn seed_for_set(base: u64, labels: &[u64]) -> u64 {
    let mut sorted: Vec<u64> = labels.to_vec();
    sorted.sort_unstable();
    let mut h = splitmix64(base ^ 0x9e37_79b9_7f4a_7c15);
    for l in sorted {
        h = splitmix64(h ^ l.wrapping_add(0x2545_f491_4f6c_dd1d));
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct EstimateCache<'a> {
    cascade: &'a CascadeModel,
    g: &'a Graph,
    runs: usize,
    base_seed: u64,
    cache: HashMap<Vec<u64>, f64>,
    calls: usize,
}

impl<'a> EstimateCache<'a> {
    fn new(g: &'a Graph, cascade: &'a CascadeModel, runs: usize, base_seed: u64) -> Self {
        EstimateCache {
            cascade,
            g,
            runs,
            base_seed,
            cache: HashMap::new(),
            calls: 0,
        }
    }

    fn spread(&mut self, set: &[usize]) -> Result<f64> {
        if set.is_empty() {
            return Ok(0.0);
        }
        let mut labels: Vec<u64> = set.iter().map(|&i| self.g.label(i)).collect();
        labels.sort_unstable();
        if let Some(&mean) = self.cache.get(&labels) {
            return Ok(mean);
        }
        self.calls += 1;
        let stream = seed_for_set(self.base_seed, &labels);
        let est = estimate_spread(self.cascade, set, self.runs, stream)?;
        self.cache.insert(labels, est.mean);
        Ok(est.mean)
    }
}

struct HeapEntry {
    gain: f64,
    label: u64,
    node: usize,
    round: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.gain == other.gain && self.label == other.label
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Max-heap on gain; ties prefer the lower label.
        self.gain
            .total_cmp(&other.gain)
            .then(other.label.cmp(&self.label))
    }
}

/// Monte-Carlo greedy with lazy-forward re-evaluation: stale marginal
/// estimates are reused as priorities and only the heap top is refreshed,
/// which is sound when the spread objective is submodular. Estimates are
/// cached per seed set so the lazy and exhaustive variants see identical
/// numbers.
pub fn mc_greedy_celf(g: &Graph, k: usize, runs: usize, rng_seed: u64) -> Result<SelectionTrace> {
    check_k(k, g.n())?;
    if runs == 0 {
        return Err(Error::InvalidArgument("run count must be at least 1".into()));
    }
    let started = Instant::now();
    let cascade = CascadeModel::new(g);
    let mut estimates = EstimateCache::new(g, &cascade, runs, rng_seed);

    let n = g.n();
    let mut heap = BinaryHeap::with_capacity(n);
    let round_start = Instant::now();
    let mut evaluated_this_round = estimates.calls;
    for v in 0..n {
        let gain = estimates.spread(&[v])?;
        heap.push(HeapEntry {
            gain,
            label: g.label(v),
            node: v,
            round: 1,
        });
    }

    let mut seeds: Vec<usize> = Vec::with_capacity(k);
    let mut seed_labels: Vec<u64> = Vec::with_capacity(k);
    let mut rounds: Vec<RoundStat> = Vec::with_capacity(k);
    let mut base_spread = 0.0;
    let mut round = 1usize;
    let mut round_clock = round_start;
    while seeds.len() < k {
        let top = heap.pop().expect("heap holds all non-seed candidates");
        if top.round == round {
            seeds.push(top.node);
            seed_labels.push(top.label);
            base_spread = estimates.spread(&seeds)?;
            rounds.push(RoundStat {
                seed: top.label,
                gain: top.gain,
                evaluated: estimates.calls - evaluated_this_round,
                candidates: n - (seeds.len() - 1),
                millis: round_clock.elapsed().as_secs_f64() * 1e3,
            });
            round += 1;
            evaluated_this_round = estimates.calls;
            round_clock = Instant::now();
            continue;
        }
        let mut with: Vec<usize> = seeds.clone();
        with.push(top.node);
        let gain = estimates.spread(&with)? - base_spread;
        heap.push(HeapEntry {
            gain,
            label: top.label,
            node: top.node,
            round,
        });
    }

    Ok(SelectionTrace {
        algorithm: "celf".into(),
        seeds: seed_labels,
        seed_indices: seeds,
        rounds,
        sigma: base_spread,
        total_millis: started.elapsed().as_secs_f64() * 1e3,
    })
}

/// Non-lazy Monte-Carlo greedy: every round estimates every candidate's
/// marginal. Shares the per-set estimate streams with `mc_greedy_celf`, so
/// on graphs where sampling noise does not invert any stale ordering the two
/// return identical selections.
pub fn mc_greedy_exhaustive(
    g: &Graph,
    k: usize,
    runs: usize,
    rng_seed: u64,
) -> Result<SelectionTrace> {
    check_k(k, g.n())?;
    if runs == 0 {
        return Err(Error::InvalidArgument("run count must be at least 1".into()));
    }
    let started = Instant::now();
    let cascade = CascadeModel::new(g);
    let mut estimates = EstimateCache::new(g, &cascade, runs, rng_seed);
    let n = g.n();
    let mut selected = vec![false; n];
    let mut seeds: Vec<usize> = Vec::with_capacity(k);
    let mut seed_labels = Vec::with_capacity(k);
    let mut rounds = Vec::with_capacity(k);
    let mut base_spread = 0.0;
    for _ in 0..k {
        let round_clock = Instant::now();
        let before = estimates.calls;
        let mut order: Vec<usize> = (0..n).filter(|&v| !selected[v]).collect();
        order.sort_unstable_by_key(|&v| g.label(v));
        let mut best: Option<(usize, f64)> = None;
        for &v in &order {
            let mut with = seeds.clone();
            with.push(v);
            let gain = estimates.spread(&with)? - base_spread;
            if best.map(|(_, bg)| gain > bg).unwrap_or(true) {
                best = Some((v, gain));
            }
        }
        let (chosen, gain) = best.expect("k <= n leaves at least one candidate");
        selected[chosen] = true;
        seeds.push(chosen);
        seed_labels.push(g.label(chosen));
        base_spread = estimates.spread(&seeds)?;
        rounds.push(RoundStat {
            seed: g.label(chosen),
            gain,
            evaluated: estimates.calls - before,
            candidates: order.len(),
            millis: round_clock.elapsed().as_secs_f64() * 1e3,
        });
    }
    Ok(SelectionTrace {
        algorithm: "mc-greedy".into(),
        seeds: seed_labels,
        seed_indices: seeds,
        rounds,
        sigma: base_spread,
        total_millis: started.elapsed().as_secs_f64() * 1e3,
    })
}
