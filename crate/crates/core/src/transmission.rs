//! Arc transmission probabilities and per-node damping coefficients.
//!
//! The transmission matrix T holds a probability t_ij on every arc (i, j).
//! The model requires that the probabilities flowing into any node sum to at
//! most one (theta_j <= 1); violating that is a hard validation error
//! because it breaks the diagonal dominance every solve in this crate
//! relies on.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Slack allowed on the theta_j <= 1 validation to absorb summation rounding.
pub const THETA_SLACK: f64 = 1e-12;

/// How arc conductances are turned into transmission probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightScheme {
    /// t_ij = c_ij / d_j with d_j the weighted in-conductance sum of j.
    /// Gives theta_j = 1 for every node with inflow, 0 otherwise.
    WeightedCascade,
    /// Every arc carries the same probability p; requires p * indegree(j) <= 1.
    Uniform(f64),
    /// Conductances already are probabilities; validated entrywise.
    Explicit,
}

/// Sparse transmission probabilities with per-node inflow sums.
///
/// Mirrors the graph's CSR layout in both directions so solver sweeps can
/// walk whichever side a system orientation needs.
#[derive(Debug, Clone)]
pub struct TransmissionMatrix {
    n: usize,
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    out_prob: Vec<f64>,
    in_offsets: Vec<usize>,
    in_sources: Vec<usize>,
    in_prob: Vec<f64>,
    theta: Vec<f64>,
}

/// Builds and validates the transmission matrix for a graph.
pub fn build_transmission(g: &Graph, scheme: WeightScheme) -> Result<TransmissionMatrix> {
    let n = g.n();
    let d = g.in_weights();
    let prob_of = |src: usize, dst: usize, c: f64| -> Result<f64> {
        let p = match scheme {
            WeightScheme::WeightedCascade => c / d[dst],
            WeightScheme::Uniform(p) => p,
            WeightScheme::Explicit => c,
        };
        if !(p.is_finite() && p > 0.0 && p <= 1.0 + THETA_SLACK) {
            return Err(Error::ArcProbability {
                src: g.label(src),
                dst: g.label(dst),
                value: p,
            });
        }
        Ok(p)
    };
    if let WeightScheme::Uniform(p) = scheme {
        if !(p.is_finite() && p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "uniform transmission probability must lie in (0, 1], got {p}"
            )));
        }
    }

    let mut out_offsets = Vec::with_capacity(n + 1);
    let mut out_targets = Vec::with_capacity(g.arc_count());
    let mut out_prob = Vec::with_capacity(g.arc_count());
    out_offsets.push(0);
    for i in 0..n {
        for (j, c) in g.out_arcs(i) {
            out_targets.push(j);
            out_prob.push(prob_of(i, j, c)?);
        }
        out_offsets.push(out_targets.len());
    }

    let mut in_offsets = Vec::with_capacity(n + 1);
    let mut in_sources = Vec::with_capacity(g.arc_count());
    let mut in_prob = Vec::with_capacity(g.arc_count());
    let mut theta = vec![0.0; n];
    in_offsets.push(0);
    for j in 0..n {
        let mut sum = 0.0;
        for (i, c) in g.in_arcs(j) {
            let p = prob_of(i, j, c)?;
            in_sources.push(i);
            in_prob.push(p);
            sum += p;
        }
        in_offsets.push(in_sources.len());
        if sum > 1.0 + THETA_SLACK {
            return Err(Error::InflowBound {
                node: g.label(j),
                theta: sum,
            });
        }
        theta[j] = sum;
    }

    Ok(TransmissionMatrix {
        n,
        out_offsets,
        out_targets,
        out_prob,
        in_offsets,
        in_sources,
        in_prob,
        theta,
    })
}

impl TransmissionMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Inflow sum theta_j.
    pub fn theta(&self, j: usize) -> f64 {
        self.theta[j]
    }

    pub fn thetas(&self) -> &[f64] {
        &self.theta
    }

    /// Entries t_kj of column j, iterated as `(k, t_kj)` over in-arcs of j.
    pub fn in_arcs(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.in_offsets[j]..self.in_offsets[j + 1];
        self.in_sources[range.clone()]
            .iter()
            .copied()
            .zip(self.in_prob[range].iter().copied())
    }

    /// Entries t_ij of row i, iterated as `(j, t_ij)` over out-arcs of i.
    pub fn out_arcs(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.out_offsets[i]..self.out_offsets[i + 1];
        self.out_targets[range.clone()]
            .iter()
            .copied()
            .zip(self.out_prob[range].iter().copied())
    }

    pub fn entry_count(&self) -> usize {
        self.out_targets.len()
    }
}

/// Per-node damping coefficients, each strictly inside (0, 1).
#[derive(Debug, Clone)]
pub struct DampingVector(Vec<f64>);

impl DampingVector {
    pub fn uniform(n: usize, lambda: f64) -> Result<DampingVector> {
        if !(lambda.is_finite() && lambda > 0.0 && lambda < 1.0) {
            return Err(Error::Damping(format!("{lambda}")));
        }
        Ok(DampingVector(vec![lambda; n]))
    }

    pub fn from_values(values: Vec<f64>) -> Result<DampingVector> {
        for (i, &v) in values.iter().enumerate() {
            if !(v.is_finite() && v > 0.0 && v < 1.0) {
                return Err(Error::Damping(format!("{v} at index {i}")));
            }
        }
        Ok(DampingVector(values))
    }

    /// Builds from `(original_label, lambda)` pairs; every node must be covered.
    pub fn from_labeled(g: &Graph, pairs: &[(u64, f64)]) -> Result<DampingVector> {
        let mut values = vec![None; g.n()];
        for &(label, v) in pairs {
            let idx = g.index_of(label).ok_or(Error::UnknownLabel(label))?;
            if values[idx].is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate damping value for node label {label}"
                )));
            }
            if !(v.is_finite() && v > 0.0 && v < 1.0) {
                return Err(Error::Damping(format!("{v} at node {label}")));
            }
            values[idx] = Some(v);
        }
        if let Some(missing) = values.iter().position(|v| v.is_none()) {
            return Err(Error::InvalidArgument(format!(
                "no damping value for node label {}",
                g.label(missing)
            )));
        }
        Ok(DampingVector(values.into_iter().map(|v| v.unwrap()).collect()))
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}
