//! Directed weighted graphs with dense indices and SNAP-style edge-list parsing.
//!
//! Node labels from the input are arbitrary nonnegative integers; they are
//! mapped onto dense indices `0..n` in order of first appearance and kept in
//! an id map so every report can translate back to original labels. Both
//! out- and in-adjacency are stored in compressed (CSR) form: influence
//! sweeps walk in-arcs, cascade simulation walks out-arcs.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::{Error, Result};

/// Immutable directed graph with positive arc conductances.
///
/// Invariants enforced at construction: indices dense in `0..n`, no
/// self-loops (dropped and counted), no duplicate `(src, dst)` pairs
/// (aggregated by summing conductance), all conductances > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    directed: bool,
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    out_cond: Vec<f64>,
    in_offsets: Vec<usize>,
    in_sources: Vec<usize>,
    in_cond: Vec<f64>,
    labels: Vec<u64>,
    label_index: HashMap<u64, usize>,
    self_loops_dropped: usize,
    duplicates_merged: usize,
}

impl Graph {
    /// Builds a graph from `(src_label, dst_label, conductance)` triples.
    ///
    /// With `undirected` set, each triple also emits the mirrored arc before
    /// aggregation, so a doubly-listed undirected edge ends up with summed
    /// conductance in both directions.
    pub fn from_arcs(arcs: &[(u64, u64, f64)], undirected: bool) -> Result<Graph> {
        let mut labels = Vec::new();
        let mut label_index = HashMap::new();
        let mut intern = |label: u64, labels: &mut Vec<u64>| -> usize {
            *label_index.entry(label).or_insert_with(|| {
                labels.push(label);
                labels.len() - 1
            })
        };

        let mut triples = Vec::with_capacity(arcs.len());
        let mut self_loops = 0usize;
        for &(a, b, w) in arcs {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "conductance on arc {a} -> {b} must be a positive real, got {w}"
                )));
            }
            let ia = intern(a, &mut labels);
            let ib = intern(b, &mut labels);
            if ia == ib {
                self_loops += 1;
                continue;
            }
            triples.push((ia, ib, w));
            if undirected {
                triples.push((ib, ia, w));
            }
        }
        if labels.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok(Self::assemble(labels, label_index, triples, !undirected, self_loops))
    }

    /// Graph with `n` nodes (labels `0..n`) and no arcs.
    pub fn edgeless(n: usize) -> Graph {
        let labels: Vec<u64> = (0..n as u64).collect();
        let label_index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        Self::assemble(labels, label_index, Vec::new(), true, 0)
    }

    fn assemble(
        labels: Vec<u64>,
        label_index: HashMap<u64, usize>,
        mut triples: Vec<(usize, usize, f64)>,
        directed: bool,
        self_loops_dropped: usize,
    ) -> Graph {
        let n = labels.len();
        triples.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(triples.len());
        let mut duplicates_merged = 0usize;
        for (s, d, w) in triples {
            match merged.last_mut() {
                Some(last) if last.0 == s && last.1 == d => {
                    last.2 += w;
                    duplicates_merged += 1;
                }
                _ => merged.push((s, d, w)),
            }
        }

        let (out_offsets, out_targets, out_cond) = csr_by(n, &merged, |t| (t.0, t.1, t.2));
        merged.sort_unstable_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)));
        let (in_offsets, in_sources, in_cond) = csr_by(n, &merged, |t| (t.1, t.0, t.2));

        Graph {
            n,
            directed,
            out_offsets,
            out_targets,
            out_cond,
            in_offsets,
            in_sources,
            in_cond,
            labels,
            label_index,
            self_loops_dropped,
            duplicates_merged,
        }
    }

    /// Parses a whitespace-separated edge list: `src dst [weight]` per line,
    /// `#` comment lines and blank lines skipped, weight defaulting to 1.0.
    pub fn parse_edge_list<R: BufRead>(reader: R, undirected: bool) -> Result<Graph> {
        let mut arcs = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::Parse {
                line: lineno,
                message: format!("read failure: {e}"),
            })?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected `src dst [weight]`, got {} fields", fields.len()),
                });
            }
            let src: u64 = fields[0].parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("source label `{}` is not a nonnegative integer", fields[0]),
            })?;
            let dst: u64 = fields[1].parse().map_err(|_| Error::Parse {
                line: lineno,
                message: format!("target label `{}` is not a nonnegative integer", fields[1]),
            })?;
            let weight = match fields.get(2) {
                None => 1.0,
                Some(tok) => {
                    let w: f64 = tok.parse().map_err(|_| Error::Parse {
                        line: lineno,
                        message: format!("weight `{tok}` is not a real number"),
                    })?;
                    if !(w.is_finite() && w > 0.0) {
                        return Err(Error::Parse {
                            line: lineno,
                            message: format!("weight {w} must be positive"),
                        });
                    }
                    w
                }
            };
            arcs.push((src, dst, weight));
        }
        Graph::from_arcs(&arcs, undirected)
    }

    /// Every arc `(i, j, c)` becomes `(j, i, c)`; applying twice is the identity.
    pub fn reverse(&self) -> Graph {
        Graph {
            n: self.n,
            directed: self.directed,
            out_offsets: self.in_offsets.clone(),
            out_targets: self.in_sources.clone(),
            out_cond: self.in_cond.clone(),
            in_offsets: self.out_offsets.clone(),
            in_sources: self.out_targets.clone(),
            in_cond: self.out_cond.clone(),
            labels: self.labels.clone(),
            label_index: self.label_index.clone(),
            self_loops_dropped: self.self_loops_dropped,
            duplicates_merged: self.duplicates_merged,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.out_targets.len()
    }

    /// False when the graph was ingested with undirected expansion.
    pub fn directed(&self) -> bool {
        self.directed
    }

    /// Dense index -> original label.
    pub fn label(&self, i: usize) -> u64 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    /// Original label -> dense index, if present.
    pub fn index_of(&self, label: u64) -> Option<usize> {
        self.label_index.get(&label).copied()
    }

    /// Out-arcs of `i` as `(target, conductance)`.
    pub fn out_arcs(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.out_offsets[i]..self.out_offsets[i + 1];
        self.out_targets[range.clone()]
            .iter()
            .copied()
            .zip(self.out_cond[range].iter().copied())
    }

    /// In-arcs of `j` as `(source, conductance)`.
    pub fn in_arcs(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.in_offsets[j]..self.in_offsets[j + 1];
        self.in_sources[range.clone()]
            .iter()
            .copied()
            .zip(self.in_cond[range].iter().copied())
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out_offsets[i + 1] - self.out_offsets[i]
    }

    pub fn in_degree(&self, j: usize) -> usize {
        self.in_offsets[j + 1] - self.in_offsets[j]
    }

    /// Weighted in-conductance sums d_j = sum of conductances flowing into j.
    pub fn in_weights(&self) -> Vec<f64> {
        (0..self.n)
            .map(|j| self.in_arcs(j).map(|(_, c)| c).sum())
            .collect()
    }

    /// All arcs as `(src, dst, conductance)` in ascending `(src, dst)` order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| self.out_arcs(i).map(move |(j, c)| (i, j, c)))
    }

    pub fn self_loops_dropped(&self) -> usize {
        self.self_loops_dropped
    }

    pub fn duplicates_merged(&self) -> usize {
        self.duplicates_merged
    }

    /// Renders the graph back to edge-list text using original labels.
    pub fn edge_list_string(&self) -> String {
        let mut out = String::new();
        for (i, j, c) in self.arcs() {
            let _ = writeln!(out, "{} {} {}", self.labels[i], self.labels[j], c);
        }
        out
    }
}

fn csr_by<F>(n: usize, triples: &[(usize, usize, f64)], key: F) -> (Vec<usize>, Vec<usize>, Vec<f64>)
where
    F: Fn(&(usize, usize, f64)) -> (usize, usize, f64),
{
    let mut offsets = vec![0usize; n + 1];
    for t in triples {
        offsets[key(t).0 + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let mut heads = Vec::with_capacity(triples.len());
    let mut vals = Vec::with_capacity(triples.len());
    for t in triples {
        let (_, other, c) = key(t);
        heads.push(other);
        vals.push(c);
    }
    (offsets, heads, vals)
}
