//! Influence vectors, the influence matrix, total influence, and its
//! potential-based upper bound.
//!
//! The influence of node i on node j is the (j, i) entry of the inverse
//! influence system normalized so self-influence is exactly 1. Summing a
//! vector gives the node's total influence; the per-node potentials give a
//! cheap upper bound `(1 + lambda_i) * potential_i` on that total without
//! solving the node's column.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::solver::{
    gauss_seidel_solve, solve_potentials, Orientation, PropagationSystem, SolverConfig,
};
use crate::transmission::{build_transmission, DampingVector, TransmissionMatrix, WeightScheme};

/// Default cap for full influence-matrix computation (O(|V||E|) work).
pub const MATRIX_CAP: usize = 5000;

/// Validated, immutable influence model: graph, transmission probabilities,
/// damping, solver settings, and the precomputed potentials.
///
/// Safe to share read-only across threads; all queries are pure.
pub struct InfluenceModel {
    graph: Graph,
    trans: TransmissionMatrix,
    lambda: DampingVector,
    solver: SolverConfig,
    potentials: Vec<f64>,
    matrix_cap: usize,
}

/// One row of the influence matrix: the per-node influence of `source`.
#[derive(Debug, Clone)]
pub struct InfluenceVector {
    pub source: usize,
    /// f_ij for every j; f at the source is 1 within solver tolerance.
    pub values: Vec<f64>,
    /// Diagonal entry p_ii of the inverse system used for normalization.
    pub source_diag: f64,
}

impl InfluenceVector {
    /// Total influence of the source: the sum of all entries.
    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Values clamped to [0, 1] for reporting. Raw values are kept in
    /// `values` so residual checks stay honest.
    pub fn clamped(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.clamp(0.0, 1.0)).collect()
    }
}

/// Per-node upper bounds with lazily filled exact totals.
#[derive(Debug, Clone)]
pub struct BoundTable {
    pub upper: Vec<f64>,
    pub exact: Vec<Option<f64>>,
}

impl BoundTable {
    pub fn set_exact(&mut self, i: usize, value: f64) {
        self.exact[i] = Some(value);
    }
}

impl InfluenceModel {
    /// Builds the model, validating the transmission scheme and damping and
    /// solving the potential system once up front.
    pub fn new(
        graph: Graph,
        scheme: WeightScheme,
        lambda: DampingVector,
        solver: SolverConfig,
    ) -> Result<InfluenceModel> {
        if lambda.len() != graph.n() {
            return Err(Error::InvalidArgument(format!(
                "damping vector length {} does not match node count {}",
                lambda.len(),
                graph.n()
            )));
        }
        let trans = build_transmission(&graph, scheme)?;
        let potentials = solve_potentials(&trans, &lambda, &solver)?;
        Ok(InfluenceModel {
            graph,
            trans,
            lambda,
            solver,
            potentials,
            matrix_cap: MATRIX_CAP,
        })
    }

    pub fn with_matrix_cap(mut self, cap: usize) -> InfluenceModel {
        self.matrix_cap = cap;
        self
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn transmission(&self) -> &TransmissionMatrix {
        &self.trans
    }

    pub fn lambda(&self) -> &DampingVector {
        &self.lambda
    }

    pub fn solver_config(&self) -> &SolverConfig {
        &self.solver
    }

    /// Potential of node i (column sum of the inverse influence system).
    pub fn potential(&self, i: usize) -> f64 {
        self.potentials[i]
    }

    pub fn potentials(&self) -> &[f64] {
        &self.potentials
    }

    /// Column i of the inverse influence system, solved to tolerance.
    pub(crate) fn inverse_column(&self, i: usize) -> Result<Vec<f64>> {
        let system = PropagationSystem::new(&self.trans, &self.lambda, Orientation::Influence);
        let mut rhs = vec![0.0; self.n()];
        rhs[i] = 1.0;
        let report = gauss_seidel_solve(&system, &rhs, &self.solver)?;
        if !report.converged {
            return Err(Error::NonConvergence {
                iterations: report.iterations,
                last_update: report.final_update,
            });
        }
        Ok(report.x)
    }

    /// Influence vector of node i: the i-th inverse column normalized by its
    /// diagonal entry, so the value at i is 1.
    pub fn influence_vector(&self, i: usize) -> Result<InfluenceVector> {
        self.check_node(i)?;
        let column = self.inverse_column(i)?;
        let diag = column[i];
        if !diag.is_finite() || diag <= 0.0 {
            return Err(Error::Numerical(format!(
                "diagonal entry {diag} at node index {i} is not positive"
            )));
        }
        let values = column.iter().map(|&v| v / diag).collect();
        Ok(InfluenceVector {
            source: i,
            values,
            source_diag: diag,
        })
    }

    /// All influence vectors, computed in parallel across sources. Refused
    /// above the configured cap; use per-node queries instead at scale.
    pub fn influence_matrix(&self) -> Result<Vec<InfluenceVector>> {
        let n = self.n();
        if n > self.matrix_cap {
            return Err(Error::CapExceeded {
                what: "full influence matrix (use per-node influence queries at this scale)",
                size: n,
                cap: self.matrix_cap,
            });
        }
        (0..n)
            .into_par_iter()
            .map(|i| self.influence_vector(i))
            .collect()
    }

    /// Total influence of node i: potential_i / p_ii. Costs one column solve.
    pub fn total_influence(&self, i: usize) -> Result<f64> {
        self.check_node(i)?;
        let column = self.inverse_column(i)?;
        let diag = column[i];
        if !diag.is_finite() || diag <= 0.0 {
            return Err(Error::Numerical(format!(
                "diagonal entry {diag} at node index {i} is not positive"
            )));
        }
        Ok(self.potentials[i] / diag)
    }

    /// Totals for many nodes, solved in parallel.
    pub fn total_influence_many(&self, nodes: &[usize]) -> Result<Vec<f64>> {
        nodes
            .par_iter()
            .map(|&i| self.total_influence(i))
            .collect()
    }

    /// Upper bound `(1 + lambda_i) * potential_i` on total influence.
    pub fn upper_bound(&self, i: usize) -> f64 {
        (1.0 + self.lambda.get(i)) * self.potentials[i]
    }

    /// Bound table over all nodes with no exact entries filled.
    pub fn bound_table(&self) -> BoundTable {
        let upper = (0..self.n()).map(|i| self.upper_bound(i)).collect();
        BoundTable {
            upper,
            exact: vec![None; self.n()],
        }
    }

    fn check_node(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            return Err(Error::InvalidArgument(format!(
                "node index {i} out of range for {} nodes",
                self.n()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::dense_inverse_oracle;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn two_node_model() -> InfluenceModel {
        let g = Graph::from_arcs(&[(1, 2, 1.0), (2, 1, 1.0)], false).unwrap();
        let l = DampingVector::uniform(2, 0.25).unwrap();
        InfluenceModel::new(g, WeightScheme::WeightedCascade, l, SolverConfig::default()).unwrap()
    }

    fn empty_model(n: usize) -> InfluenceModel {
        let g = Graph::edgeless(n);
        let l = DampingVector::uniform(n, 0.25).unwrap();
        InfluenceModel::new(g, WeightScheme::WeightedCascade, l, SolverConfig::default()).unwrap()
    }

    fn random_model(n: usize, seed: u64) -> InfluenceModel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut arcs = Vec::new();
        let mut order: Vec<u64> = (0..n as u64).collect();
        order.shuffle(&mut rng);
        for w in 0..n {
            arcs.push((order[w], order[(w + 1) % n], rng.random_range(0.5..2.0)));
        }
        for _ in 0..2 * n {
            let a = rng.random_range(0..n as u64);
            let b = rng.random_range(0..n as u64);
            if a != b {
                arcs.push((a, b, rng.random_range(0.5..2.0)));
            }
        }
        let g = Graph::from_arcs(&arcs, false).unwrap();
        let l = DampingVector::uniform(g.n(), 0.25).unwrap();
        InfluenceModel::new(g, WeightScheme::WeightedCascade, l, SolverConfig::default()).unwrap()
    }

    #[test]
    fn two_node_influence_vector() {
        let m = two_node_model();
        let source = m.graph().index_of(1).unwrap();
        let f = m.influence_vector(source).unwrap();
        assert!((f.values[source] - 1.0).abs() < 1e-8);
        let other = m.graph().index_of(2).unwrap();
        assert!((f.values[other] - 0.8).abs() < 1e-8);
    }

    #[test]
    fn empty_graph_influence_is_unit_vector() {
        let m = empty_model(4);
        for i in 0..4 {
            let f = m.influence_vector(i).unwrap();
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((f.values[j] - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn path_vector_matches_dense_oracle_normalization() {
        let g = Graph::from_arcs(&[(1, 2, 1.0), (2, 3, 1.0)], true).unwrap();
        let l = DampingVector::uniform(3, 0.25).unwrap();
        let m =
            InfluenceModel::new(g, WeightScheme::WeightedCascade, l, SolverConfig::default())
                .unwrap();
        let system =
            PropagationSystem::new(m.transmission(), m.lambda(), Orientation::Influence);
        let inv = dense_inverse_oracle(&system).unwrap();
        let i = m.graph().index_of(1).unwrap();
        let f = m.influence_vector(i).unwrap();
        for j in 0..3 {
            assert!((f.values[j] - inv[j][i] / inv[i][i]).abs() < 1e-8);
        }
    }

    #[test]
    fn two_node_matrix_and_totals() {
        let m = two_node_model();
        let rows = m.influence_matrix().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.8 };
                assert!((rows[i].values[j] - expect).abs() < 1e-8);
            }
        }
        let total = m.total_influence(0).unwrap();
        assert!((total - 1.8).abs() < 1e-8);
        assert!((m.upper_bound(0) - 5.0).abs() < 1e-8);
        assert!(total <= m.upper_bound(0) + 1e-6);
    }

    #[test]
    fn empty_graph_matrix_is_identity_and_bound_is_tight() {
        let m = empty_model(3);
        let rows = m.influence_matrix().unwrap();
        for (i, row) in rows.iter().enumerate() {
            for j in 0..3 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((row.values[j] - expect).abs() < 1e-12);
            }
        }
        for i in 0..3 {
            let total = m.total_influence(i).unwrap();
            assert!((total - 1.0).abs() < 1e-9);
            assert!((m.upper_bound(i) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn matrix_matches_dense_oracle_on_random_graph() {
        let m = random_model(50, 31);
        let n = m.n();
        let system =
            PropagationSystem::new(m.transmission(), m.lambda(), Orientation::Influence);
        let inv = dense_inverse_oracle(&system).unwrap();
        let rows = m.influence_matrix().unwrap();
        for i in 0..n {
            for j in 0..n {
                assert!((rows[i].values[j] - inv[j][i] / inv[i][i]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn model_identities_hold_on_random_graph() {
        let m = random_model(60, 41);
        let n = m.n();
        for i in 0..n {
            let f = m.influence_vector(i).unwrap();
            // Self-influence is 1 and values stay inside [0, 1].
            assert!((f.values[i] - 1.0).abs() <= 1e-8);
            for &v in &f.values {
                assert!(v >= -1e-12 && v <= 1.0 + 1e-8);
            }
            // Fixed-point residual of the propagation equation at j != i.
            for j in 0..n {
                if j == i {
                    continue;
                }
                let inflow: f64 = m
                    .transmission()
                    .in_arcs(j)
                    .map(|(k, t)| t * f.values[k])
                    .sum();
                let residual = (1.0 + m.lambda().get(j)) * f.values[j] - inflow;
                assert!(residual.abs() <= 1e-6, "residual {residual} at ({i},{j})");
            }
            // The normalization diagonal satisfies p_ii * (1 + lambda_i) >= 1.
            assert!(f.source_diag * (1.0 + m.lambda().get(i)) >= 1.0 - 1e-8);
            // Potential bound on the total.
            assert!(f.total() <= m.upper_bound(i) + 1e-6);
        }
    }

    #[test]
    fn matrix_cap_is_enforced() {
        let m = random_model(30, 5).with_matrix_cap(10);
        assert!(matches!(
            m.influence_matrix(),
            Err(Error::CapExceeded { .. })
        ));
    }
}
