//! Independent influence given a seed set, joint seed-set influence, and
//! marginal gains.
//!
//! Seed nodes are grounded: they are never influenced by the queried node
//! and never propagate its influence. That is exactly a masked solve of the
//! influence system restricted to non-seed nodes. The joint influence of a
//! seed set combines per-seed independent influences by the product rule
//! `f_S∪{s},j = 1 - (1 - f_Sj)(1 - f_sj)`, and the marginal gain of adding
//! `s` to `S` collapses to `sum_j f_sj * (1 - f_Sj)` — one masked solve.

use crate::error::{Error, Result};
use crate::influence::InfluenceModel;
use crate::solver::{gauss_seidel_solve, Orientation, PropagationSystem};

/// A seed set under construction: the seeds in insertion order, the joint
/// influence vector, and the lazy gain bookkeeping used by the maximizer.
#[derive(Debug, Clone)]
pub struct InfluenceState {
    seeds: Vec<usize>,
    is_seed: Vec<bool>,
    joint: Vec<f64>,
    /// Cached upper bound / last exact marginal gain per node.
    pub gains: Vec<f64>,
    /// Round number of each node's last exact gain evaluation (0 = never).
    pub gain_round: Vec<usize>,
}

impl InfluenceState {
    /// Empty seed set over `n` nodes; joint influence is identically zero.
    pub fn new(n: usize) -> InfluenceState {
        InfluenceState {
            seeds: Vec::new(),
            is_seed: vec![false; n],
            joint: vec![0.0; n],
            gains: vec![0.0; n],
            gain_round: vec![0; n],
        }
    }

    pub fn n(&self) -> usize {
        self.is_seed.len()
    }

    pub fn seeds(&self) -> &[usize] {
        &self.seeds
    }

    pub fn contains(&self, v: usize) -> bool {
        self.is_seed[v]
    }

    /// Seed membership as a mask suitable for masked solves.
    pub fn mask(&self) -> &[bool] {
        &self.is_seed
    }

    pub fn joint(&self) -> &[f64] {
        &self.joint
    }

    /// Influence spread of the current seed set: seeds contribute exactly 1
    /// each, other nodes their joint influence.
    pub fn sigma(&self) -> f64 {
        let rest: f64 = (0..self.n())
            .filter(|&j| !self.is_seed[j])
            .map(|j| self.joint[j])
            .sum();
        self.seeds.len() as f64 + rest
    }
}

impl InfluenceModel {
    /// Independent influence of node `k` with the nodes of `seeds` grounded.
    ///
    /// The returned vector is 1 at `k`, exactly 0 on every seed, and equals
    /// the plain influence vector when `seeds` is empty.
    pub fn independent_influence(&self, k: usize, seeds: &[usize]) -> Result<Vec<f64>> {
        let mut mask = vec![false; self.n()];
        for &s in seeds {
            if s >= self.n() {
                return Err(Error::InvalidArgument(format!(
                    "seed index {s} out of range for {} nodes",
                    self.n()
                )));
            }
            mask[s] = true;
        }
        self.independent_influence_masked(k, &mask)
    }

    /// Masked variant used on hot paths: `mask[s]` marks grounded nodes.
    pub fn independent_influence_masked(&self, k: usize, mask: &[bool]) -> Result<Vec<f64>> {
        let n = self.n();
        if k >= n {
            return Err(Error::InvalidArgument(format!(
                "node index {k} out of range for {n} nodes"
            )));
        }
        if mask.len() != n {
            return Err(Error::InvalidArgument(format!(
                "mask length {} does not match node count {n}",
                mask.len()
            )));
        }
        if mask[k] {
            return Err(Error::InvalidArgument(format!(
                "queried node index {k} is in the seed set"
            )));
        }
        let system = PropagationSystem::masked(
            self.transmission(),
            self.lambda(),
            Orientation::Influence,
            mask,
        );
        let mut rhs = vec![0.0; n];
        rhs[k] = 1.0;
        let report = gauss_seidel_solve(&system, &rhs, self.solver_config())?;
        if !report.converged {
            return Err(Error::NonConvergence {
                iterations: report.iterations,
                last_update: report.final_update,
            });
        }
        let at_k = report.x[k];
        if !at_k.is_finite() || at_k <= 0.0 {
            return Err(Error::Numerical(format!(
                "masked diagonal entry {at_k} at node index {k} is not positive"
            )));
        }
        let mut values = report.x;
        for v in values.iter_mut() {
            *v /= at_k;
        }
        Ok(values)
    }

    /// Marginal spread gain of adding `s` to the state's seed set.
    pub fn marginal_gain(&self, s: usize, state: &InfluenceState) -> Result<f64> {
        Ok(self.marginal_gain_with_vector(s, state)?.0)
    }

    /// Marginal gain plus the independent influence vector that produced it,
    /// so a selected candidate's vector can be reused for the joint update.
    pub fn marginal_gain_with_vector(
        &self,
        s: usize,
        state: &InfluenceState,
    ) -> Result<(f64, Vec<f64>)> {
        if state.contains(s) {
            return Err(Error::InvalidArgument(format!(
                "candidate index {s} is already a seed"
            )));
        }
        let indep = self.independent_influence_masked(s, state.mask())?;
        let gain = indep
            .iter()
            .zip(state.joint().iter())
            .map(|(&f, &j)| f * (1.0 - j))
            .sum();
        Ok((gain, indep))
    }

    /// Builds the joint-influence state for a seed set by chained updates.
    pub fn joint_state(&self, seeds: &[usize]) -> Result<InfluenceState> {
        let mut state = InfluenceState::new(self.n());
        for &s in seeds {
            let indep = self.independent_influence_masked(s, state.mask())?;
            joint_update(&mut state, s, &indep)?;
        }
        Ok(state)
    }
}

/// Folds one seed's independent influence into the state by the product rule
/// and appends the seed. `indep` must be the independent influence of `s`
/// against the state's current seed set.
pub fn joint_update(state: &mut InfluenceState, s: usize, indep: &[f64]) -> Result<()> {
    if state.contains(s) {
        return Err(Error::InvalidArgument(format!(
            "node index {s} is already a seed"
        )));
    }
    if indep.len() != state.n() {
        return Err(Error::InvalidArgument(format!(
            "independent influence length {} does not match node count {}",
            indep.len(),
            state.n()
        )));
    }
    debug_assert!((indep[s] - 1.0).abs() < 1e-9);
    for (j, (joint, &f)) in state.joint.iter_mut().zip(indep.iter()).enumerate() {
        if state.is_seed[j] {
            continue;
        }
        *joint = 1.0 - (1.0 - *joint) * (1.0 - f);
    }
    state.is_seed[s] = true;
    state.joint[s] = 1.0;
    state.seeds.push(s);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::solver::SolverConfig;
    use crate::transmission::{DampingVector, WeightScheme};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn two_node_model() -> InfluenceModel {
        let g = Graph::from_arcs(&[(1, 2, 1.0), (2, 1, 1.0)], false).unwrap();
        let l = DampingVector::uniform(2, 0.25).unwrap();
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
    fn two_node_independent_influence() {
        let m = two_node_model();
        let k = m.graph().index_of(1).unwrap();
        let s = m.graph().index_of(2).unwrap();
        let f = m.independent_influence(k, &[s]).unwrap();
        assert_eq!(f[k], 1.0);
        assert_eq!(f[s], 0.0);
    }

    #[test]
    fn empty_seed_set_equals_influence_vector() {
        let m = random_model(30, 3);
        for k in [0usize, 7, 19] {
            let indep = m.independent_influence(k, &[]).unwrap();
            let plain = m.influence_vector(k).unwrap();
            for j in 0..m.n() {
                assert!((indep[j] - plain.values[j]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn masked_middle_node_blocks_the_path() {
        let g = Graph::from_arcs(&[(1, 2, 1.0), (2, 3, 1.0)], true).unwrap();
        let l = DampingVector::uniform(3, 0.25).unwrap();
        let m =
            InfluenceModel::new(g, WeightScheme::WeightedCascade, l, SolverConfig::default())
                .unwrap();
        let k = m.graph().index_of(1).unwrap();
        let mid = m.graph().index_of(2).unwrap();
        let end = m.graph().index_of(3).unwrap();
        let f = m.independent_influence(k, &[mid]).unwrap();
        assert_eq!(f[end], 0.0);
        assert_eq!(f[mid], 0.0);
        assert_eq!(f[k], 1.0);
    }

    #[test]
    fn querying_a_seed_is_rejected() {
        let m = two_node_model();
        assert!(matches!(
            m.independent_influence(0, &[0]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn joint_update_two_node_case() {
        let m = two_node_model();
        let one = m.graph().index_of(1).unwrap();
        let two = m.graph().index_of(2).unwrap();
        let mut state = m.joint_state(&[two]).unwrap();
        assert!((state.joint()[one] - 0.8).abs() < 1e-8);
        assert_eq!(state.joint()[two], 1.0);
        let indep = m.independent_influence(one, state.seeds()).unwrap();
        joint_update(&mut state, one, &indep).unwrap();
        assert_eq!(state.joint()[one], 1.0);
        assert_eq!(state.joint()[two], 1.0);
        assert!((state.sigma() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn joint_of_single_seed_is_its_influence_vector() {
        let m = random_model(25, 9);
        let s = 4;
        let state = m.joint_state(&[s]).unwrap();
        let f = m.influence_vector(s).unwrap();
        for j in 0..m.n() {
            assert!((state.joint()[j] - f.values[j]).abs() < 1e-9);
        }
    }

    #[test]
    fn adding_a_seed_twice_is_rejected() {
        let m = two_node_model();
        let mut state = m.joint_state(&[0]).unwrap();
        let err = joint_update(&mut state, 0, &[1.0, 0.0]);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
        assert!(matches!(
            m.marginal_gain(0, &state),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn two_node_marginal_gain() {
        let m = two_node_model();
        let one = m.graph().index_of(1).unwrap();
        let two = m.graph().index_of(2).unwrap();
        let state = m.joint_state(&[two]).unwrap();
        let gain = m.marginal_gain(one, &state).unwrap();
        assert!((gain - 0.2).abs() < 1e-8);
    }

    #[test]
    fn marginal_gain_on_empty_set_is_total_influence() {
        let m = random_model(30, 17);
        let state = InfluenceState::new(m.n());
        for s in [0usize, 11, 23] {
            let gain = m.marginal_gain(s, &state).unwrap();
            let total = m.total_influence(s).unwrap();
            assert!((gain - total).abs() < 1e-7);
        }
    }

    #[test]
    fn marginal_gain_matches_from_scratch_sigma_difference() {
        let m = random_model(30, 21);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let mut picks: Vec<usize> = (0..m.n()).collect();
            picks.shuffle(&mut rng);
            let seeds = &picks[..3];
            let s = picks[3];
            let state = m.joint_state(seeds).unwrap();
            let gain = m.marginal_gain(s, &state).unwrap();
            let mut with: Vec<usize> = seeds.to_vec();
            with.push(s);
            let sigma_with = m.joint_state(&with).unwrap().sigma();
            let sigma_without = m.joint_state(seeds).unwrap().sigma();
            assert!((gain - (sigma_with - sigma_without)).abs() < 1e-6);
        }
    }

    #[test]
    fn independent_influence_is_dominated_and_zero_on_seeds() {
        // Properties: grounding can only shrink influence, totals stay below
        // the potential bound, and seed coordinates are exactly zero.
        let m = random_model(40, 33);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let mut picks: Vec<usize> = (0..m.n()).collect();
            picks.shuffle(&mut rng);
            let size = rng.random_range(1..6);
            let seeds = &picks[..size];
            let k = picks[size];
            let indep = m.independent_influence(k, seeds).unwrap();
            let plain = m.influence_vector(k).unwrap();
            let mut total = 0.0;
            for j in 0..m.n() {
                assert!(indep[j] <= plain.values[j] + 1e-8);
                total += indep[j];
            }
            for &s in seeds {
                assert_eq!(indep[s], 0.0);
            }
            assert!(total <= plain.total() + 1e-6);
            assert!(plain.total() <= m.upper_bound(k) + 1e-6);
        }
    }

    #[test]
    fn submodularity_over_random_chains() {
        let m = random_model(35, 51);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let mut picks: Vec<usize> = (0..m.n()).collect();
            picks.shuffle(&mut rng);
            let small = rng.random_range(1..4);
            let big = small + rng.random_range(1..4);
            let s1 = &picks[..small];
            let s2 = &picks[..big];
            let s = picks[big];
            let state1 = m.joint_state(s1).unwrap();
            let state2 = m.joint_state(s2).unwrap();
            let g1 = m.marginal_gain(s, &state1).unwrap();
            let g2 = m.marginal_gain(s, &state2).unwrap();
            assert!(g1 >= g2 - 1e-8, "submodularity violated: {g1} < {g2}");
        }
    }

    #[test]
    fn joint_chain_is_insertion_order_dependent_in_general() {
        // The incremental product rule credits a seed's influence against the
        // seeds present when it was added, so insertion order matters once a
        // later seed sits on an earlier seed's propagation paths. Explicit
        // probabilities on 1 -> 2 -> 3 -> 1: adding 1 before 2 keeps node 1's
        // through-2 contribution at node 3; the other order grounds it away.
        let g = Graph::from_arcs(&[(1, 2, 0.5), (2, 3, 0.7), (3, 1, 0.9)], false).unwrap();
        let l = DampingVector::uniform(3, 0.25).unwrap();
        let m =
            InfluenceModel::new(g, WeightScheme::Explicit, l, SolverConfig::default()).unwrap();
        let a = m.graph().index_of(1).unwrap();
        let b = m.graph().index_of(2).unwrap();
        let j = m.graph().index_of(3).unwrap();
        let ab = m.joint_state(&[a, b]).unwrap();
        let ba = m.joint_state(&[b, a]).unwrap();
        // Hand values: f_{1->3} = 0.35/1.5625 = 0.224, f_{2->3}^{({1})} = 0.56,
        // so order (1,2) gives 1 - (1-0.224)(1-0.56) = 0.65856; order (2,1)
        // masks node 1's only route and stays at 0.56.
        assert!((ab.joint()[j] - 0.65856).abs() < 1e-9);
        assert!((ba.joint()[j] - 0.56).abs() < 1e-9);
    }

    #[test]
    fn joint_chain_order_is_irrelevant_for_non_interacting_seeds() {
        // Seeds in separate components never appear on each other's paths,
        // so every insertion order yields the same joint vector.
        let m = {
            let g = Graph::from_arcs(
                &[(0, 1, 1.0), (1, 2, 1.0), (10, 11, 1.0), (11, 12, 1.0)],
                true,
            )
            .unwrap();
            let l = DampingVector::uniform(g.n(), 0.25).unwrap();
            InfluenceModel::new(g, WeightScheme::WeightedCascade, l, SolverConfig::default())
                .unwrap()
        };
        let s1 = m.graph().index_of(0).unwrap();
        let s2 = m.graph().index_of(11).unwrap();
        let forward = m.joint_state(&[s1, s2]).unwrap();
        let backward = m.joint_state(&[s2, s1]).unwrap();
        for j in 0..m.n() {
            assert!((forward.joint()[j] - backward.joint()[j]).abs() < 1e-9);
        }
        assert!((forward.sigma() - backward.sigma()).abs() < 1e-9);
    }

    #[test]
    fn sigma_is_monotone_in_the_seed_set() {
        let m = random_model(30, 71);
        let mut state = InfluenceState::new(m.n());
        let mut last = state.sigma();
        for s in [5usize, 1, 17, 22] {
            let indep = m.independent_influence_masked(s, state.mask()).unwrap();
            joint_update(&mut state, s, &indep).unwrap();
            let sigma = state.sigma();
            assert!(sigma >= last - 1e-12);
            last = sigma;
        }
    }
}
