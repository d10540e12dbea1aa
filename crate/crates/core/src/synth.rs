//! Synthetic graph generators for benchmarks and the test suites.

use rand::prelude::*;

use crate::graph::Graph;

/// Sparse random directed graph: a shuffled ring (so every node appears and
/// has inflow) plus `extra_arcs` uniformly random arcs. Conductances are
/// drawn from [0.5, 2) when `weighted`, else 1.
pub fn random_directed(n: usize, extra_arcs: usize, weighted: bool, rng: &mut impl Rng) -> Graph {
    assert!(n >= 2);
    let mut arcs = Vec::with_capacity(n + extra_arcs);
    let mut order: Vec<u64> = (0..n as u64).collect();
    order.shuffle(rng);
    let weight = |rng: &mut dyn RngCore| {
        if weighted {
            rng.random_range(0.5..2.0)
        } else {
            1.0
        }
    };
    for w in 0..n {
        arcs.push((order[w], order[(w + 1) % n], weight(rng)));
    }
    for _ in 0..extra_arcs {
        let a = rng.random_range(0..n as u64);
        let b = rng.random_range(0..n as u64);
        if a != b {
            arcs.push((a, b, weight(rng)));
        }
    }
    Graph::from_arcs(&arcs, false).expect("generator always emits arcs")
}

/// Preferential-attachment graph: starting from a small seed clique, each
/// new node attaches `m` undirected edges to endpoints sampled proportional
/// to degree. Produces the heavy-tailed hubs typical of social networks.
pub fn preferential_attachment(n: usize, m: usize, rng: &mut impl Rng) -> Graph {
    assert!(m >= 1 && n > m + 1);
    let mut edges: Vec<(u64, u64, f64)> = Vec::with_capacity(n * m);
    // Endpoint pool: sampling uniformly from it is degree-proportional.
    let mut pool: Vec<u64> = Vec::with_capacity(2 * n * m);
    for a in 0..=(m as u64) {
        for b in (a + 1)..=(m as u64) {
            edges.push((a, b, 1.0));
            pool.push(a);
            pool.push(b);
        }
    }
    for v in (m as u64 + 1)..(n as u64) {
        let mut chosen: Vec<u64> = Vec::with_capacity(m);
        let mut guard = 0;
        while chosen.len() < m && guard < 100 * m {
            let pick = pool[rng.random_range(0..pool.len())];
            if !chosen.contains(&pick) {
                chosen.push(pick);
            }
            guard += 1;
        }
        for &u in &chosen {
            edges.push((v, u, 1.0));
            pool.push(v);
            pool.push(u);
        }
    }
    Graph::from_arcs(&edges, true).expect("generator always emits arcs")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transmission::{build_transmission, WeightScheme};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_directed_covers_all_nodes_and_validates() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_directed(40, 80, true, &mut rng);
        assert_eq!(g.n(), 40);
        let t = build_transmission(&g, WeightScheme::WeightedCascade).unwrap();
        for j in 0..g.n() {
            assert!(t.theta(j) <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn preferential_attachment_has_heavy_hubs() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let g = preferential_attachment(300, 3, &mut rng);
        assert_eq!(g.n(), 300);
        let max_deg = (0..g.n()).map(|i| g.out_degree(i)).max().unwrap();
        let min_deg = (0..g.n()).map(|i| g.out_degree(i)).min().unwrap();
        assert!(min_deg >= 3);
        assert!(max_deg > 15, "expected a hub, max degree {max_deg}");
        assert!(build_transmission(&g, WeightScheme::WeightedCascade).is_ok());
    }
}
