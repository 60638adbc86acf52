//! Test-corpus generation: exhaustive enumeration of small graphs up to
//! isomorphism, and seeded random graphs with bounded degree.

use crate::graph::LabeledGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

fn canonical_code(n: usize, edge_bits: u64, pairs: &[(usize, usize)], perms: &[Vec<usize>]) -> u64 {
    let mut best = u64::MAX;
    for perm in perms {
        let mut code = 0u64;
        for (idx, (u, v)) in pairs.iter().enumerate() {
            if edge_bits & (1 << idx) != 0 {
                let (pu, pv) = (perm[*u], perm[*v]);
                let pos = pairs
                    .iter()
                    .position(|&(a, b)| (a, b) == (pu.min(pv), pu.max(pv)))
                    .unwrap();
                code |= 1 << pos;
            }
        }
        best = best.min(code);
    }
    let _ = n;
    best
}

/// All connected graphs on exactly `n <= 6` vertices, one representative
/// per isomorphism class, in a deterministic order.
pub fn connected_graphs(n: usize) -> Vec<LabeledGraph> {
    assert!((1..=6).contains(&n));
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let perms = permutations(n);
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for bits in 0u64..(1 << pairs.len()) {
        let g = LabeledGraph::from_edges(
            n,
            pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| bits & (1 << i) != 0)
                .map(|(_, &e)| e),
        );
        if !g.is_connected() {
            continue;
        }
        let code = canonical_code(n, bits, &pairs, &perms);
        if seen.insert(code) {
            out.push(g);
        }
    }
    out
}

/// Representatives of every connected graph with `1 <= n <= max_n` (`<= 6`).
pub fn connected_corpus(max_n: usize) -> Vec<LabeledGraph> {
    (1..=max_n).flat_map(connected_graphs).collect()
}

/// A seeded random graph with `n` vertices and maximum degree at most
/// `max_degree`. Candidate edges are shuffled and added while both
/// endpoints have room.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, max_degree: usize) -> LabeledGraph {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    pairs.shuffle(rng);
    let target = if pairs.is_empty() { 0 } else { rng.gen_range(0..=pairs.len()) };
    let mut g = LabeledGraph::new(n);
    let mut degree = vec![0usize; n];
    for &(u, v) in pairs.iter().take(target) {
        if degree[u] < max_degree && degree[v] < max_degree {
            g.add_edge(u, v).unwrap();
            degree[u] += 1;
            degree[v] += 1;
        }
    }
    g
}

/// Deterministic batch of random graphs: `count` graphs with sizes in
/// `2..=max_n` and degrees capped at `max_degree`.
pub fn random_graphs(seed: u64, count: usize, max_n: usize, max_degree: usize) -> Vec<LabeledGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=max_n);
            random_graph(&mut rng, n, max_degree)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_graph_counts_match_oeis() {
        // A001349: connected graphs on n nodes up to isomorphism
        assert_eq!(connected_graphs(1).len(), 1);
        assert_eq!(connected_graphs(2).len(), 1);
        assert_eq!(connected_graphs(3).len(), 2);
        assert_eq!(connected_graphs(4).len(), 6);
        assert_eq!(connected_graphs(5).len(), 21);
    }

    #[test]
    fn corpus_through_n5_has_31_graphs() {
        assert_eq!(connected_corpus(5).len(), 31);
    }

    #[test]
    fn random_graphs_are_deterministic_and_bounded() {
        let a = random_graphs(42, 20, 8, 4);
        let b = random_graphs(42, 20, 8, 4);
        for (x, y) in a.iter().zip(b.iter()) {
            assert_eq!(x.vertex_count(), y.vertex_count());
            assert_eq!(x.edges(), y.edges());
            assert!(x.max_degree() <= 4);
        }
    }
}
