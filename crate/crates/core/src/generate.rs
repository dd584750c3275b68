//! Named graphs, seeded random connected graphs, and all small graphs up to
//! isomorphism.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;

pub mod named {
    use crate::graph::Graph;

    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    /// `K_{1,leaves}` with centre 0.
    pub fn star(leaves: usize) -> Graph {
        Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    /// Outer 5-cycle 0..5, inner pentagram 5..10, spokes i – i+5.
    pub fn petersen() -> Graph {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        Graph::new(10, outer.chain(inner).chain(spokes)).unwrap()
    }

    /// Two triangles sharing vertex 0: {0,1,2} and {0,3,4}.
    pub fn bowtie() -> Graph {
        Graph::new(5, [(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap()
    }

    /// `K_4` minus the edge {2,3}; vertices 0 and 1 have degree 3.
    pub fn diamond() -> Graph {
        Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
    }
}

/// Random connected graph: a uniformly shuffled random-attachment spanning
/// tree plus each remaining pair independently with probability `density`.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, density: f64) -> Graph {
    assert!(n >= 1);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        edges.push((perm[i], perm[j]));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(density) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Deterministic sample of `count` connected graphs with between `min_n` and
/// `max_n` vertices and densities in `[0, max_density)`.
pub fn random_suite(seed: u64, count: usize, min_n: usize, max_n: usize, max_density: f64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(min_n..=max_n);
            let density = rng.random_range(0.0..max_density);
            random_connected(&mut rng, n, density)
        })
        .collect()
}

/// All graphs on exactly `n ≤ 8` vertices up to isomorphism.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 8, "exhaustive enumeration is limited to 8 vertices");
    let mut level: Vec<Graph> = vec![Graph::empty(0)];
    for size in 1..=n {
        let mut seen = std::collections::BTreeSet::new();
        let mut next = Vec::new();
        for g in &level {
            let prev = size - 1;
            for mask in 0u32..(1 << prev) {
                let edges = g
                    .edges()
                    .iter()
                    .copied()
                    .chain((0..prev).filter(|&u| mask >> u & 1 == 1).map(|u| (u, prev)));
                let h = Graph::new(size, edges).unwrap();
                if seen.insert(canonical_code(&h)) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    level
}

/// All connected graphs with `1..=max_n` vertices up to isomorphism.
pub fn all_connected_graphs(max_n: usize) -> Vec<Graph> {
    (1..=max_n)
        .flat_map(all_graphs)
        .filter(Graph::is_connected)
        .collect()
}

/// Minimum adjacency code over all vertex orders that sort vertices by
/// degree; isomorphic graphs get equal codes.
fn canonical_code(g: &Graph) -> u64 {
    let n = g.n();
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&v| g.degree(v));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &v in &by_degree {
        match groups.last_mut() {
            Some(last) if g.degree(last[0]) == g.degree(v) => last.push(v),
            _ => groups.push(vec![v]),
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut best = u64::MAX;
    permute_groups(g, &mut groups, 0, &mut order, &mut best);
    best
}

fn permute_groups(g: &Graph, groups: &mut [Vec<usize>], gi: usize, order: &mut Vec<usize>, best: &mut u64) {
    if gi == groups.len() {
        let mut code = 0u64;
        let mut bit = 0;
        for i in 0..order.len() {
            for j in i + 1..order.len() {
                if g.has_edge(order[i], order[j]) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        *best = (*best).min(code);
        return;
    }
    let len = groups[gi].len();
    heap_permutations(g, groups, gi, len, order, best);
}

fn heap_permutations(g: &Graph, groups: &mut [Vec<usize>], gi: usize, k: usize, order: &mut Vec<usize>, best: &mut u64) {
    if k <= 1 {
        let base = order.len();
        order.extend_from_slice(&groups[gi]);
        permute_groups(g, groups, gi + 1, order, best);
        order.truncate(base);
        return;
    }
    for i in 0..k {
        heap_permutations(g, groups, gi, k - 1, order, best);
        if k.is_multiple_of(2) {
            groups[gi].swap(i, k - 1);
        } else {
            groups[gi].swap(0, k - 1);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_counts_match_known_sequences() {
        // OEIS A000088 and A001349.
        let counts: Vec<usize> = (1..=6).map(|n| all_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
        let connected: Vec<usize> = (1..=6)
            .map(|n| all_graphs(n).into_iter().filter(Graph::is_connected).count())
            .collect();
        assert_eq!(connected, vec![1, 1, 2, 6, 21, 112]);
    }

    #[test]
    fn random_graphs_are_connected_and_seeded() {
        let a = random_suite(7, 30, 2, 9, 0.6);
        let b = random_suite(7, 30, 2, 9, 0.6);
        assert_eq!(a, b);
        assert!(a.iter().all(Graph::is_connected));
    }

    #[test]
    fn petersen_is_cubic() {
        let g = named::petersen();
        assert_eq!(g.m(), 15);
        assert!((0..10).all(|v| g.degree(v) == 3));
    }
}
