//! Tree decompositions: validation, a min-fill heuristic, exact width for
//! tiny graphs, the neighbourhood-closure transform to a decomposition of
//! the square graph, and conversion to nice form.

mod nice;

use std::collections::BTreeSet;
use std::fmt;

pub use nice::{make_nice, make_nice_square, NiceKind, NiceNode, NiceTreeDecomposition};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default vertex cap for [`exact_td`].
pub const EXACT_TD_CAP: usize = 12;

/// Bags over an unrooted tree. Bags are kept sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    bags: Vec<Vec<usize>>,
    tree_edges: Vec<(usize, usize)>,
}

/// The first condition a decomposition fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdViolation {
    NotATree,
    MissingVertex(usize),
    UncoveredEdge(usize, usize),
    Incoherent(usize),
    NotNice(String),
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::NotATree => write!(f, "bag graph is not a tree"),
            TdViolation::MissingVertex(v) => write!(f, "vertex {v} is in no bag"),
            TdViolation::UncoveredEdge(u, v) => write!(f, "edge {{{u}, {v}}} is in no bag"),
            TdViolation::Incoherent(v) => {
                write!(f, "bags containing vertex {v} do not form a subtree")
            }
            TdViolation::NotNice(msg) => write!(f, "not a nice decomposition: {msg}"),
        }
    }
}

impl TreeDecomposition {
    pub fn new(bags: Vec<Vec<usize>>, tree_edges: Vec<(usize, usize)>) -> Self {
        let bags = bags
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b.dedup();
                b
            })
            .collect();
        TreeDecomposition { bags, tree_edges }
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    pub fn tree_edges(&self) -> &[(usize, usize)] {
        &self.tree_edges
    }

    pub fn num_bags(&self) -> usize {
        self.bags.len()
    }

    /// Largest bag size minus one (0 when there are no bags).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub(crate) fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.tree_edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn is_tree(&self) -> bool {
        let k = self.bags.len();
        if k == 0 {
            return self.tree_edges.is_empty();
        }
        if self.tree_edges.len() != k - 1
            || self.tree_edges.iter().any(|&(a, b)| a >= k || b >= k || a == b)
        {
            return false;
        }
        let adj = self.tree_adjacency();
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == k
    }
}

/// Every vertex and edge is covered, each vertex's bags form a subtree, and
/// the bag graph is a tree.
pub fn validate_td(g: &Graph, td: &TreeDecomposition) -> Result<()> {
    for (node, bag) in td.bags.iter().enumerate() {
        if let Some(&vertex) = bag.iter().find(|&&v| v >= g.n()) {
            return Err(Error::BagOutOfRange { node, vertex });
        }
    }
    let fail = |v| Err(Error::InvalidDecomposition(v));
    if !td.is_tree() {
        return fail(TdViolation::NotATree);
    }
    let mut count = vec![0usize; g.n()];
    for bag in &td.bags {
        for &v in bag {
            count[v] += 1;
        }
    }
    if let Some(v) = count.iter().position(|&c| c == 0) {
        return fail(TdViolation::MissingVertex(v));
    }
    for &(u, v) in g.edges() {
        if !td.bags.iter().any(|b| b.binary_search(&u).is_ok() && b.binary_search(&v).is_ok()) {
            return fail(TdViolation::UncoveredEdge(u, v));
        }
    }
    // A subforest of a tree is connected iff it has one edge fewer than nodes.
    let mut inner = vec![0usize; g.n()];
    for &(a, b) in &td.tree_edges {
        for &v in &td.bags[a] {
            if td.bags[b].binary_search(&v).is_ok() {
                inner[v] += 1;
            }
        }
    }
    if let Some(v) = (0..g.n()).find(|&v| inner[v] + 1 != count[v]) {
        return fail(TdViolation::Incoherent(v));
    }
    Ok(())
}

/// Decomposition induced by eliminating vertices in `order`: each vertex's
/// bag is itself plus its later neighbours in the fill graph, attached to the
/// bag of the earliest-eliminated of those neighbours.
pub fn from_elimination_order(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.n();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent_vertex = Vec::with_capacity(n);
    for &v in order {
        let later: Vec<usize> = adj[v].iter().copied().filter(|&w| pos[w] > pos[v]).collect();
        for (i, &a) in later.iter().enumerate() {
            for &b in &later[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        parent_vertex.push(later.iter().copied().min_by_key(|&w| pos[w]));
        let mut bag = later;
        bag.push(v);
        bags.push(bag);
    }
    // Node i belongs to order[i]; roots of a forest are chained together.
    let mut edges = Vec::new();
    let mut last_root: Option<usize> = None;
    for (i, p) in parent_vertex.iter().enumerate() {
        match p {
            Some(w) => edges.push((i, pos[*w])),
            None => {
                if let Some(r) = last_root {
                    edges.push((r, i));
                }
                last_root = Some(i);
            }
        }
    }
    compress(TreeDecomposition::new(bags, edges))
}

/// Contracts every tree edge whose one bag is contained in the other.
pub fn compress(td: TreeDecomposition) -> TreeDecomposition {
    let k = td.bags.len();
    let mut bags: Vec<Option<Vec<usize>>> = td.bags.into_iter().map(Some).collect();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); k];
    for &(a, b) in &td.tree_edges {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    let subset = |x: &[usize], y: &[usize]| x.iter().all(|v| y.binary_search(v).is_ok());
    let mut changed = true;
    while changed {
        changed = false;
        for a in 0..k {
            let Some(bag_a) = bags[a].as_ref() else { continue };
            let target = adj[a]
                .iter()
                .copied()
                .find(|&b| subset(bag_a, bags[b].as_ref().unwrap()));
            if let Some(b) = target {
                let nbrs: Vec<usize> = adj[a].iter().copied().filter(|&c| c != b).collect();
                for c in nbrs {
                    adj[c].remove(&a);
                    adj[c].insert(b);
                    adj[b].insert(c);
                }
                adj[b].remove(&a);
                adj[a].clear();
                bags[a] = None;
                changed = true;
            }
        }
    }
    let mut index = vec![usize::MAX; k];
    let mut out_bags = Vec::new();
    for (i, bag) in bags.into_iter().enumerate() {
        if let Some(bag) = bag {
            index[i] = out_bags.len();
            out_bags.push(bag);
        }
    }
    let mut out_edges = Vec::new();
    for a in 0..k {
        for &b in &adj[a] {
            if a < b {
                out_edges.push((index[a], index[b]));
            }
        }
    }
    out_edges.sort_unstable();
    TreeDecomposition::new(out_bags, out_edges)
}

/// Min-fill elimination ordering; ties by degree, then index.
pub fn min_fill_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let fill = |v: usize| {
            let nb: Vec<usize> = adj[v].iter().copied().collect();
            let mut missing = 0;
            for (i, &a) in nb.iter().enumerate() {
                missing += nb[i + 1..].iter().filter(|b| !adj[a].contains(b)).count();
            }
            missing
        };
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (fill(v), adj[v].len(), v))
            .unwrap();
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        for (i, &a) in nb.iter().enumerate() {
            for &b in &nb[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
            adj[a].remove(&v);
        }
        alive[v] = false;
        order.push(v);
    }
    order
}

/// Valid decomposition from a min-fill elimination ordering. No optimality
/// promise.
pub fn heuristic_td(g: &Graph) -> Result<TreeDecomposition> {
    g.require_connected()?;
    Ok(from_elimination_order(g, &min_fill_order(g)))
}

/// Minimum-width decomposition by dynamic programming over vertex subsets
/// (the best elimination ordering of each prefix set).
pub fn exact_td(g: &Graph, cap: usize) -> Result<TreeDecomposition> {
    g.require_connected()?;
    let n = g.n();
    if n > cap || n > 20 {
        return Err(Error::CapExceeded {
            what: "exact tree decomposition",
            actual: n,
            cap: cap.min(20),
            advice: "use heuristic_td",
        });
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    // |Q(S, v)|: vertices outside S ∪ {v} reachable from v through S.
    let q_size = |s: u32, v: usize| -> u32 {
        let mut reach = 1u32 << v;
        let mut frontier = reach;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let w = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= nbr[w];
            }
            next &= !reach;
            reach |= next;
            frontier = next & s;
        }
        (reach & !s & !(1 << v)).count_ones()
    };
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut best = vec![u32::MAX; 1 << n];
    let mut choice = vec![0u8; 1 << n];
    best[0] = 0;
    for s in 1..=full {
        let mut bits = s;
        while bits != 0 {
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let rest = s & !(1 << v);
            let w = best[rest as usize].max(q_size(rest, v));
            if w < best[s as usize] {
                best[s as usize] = w;
                choice[s as usize] = v as u8;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    Ok(from_elimination_order(g, &order))
}

/// Same tree, bags `X_i ∪ N(X_i)`: a decomposition of `G²` of width at most
/// `(t+1)Δ + t`.
pub fn square_td(g: &Graph, td: &TreeDecomposition) -> Result<TreeDecomposition> {
    validate_td(g, td)?;
    let bags = td
        .bags
        .iter()
        .map(|bag| {
            let mut out: Vec<usize> = bag
                .iter()
                .flat_map(|&v| std::iter::once(v).chain(g.neighbors(v).iter().copied()))
                .collect();
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    Ok(TreeDecomposition::new(bags, td.tree_edges.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::named;

    fn invalid(g: &Graph, td: &TreeDecomposition) -> TdViolation {
        match validate_td(g, td) {
            Err(Error::InvalidDecomposition(v)) => v,
            other => panic!("expected a violation, got {other:?}"),
        }
    }

    #[test]
    fn validation_conditions() {
        let p3 = named::path(3);
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2]], vec![(0, 1)]);
        assert!(validate_td(&p3, &td).is_ok());
        assert_eq!(td.width(), 1);

        assert_eq!(invalid(&named::complete(3), &td), TdViolation::UncoveredEdge(0, 2));

        let split = TreeDecomposition::new(vec![vec![0, 1], vec![2], vec![1, 2]], vec![(0, 1), (1, 2)]);
        assert_eq!(invalid(&p3, &split), TdViolation::Incoherent(1));

        let missing = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
        assert_eq!(invalid(&p3, &missing), TdViolation::MissingVertex(2));

        let cyclic = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2], vec![1]], vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(invalid(&p3, &cyclic), TdViolation::NotATree);

        let out_of_range = TreeDecomposition::new(vec![vec![0, 7]], vec![]);
        assert_eq!(
            validate_td(&p3, &out_of_range),
            Err(Error::BagOutOfRange { node: 0, vertex: 7 })
        );
    }

    #[test]
    fn heuristic_widths() {
        for n in 1..8 {
            let g = named::path(n);
            let td = heuristic_td(&g).unwrap();
            validate_td(&g, &td).unwrap();
            assert_eq!(td.width(), if n == 1 { 0 } else { 1 });
        }
        let td = heuristic_td(&named::complete(5)).unwrap();
        assert_eq!(td.width(), 4);
        assert_eq!(td.num_bags(), 1);
        let td = heuristic_td(&named::star(6)).unwrap();
        assert_eq!(td.width(), 1);
    }

    #[test]
    fn heuristic_on_random_trees_has_width_one() {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(3);
        for n in 2..15 {
            let tree = crate::generate::random_connected(&mut rng, n, 0.0);
            assert_eq!(tree.m(), n - 1);
            assert_eq!(heuristic_td(&tree).unwrap().width(), 1);
        }
    }

    #[test]
    fn exact_widths() {
        assert_eq!(exact_td(&named::cycle(5), EXACT_TD_CAP).unwrap().width(), 2);
        assert_eq!(exact_td(&named::star(4), EXACT_TD_CAP).unwrap().width(), 1);
        assert_eq!(exact_td(&named::complete(4), EXACT_TD_CAP).unwrap().width(), 3);
        assert_eq!(exact_td(&named::petersen(), EXACT_TD_CAP).unwrap().width(), 4);
        assert!(exact_td(&named::path(13), EXACT_TD_CAP).unwrap_err().is_refusal());
    }

    #[test]
    fn square_transform_examples() {
        for d in 1..=10 {
            let star = named::star(d);
            let td = heuristic_td(&star).unwrap();
            let sq = square_td(&star, &td).unwrap();
            validate_td(&star.square().base, &sq).unwrap();
            assert_eq!(sq.width(), d);
        }

        let p4 = named::path(4);
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2], vec![2, 3]], vec![(0, 1), (1, 2)]);
        let sq = square_td(&p4, &td).unwrap();
        assert_eq!(sq.bags(), &[vec![0, 1, 2], vec![0, 1, 2, 3], vec![1, 2, 3]]);
        validate_td(&p4.square().base, &sq).unwrap();

        let k1 = Graph::empty(1);
        let td = TreeDecomposition::new(vec![vec![0]], vec![]);
        assert_eq!(square_td(&k1, &td).unwrap(), td);

        let bad = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
        assert!(square_td(&p4, &bad).is_err());
    }
}
