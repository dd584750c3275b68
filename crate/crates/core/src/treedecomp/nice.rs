use rustc_hash::FxHashSet;

use super::{validate_td, TdViolation, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{AnnotatedSquare, GapClass, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NiceKind {
    Leaf,
    IntroduceVertex(usize),
    /// `u < v`. `class` is set when the decomposition is over a square graph.
    IntroduceEdge {
        u: usize,
        v: usize,
        class: Option<GapClass>,
    },
    Forget(usize),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceKind,
    /// Sorted.
    pub bag: Vec<usize>,
    pub children: Vec<usize>,
}

/// Rooted nice decomposition. Nodes are stored children-first, so iterating
/// `nodes()` in order is a valid bottom-up schedule and the root is last.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    nodes: Vec<NiceNode>,
}

impl NiceTreeDecomposition {
    pub fn nodes(&self) -> &[NiceNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(1).saturating_sub(1)
    }

    /// Introduced edges in node order.
    pub fn introduced_edges(&self) -> impl Iterator<Item = (usize, usize, Option<GapClass>)> + '_ {
        self.nodes.iter().filter_map(|n| match n.kind {
            NiceKind::IntroduceEdge { u, v, class } => Some((u, v, class)),
            _ => None,
        })
    }

    /// Checks every structural rule of a nice decomposition against `g`:
    /// empty root and leaves, per-kind bag relations, each edge introduced
    /// exactly once, and the ordinary decomposition conditions.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidDecomposition(TdViolation::NotNice(msg)));
        let root = self.root();
        if !self.nodes[root].bag.is_empty() {
            return fail("root bag is not empty".into());
        }
        let mut parents = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                if c >= i {
                    return fail(format!("node {i} has child {c} stored after it"));
                }
                parents[c] += 1;
            }
            let kids: Vec<&Vec<usize>> = node.children.iter().map(|&c| &self.nodes[c].bag).collect();
            let ok = match node.kind {
                NiceKind::Leaf => kids.is_empty() && node.bag.is_empty(),
                NiceKind::IntroduceVertex(v) => {
                    kids.len() == 1 && !kids[0].contains(&v) && with(kids[0], v) == node.bag
                }
                NiceKind::IntroduceEdge { u, v, .. } => {
                    kids.len() == 1
                        && *kids[0] == node.bag
                        && node.bag.contains(&u)
                        && node.bag.contains(&v)
                        && g.has_edge(u, v)
                }
                NiceKind::Forget(v) => {
                    kids.len() == 1 && kids[0].contains(&v) && without(kids[0], v) == node.bag
                }
                NiceKind::Join => kids.len() == 2 && *kids[0] == node.bag && *kids[1] == node.bag,
            };
            if !ok {
                return fail(format!("node {i} ({:?}) breaks its bag relation", node.kind));
            }
        }
        if parents[..root].iter().any(|&p| p != 1) || parents[root] != 0 {
            return fail("nodes do not form a single rooted tree".into());
        }
        let mut seen = FxHashSet::default();
        for (u, v, _) in self.introduced_edges() {
            if !seen.insert((u, v)) {
                return fail(format!("edge {{{u}, {v}}} introduced twice"));
            }
        }
        if let Some(&(u, v)) = g.edges().iter().find(|e| !seen.contains(e)) {
            return fail(format!("edge {{{u}, {v}}} never introduced"));
        }
        validate_td(g, &self.as_tree_decomposition())
    }

    /// The underlying plain decomposition (same bags, same tree).
    pub fn as_tree_decomposition(&self) -> TreeDecomposition {
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(i, n)| n.children.iter().map(move |&c| (c, i)))
            .collect();
        TreeDecomposition::new(self.nodes.iter().map(|n| n.bag.clone()).collect(), edges)
    }
}

fn with(bag: &[usize], v: usize) -> Vec<usize> {
    let mut out = bag.to_vec();
    let pos = out.partition_point(|&w| w < v);
    out.insert(pos, v);
    out
}

fn without(bag: &[usize], v: usize) -> Vec<usize> {
    bag.iter().copied().filter(|&w| w != v).collect()
}

struct Builder<'a> {
    graph: &'a Graph,
    classify: &'a dyn Fn(usize, usize) -> Option<GapClass>,
    nodes: Vec<NiceNode>,
    introduced: FxHashSet<(usize, usize)>,
}

impl Builder<'_> {
    fn push(&mut self, kind: NiceKind, bag: Vec<usize>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// Introduces `v` on top of `top`, then every not-yet-introduced edge
    /// from `v` into the bag, in ascending order of the other endpoint.
    fn introduce(&mut self, top: usize, v: usize) -> usize {
        let bag = with(&self.nodes[top].bag, v);
        let mut cur = self.push(NiceKind::IntroduceVertex(v), bag.clone(), vec![top]);
        for &w in &bag {
            if w == v || !self.graph.has_edge(v, w) {
                continue;
            }
            let key = (v.min(w), v.max(w));
            if self.introduced.insert(key) {
                let kind = NiceKind::IntroduceEdge {
                    u: key.0,
                    v: key.1,
                    class: (self.classify)(key.0, key.1),
                };
                cur = self.push(kind, bag.clone(), vec![cur]);
            }
        }
        cur
    }

    fn forget(&mut self, top: usize, v: usize) -> usize {
        let bag = without(&self.nodes[top].bag, v);
        self.push(NiceKind::Forget(v), bag, vec![top])
    }

    /// Forgets (descending) then introduces until the top bag is `target`.
    /// Each introduction picks the pending vertex with the most edges into
    /// the bag so far, smallest index on ties.
    fn morph(&mut self, mut top: usize, target: &[usize]) -> usize {
        let current = self.nodes[top].bag.clone();
        for &v in current.iter().rev() {
            if target.binary_search(&v).is_err() {
                top = self.forget(top, v);
            }
        }
        let mut pending: Vec<usize> = target
            .iter()
            .copied()
            .filter(|v| current.binary_search(v).is_err())
            .collect();
        while !pending.is_empty() {
            let bag = &self.nodes[top].bag;
            let (i, _) = pending
                .iter()
                .enumerate()
                .max_by_key(|&(_, &v)| {
                    let links = bag.iter().filter(|&&w| self.graph.has_edge(v, w)).count();
                    (links, std::cmp::Reverse(v))
                })
                .unwrap();
            let v = pending.remove(i);
            top = self.introduce(top, v);
        }
        top
    }
}

/// Nice decomposition of `g` from a valid decomposition, rooted at bag 0.
pub fn make_nice(g: &Graph, td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    build(g, td, &|_, _| None)
}

/// Nice decomposition of the square graph whose edge-introduce nodes carry
/// the distance class of their edge.
pub fn make_nice_square(sq: &AnnotatedSquare, td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    build(&sq.base, td, &|u, v| sq.gap_class(u, v))
}

fn build(
    g: &Graph,
    td: &TreeDecomposition,
    classify: &dyn Fn(usize, usize) -> Option<GapClass>,
) -> Result<NiceTreeDecomposition> {
    validate_td(g, td)?;
    let mut b = Builder {
        graph: g,
        classify,
        nodes: Vec::new(),
        introduced: FxHashSet::default(),
    };
    if td.num_bags() == 0 {
        b.push(NiceKind::Leaf, Vec::new(), Vec::new());
        return Ok(NiceTreeDecomposition { nodes: b.nodes });
    }

    // Iterative post-order of the decomposition tree rooted at bag 0.
    let adj = td.tree_adjacency();
    let mut parent = vec![usize::MAX; td.num_bags()];
    let mut order = Vec::with_capacity(td.num_bags());
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in adj[x].iter().rev() {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    order.reverse();

    let mut top_of = vec![usize::MAX; td.num_bags()];
    for &x in &order {
        let bag = &td.bags()[x];
        let mut children: Vec<usize> = adj[x].iter().copied().filter(|&y| y != parent[x]).collect();
        children.sort_unstable();
        let mut tops = Vec::with_capacity(children.len().max(1));
        if children.is_empty() {
            let leaf = b.push(NiceKind::Leaf, Vec::new(), Vec::new());
            tops.push(b.morph(leaf, bag));
        }
        for c in children {
            tops.push(b.morph(top_of[c], bag));
        }
        let mut acc = tops[0];
        for &t in &tops[1..] {
            acc = b.push(NiceKind::Join, bag.clone(), vec![acc, t]);
        }
        top_of[x] = acc;
    }
    let mut top = top_of[0];
    let root_bag = td.bags()[0].clone();
    for &v in root_bag.iter().rev() {
        top = b.forget(top, v);
    }
    debug_assert_eq!(top, b.nodes.len() - 1);
    Ok(NiceTreeDecomposition { nodes: b.nodes })
}
