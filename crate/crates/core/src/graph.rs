//! Simple undirected graphs on dense vertex indices `0..n`, the square
//! graph with distance annotations, and the degree and clique statistics the
//! solvers depend on.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Default vertex cap for [`Graph::max_clique_size`].
pub const CLIQUE_CAP: usize = 64;

/// Simple undirected graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges (in either
    /// orientation) are merged; self-loops and out-of-range endpoints are
    /// rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut norm = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::EndpointOutOfRange { u, v, n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        norm.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &norm {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: norm,
            adj,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// `N[v]` as a sorted list.
    pub fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        let mut out = self.adj[v].clone();
        let pos = out.partition_point(|&w| w < v);
        out.insert(pos, v);
        out
    }

    /// Δ(G); zero for edgeless graphs.
    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// BFS distances from `src`; `None` for unreachable vertices.
    pub fn distances_from(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// An empty graph counts as disconnected: solvers need at least one vertex.
    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components().len() == 1
    }

    /// Solver entry guard.
    pub fn require_connected(&self) -> Result<()> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected {
                components: self.components().len(),
            })
        }
    }

    /// Subgraph induced by `vertices` (must be sorted and distinct). Vertex
    /// `i` of the result corresponds to `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        Graph::new(vertices.len(), edges).expect("induced edges are in range")
    }

    /// Same vertex set with a subset of the edges removed.
    pub fn without_edges(&self, mut drop: impl FnMut(usize, usize) -> bool) -> Graph {
        let kept: Vec<_> = self
            .edges
            .iter()
            .copied()
            .filter(|&(u, v)| !drop(u, v))
            .collect();
        Graph::new(self.n, kept).expect("subset of valid edges")
    }

    /// Pairs `{u, w}` (with `u < w`) at distance exactly two.
    pub fn distance2_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut mark = vec![usize::MAX; self.n];
        for u in 0..self.n {
            for &v in &self.adj[u] {
                for &w in &self.adj[v] {
                    if w > u && mark[w] != u && !self.has_edge(u, w) {
                        mark[w] = u;
                        out.push((u, w));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The square graph with each edge tagged by its distance class.
    pub fn square(&self) -> AnnotatedSquare {
        let d2 = self.distance2_pairs();
        let mut tagged: Vec<((usize, usize), GapClass)> = self
            .edges
            .iter()
            .map(|&e| (e, GapClass::Dist1))
            .chain(d2.into_iter().map(|e| (e, GapClass::Dist2)))
            .collect();
        tagged.sort_unstable();
        let base = Graph::new(self.n, tagged.iter().map(|&(e, _)| e)).expect("valid square edges");
        let classes = tagged.into_iter().map(|(_, c)| c).collect();
        AnnotatedSquare { base, classes }
    }

    /// Exact clique number with the default cap.
    pub fn max_clique_size(&self) -> Result<usize> {
        self.max_clique_size_capped(CLIQUE_CAP)
    }

    /// Exact clique number by branch and bound; refuses graphs with more than
    /// `cap` vertices.
    pub fn max_clique_size_capped(&self, cap: usize) -> Result<usize> {
        if self.n > cap {
            return Err(Error::CapExceeded {
                what: "maximum clique search",
                actual: self.n,
                cap,
                advice: "use max_degree() + 1 as an upper bound instead",
            });
        }
        if self.n == 0 {
            return Ok(0);
        }
        // Candidates in descending degree order; colour-free bound |R| + |P|.
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(self.degree(v)));
        let mut best = 1;
        self.clique_expand(0, &order, &mut best);
        Ok(best)
    }

    fn clique_expand(&self, size: usize, cand: &[usize], best: &mut usize) {
        if cand.is_empty() {
            *best = (*best).max(size);
            return;
        }
        for (i, &v) in cand.iter().enumerate() {
            if size + (cand.len() - i) <= *best {
                return;
            }
            let next: Vec<usize> = cand[i + 1..]
                .iter()
                .copied()
                .filter(|&w| self.has_edge(v, w))
                .collect();
            self.clique_expand(size + 1, &next, best);
        }
    }
}

/// Distance class of an edge in the square graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GapClass {
    /// The edge exists in the base graph.
    Dist1,
    /// The endpoints are at distance exactly two.
    Dist2,
}

/// `G²` with every edge tagged by whether it comes from `G` or from a
/// distance-two pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedSquare {
    pub base: Graph,
    classes: Vec<GapClass>,
}

impl AnnotatedSquare {
    /// Class of edge `{u, v}` of the square, `None` if absent.
    pub fn gap_class(&self, u: usize, v: usize) -> Option<GapClass> {
        let key = (u.min(v), u.max(v));
        self.base
            .edges()
            .binary_search(&key)
            .ok()
            .map(|i| self.classes[i])
    }

    /// Edges of the square paired with their classes, in edge order.
    pub fn tagged_edges(&self) -> impl Iterator<Item = ((usize, usize), GapClass)> + '_ {
        self.base.edges().iter().copied().zip(self.classes.iter().copied())
    }
}
