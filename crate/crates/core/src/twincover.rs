//! True twins, twin covers, and the partition of the uncovered vertices
//! into types by their neighborhood inside the cover.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default cap on the size of a twin cover searched for by branching.
pub const TWIN_COVER_DEPTH: usize = 20;

/// Edges `{u, v}` with `N[u] = N[v]`, as `(u, v)` with `u < v`.
pub fn twin_edges(g: &Graph) -> Vec<(usize, usize)> {
    let closed: Vec<Vec<usize>> = (0..g.n()).map(|v| g.closed_neighborhood(v)).collect();
    g.edges().iter().copied().filter(|&(u, v)| closed[u] == closed[v]).collect()
}

fn non_twin_edges(g: &Graph) -> Vec<(usize, usize)> {
    let twins = twin_edges(g);
    g.edges()
        .iter()
        .copied()
        .filter(|e| twins.binary_search(e).is_err())
        .collect()
}

fn membership(n: usize, x: &[usize]) -> Vec<bool> {
    let mut inside = vec![false; n];
    for &v in x {
        inside[v] = true;
    }
    inside
}

fn first_uncovered(g: &Graph, x: &[usize]) -> Option<(usize, usize)> {
    let inside = membership(g.n(), x);
    non_twin_edges(g).into_iter().find(|&(u, v)| !inside[u] && !inside[v])
}

/// Every edge outside a true-twin pair has an endpoint in `x`.
pub fn is_twin_cover(g: &Graph, x: &[usize]) -> bool {
    first_uncovered(g, x).is_none()
}

/// A minimum twin cover, sorted. Refuses when none of size at most
/// [`TWIN_COVER_DEPTH`] exists.
pub fn min_twin_cover(g: &Graph) -> Result<Vec<usize>> {
    min_twin_cover_capped(g, TWIN_COVER_DEPTH)
}

pub fn min_twin_cover_capped(g: &Graph, depth: usize) -> Result<Vec<usize>> {
    let edges = non_twin_edges(g);
    let mut inside = vec![false; g.n()];
    let mut chosen = Vec::new();
    for size in 0..=depth.min(g.n()) {
        if branch(g, &edges, size, &mut inside, &mut chosen) {
            chosen.sort_unstable();
            return Ok(chosen);
        }
    }
    Err(Error::CapExceeded {
        what: "twin cover branching depth",
        actual: depth + 1,
        cap: depth,
        advice: "the graph has no twin cover this small; use the dp algorithm",
    })
}

/// Tries to cover every edge in `edges` with at most `budget` more vertices,
/// branching on the uncovered edge with the largest endpoint-degree sum.
fn branch(g: &Graph, edges: &[(usize, usize)], budget: usize, inside: &mut [bool], chosen: &mut Vec<usize>) -> bool {
    let pick = edges
        .iter()
        .filter(|&&(u, v)| !inside[u] && !inside[v])
        .max_by_key(|&&(u, v)| (g.degree(u) + g.degree(v), std::cmp::Reverse((u, v))));
    let Some(&(u, v)) = pick else { return true };
    if budget == 0 {
        return false;
    }
    for w in [u, v] {
        inside[w] = true;
        chosen.push(w);
        if branch(g, edges, budget - 1, inside, chosen) {
            return true;
        }
        chosen.pop();
        inside[w] = false;
    }
    false
}

/// Vertices outside the cover sharing one neighborhood inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinType {
    /// Sorted.
    pub members: Vec<usize>,
    /// `N(v) ∩ X` for every member, sorted.
    pub neighborhood: Vec<usize>,
    /// Components of `G[V∖X]` inside this type, each a clique; largest first.
    pub cliques: Vec<Vec<usize>>,
}

impl TwinType {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn omega(&self) -> usize {
        self.cliques.first().map_or(0, Vec::len)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinCoverContext {
    /// Sorted.
    pub cover: Vec<usize>,
    /// Ordered by smallest member.
    pub types: Vec<TwinType>,
}

impl TwinCoverContext {
    /// Index of the type containing `v`, or `None` for cover vertices.
    pub fn type_of(&self, v: usize) -> Option<usize> {
        self.types.iter().position(|t| t.members.binary_search(&v).is_ok())
    }
}

/// Groups `V∖X` by `N(v) ∩ X` and splits each group into its cliques.
pub fn type_partition(g: &Graph, x: &[usize]) -> Result<TwinCoverContext> {
    if let Some((u, v)) = first_uncovered(g, x) {
        return Err(Error::NotTwinCover(u, v));
    }
    let inside = membership(g.n(), x);
    let mut cover: Vec<usize> = x.to_vec();
    cover.sort_unstable();
    cover.dedup();

    let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for v in (0..g.n()).filter(|&v| !inside[v]) {
        let nb: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| inside[w]).collect();
        groups.entry(nb).or_default().push(v);
    }
    let rest: Vec<usize> = (0..g.n()).filter(|&v| !inside[v]).collect();
    let components: Vec<Vec<usize>> = g
        .induced(&rest)
        .components()
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|i| rest[i]).collect();
            c.sort_unstable();
            c
        })
        .collect();

    let mut types: Vec<TwinType> = groups
        .into_iter()
        .map(|(neighborhood, members)| {
            let mut cliques: Vec<Vec<usize>> = components
                .iter()
                .filter(|c| members.binary_search(&c[0]).is_ok())
                .cloned()
                .collect();
            cliques.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
            TwinType {
                members,
                neighborhood,
                cliques,
            }
        })
        .collect();
    types.sort_by_key(|t| t.members[0]);
    debug_assert!(cover.len() >= usize::BITS as usize || types.len() <= 1 << cover.len());
    Ok(TwinCoverContext { cover, types })
}

/// Moves every type with `p·ω_i > n_i` into the cover.
pub fn augment_cover(g: &Graph, ctx: &TwinCoverContext, p: u32) -> Result<TwinCoverContext> {
    let p = p as usize;
    let mut cover = ctx.cover.clone();
    for t in &ctx.types {
        if p * t.omega() > t.size() {
            cover.extend_from_slice(&t.members);
        }
    }
    let out = type_partition(g, &cover)?;
    let omega = ctx.types.iter().map(TwinType::omega).max().unwrap_or(0);
    let growth = 1usize
        .checked_shl(ctx.cover.len() as u32)
        .and_then(|s| s.checked_mul(p * omega));
    debug_assert!(growth.is_none_or(|b| out.cover.len() <= ctx.cover.len() + b));
    debug_assert!(out.types.iter().all(|t| p * t.omega() <= t.size()));
    Ok(out)
}
