//! Brute-force backtracking for `k`-L(p,q)-labeling. It is the ground truth
//! every other track is checked against.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labeling::{lower_bound_lambda, upper_bound_lambda, Label, Labeling, PqParams};

/// Default vertex cap for the exact oracle.
pub const EXACT_CAP: usize = 16;

/// Constraint view of `G²` in a fixed search order.
struct Search<'a, F> {
    order: Vec<usize>,
    /// For each position, `(earlier position, required gap)` pairs.
    back: Vec<Vec<(usize, u32)>>,
    k: Label,
    allowed: &'a F,
    reflect: bool,
    labels: Vec<Label>,
}

impl<F: Fn(usize, Label) -> bool> Search<'_, F> {
    fn run(&mut self, pos: usize) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let v = self.order[pos];
        // f ↦ k − f maps solutions to solutions, so the first vertex can stay
        // in the lower half.
        let top = if pos == 0 && self.reflect { self.k / 2 } else { self.k };
        'labels: for l in 0..=top {
            if !(self.allowed)(v, l) {
                continue;
            }
            for &(j, gap) in &self.back[pos] {
                if self.labels[j].abs_diff(l) < gap {
                    continue 'labels;
                }
            }
            self.labels[pos] = l;
            if self.run(pos + 1) {
                return true;
            }
        }
        false
    }
}

/// Smallest-last (degeneracy) order: repeatedly strip a minimum-degree
/// vertex, then reverse.
pub(crate) fn smallest_last_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut removed = vec![false; n];
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (deg[v], v))
            .unwrap();
        removed[v] = true;
        out.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    }
    out.reverse();
    out
}

fn check_input(g: &Graph, cap: usize) -> Result<()> {
    g.require_connected()?;
    if g.n() > cap {
        return Err(Error::CapExceeded {
            what: "exact oracle",
            actual: g.n(),
            cap,
            advice: "use the dp or tc algorithm",
        });
    }
    Ok(())
}

/// A labeling into `{0..k}` if one exists.
pub fn decide_exact(g: &Graph, params: PqParams, k: Label) -> Result<Option<Labeling>> {
    decide_exact_capped(g, params, k, EXACT_CAP)
}

pub fn decide_exact_capped(g: &Graph, params: PqParams, k: Label, cap: usize) -> Result<Option<Labeling>> {
    check_input(g, cap)?;
    Ok(search(g, params, k, &|_, _| true, true))
}

/// Like [`decide_exact`] but vertex `v` may only take labels `l` with
/// `allowed(v, l)`.
pub fn decide_exact_with_domains<F>(g: &Graph, params: PqParams, k: Label, allowed: &F) -> Result<Option<Labeling>>
where
    F: Fn(usize, Label) -> bool,
{
    check_input(g, EXACT_CAP)?;
    Ok(search(g, params, k, allowed, false))
}

fn search<F: Fn(usize, Label) -> bool>(
    g: &Graph,
    params: PqParams,
    k: Label,
    allowed: &F,
    reflect: bool,
) -> Option<Labeling> {
    let sq = g.square();
    let order = smallest_last_order(&sq.base);
    let mut pos = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut back = vec![Vec::new(); g.n()];
    for ((u, v), class) in sq.tagged_edges() {
        let (a, b) = (pos[u].min(pos[v]), pos[u].max(pos[v]));
        back[b].push((a, params.gap(class)));
    }
    let mut s = Search {
        order,
        back,
        k,
        allowed,
        reflect,
        labels: vec![0; g.n()],
    };
    if !s.run(0) {
        return None;
    }
    let mut out = vec![0; g.n()];
    for (i, &v) in s.order.iter().enumerate() {
        out[v] = s.labels[i];
    }
    Some(Labeling::new(out))
}

/// `λ_{p,q}` with a witness, ascending from the lower bound.
pub fn lambda_exact(g: &Graph, params: PqParams) -> Result<(Label, Labeling)> {
    lambda_exact_capped(g, params, EXACT_CAP)
}

pub fn lambda_exact_capped(g: &Graph, params: PqParams, cap: usize) -> Result<(Label, Labeling)> {
    check_input(g, cap)?;
    let upper = upper_bound_lambda(g, params);
    for k in lower_bound_lambda(g, params.p)..=upper {
        if let Some(f) = search(g, params, k, &|_, _| true, true) {
            return Ok((k, f));
        }
    }
    Err(Error::Internal(format!(
        "no labeling found up to the upper bound {upper}"
    )))
}
