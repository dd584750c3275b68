//! Decision by dynamic programming over a nice tree decomposition of the
//! square graph.
//!
//! A state is a total labeling of the current bag with labels in `0..=k`,
//! packed into a `u128` in mixed radix `k + 1` by sorted bag position. Every
//! constraint of `G²` is an explicit edge, so a state is filtered exactly once,
//! at the node that introduces its edge. An introduce-vertex node is fused with
//! the run of edge introductions directly above it, so unfiltered extensions
//! are never materialized.
//!
//! Only forget nodes keep data for traceback: for each surviving projected
//! state, the smallest label of the forgotten vertex that realized it.

use std::sync::atomic::{AtomicUsize, Ordering};

use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::graph::{GapClass, Graph};
use crate::labeling::{lower_bound_lambda, upper_bound_lambda, Label, Labeling, PqParams};
use crate::par::{self, Mode};
use crate::treedecomp::{
    compress, heuristic_td, make_nice_square, square_td, validate_td, NiceKind, NiceTreeDecomposition, TreeDecomposition,
};

pub const DEFAULT_STATE_BUDGET: usize = 10_000_000;
pub const STATE_BUDGET_ENV: &str = "SPANLAB_STATE_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DpConfig {
    /// Cap on the total number of states stored over all nodes.
    pub state_budget: usize,
    /// Whether sibling subtrees below a join are evaluated concurrently.
    pub mode: Mode,
}

impl Default for DpConfig {
    fn default() -> Self {
        DpConfig {
            state_budget: DEFAULT_STATE_BUDGET,
            mode: Mode::default(),
        }
    }
}

impl DpConfig {
    /// Default configuration with the budget taken from `SPANLAB_STATE_BUDGET`
    /// when it is set to a positive integer.
    pub fn from_env() -> Self {
        let state_budget = std::env::var(STATE_BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .filter(|&b| b > 0)
            .unwrap_or(DEFAULT_STATE_BUDGET);
        DpConfig {
            state_budget,
            ..Self::default()
        }
    }
}

type Table = FxHashSet<u128>;
type ForgetMap = FxHashMap<u128, Label>;

struct Run<'a> {
    inst: &'a DpInstance,
    nice: &'a NiceTreeDecomposition,
    params: PqParams,
    k: Label,
    radix: u128,
    /// `radix^i` for every bag position.
    pow: Vec<u128>,
    budget: usize,
    used: AtomicUsize,
    mode: Mode,
}

/// Per-branch output: the table at the top of the branch and the forget maps
/// produced inside it.
type Branch = (Table, Vec<(usize, ForgetMap)>);

impl Run<'_> {
    fn width(&self) -> usize {
        self.nice.width()
    }

    fn refuse(&self) -> Error {
        Error::StateBudget {
            budget: self.budget,
            width: self.width(),
            k: self.k,
        }
    }

    fn charge(&self, states: usize) -> Result<()> {
        let total = self.used.fetch_add(states, Ordering::Relaxed) + states;
        if total > self.budget {
            return Err(self.refuse());
        }
        Ok(())
    }

    fn label_at(&self, key: u128, pos: usize) -> Label {
        ((key / self.pow[pos]) % self.radix) as Label
    }

    fn insert_at(&self, key: u128, pos: usize, label: Label) -> u128 {
        let low = key % self.pow[pos];
        let high = key / self.pow[pos];
        low + self.pow[pos] * (label as u128 + self.radix * high)
    }

    fn remove_at(&self, key: u128, pos: usize) -> u128 {
        let low = key % self.pow[pos];
        let high = key / self.pow[pos + 1];
        low + self.pow[pos] * high
    }

    fn gap(&self, class: Option<GapClass>) -> u32 {
        self.params.gap(class.unwrap_or(GapClass::Dist1))
    }

    /// Constraint of the square edge `{a, b}` as seen from `a`.
    fn check(&self, a: usize, b: usize, class: Option<GapClass>) -> Check {
        let key = (a.min(b), a.max(b));
        let order = if !self.inst.ordered.contains(&key) {
            Order::Any
        } else if a < b {
            Order::Below
        } else {
            Order::Above
        };
        Check {
            gap: self.gap(class),
            order,
        }
    }

        /// Evaluates the subtree rooted at `top`.
    fn eval(&self, top: usize) -> Result<Branch> {
        let nodes = self.nice.nodes();
        let mut chain = vec![top];
        let mut cur = top;
        while let [child] = nodes[cur].children[..] {
            chain.push(child);
            cur = child;
        }
        let bottom = *chain.last().unwrap();
        let (mut table, mut forgets) = match nodes[bottom].kind {
            NiceKind::Leaf => {
                let mut t = Table::default();
                t.insert(0);
                (t, Vec::new())
            }
            NiceKind::Join => {
                let [a, b] = nodes[bottom].children[..] else {
                    return Err(Error::Internal("join without two children".into()));
                };
                let (ra, rb) = par::join(self.mode, || self.eval(a), || self.eval(b));
                let ((ta, mut fa), (tb, fb)) = (ra?, rb?);
                fa.extend(fb);
                let (small, large) = if ta.len() <= tb.len() { (ta, tb) } else { (tb, ta) };
                let t: Table = small.into_iter().filter(|s| large.contains(s)).collect();
                self.charge(t.len())?;
                (t, fa)
            }
            _ => return Err(Error::Internal("chain ends at a non-leaf unary node".into())),
        };

        // Walk the chain upward, fusing each introduce-vertex with the edge
        // introductions that follow it.
        let mut i = chain.len() - 1;
        while i > 0 {
            i -= 1;
            let id = chain[i];
            let node = &nodes[id];
            match node.kind {
                NiceKind::IntroduceVertex(v) => {
                    let pos = node.bag.binary_search(&v).unwrap();
                    let mut checks = Vec::new();
                    while i > 0 {
                        match nodes[chain[i - 1]].kind {
                            NiceKind::IntroduceEdge { u, v: w, class } if u == v || w == v => {
                                let other = if u == v { w } else { u };
                                let p = node.bag.binary_search(&other).unwrap();
                                // Position in the child key, which lacks `v`.
                                let p = if p > pos { p - 1 } else { p };
                                checks.push((p, self.check(v, other, class)));
                                i -= 1;
                            }
                            _ => break,
                        }
                    }
                    let top = if self.inst.anchor == Some(v) { self.k / 2 } else { self.k };
                    table = self.introduce(&table, pos, top, &checks)?;
                }
                NiceKind::IntroduceEdge { u, v, class } => {
                    let pu = node.bag.binary_search(&u).unwrap();
                    let pv = node.bag.binary_search(&v).unwrap();
                    let c = self.check(u, v, class);
                    table.retain(|&s| c.admits(self.label_at(s, pu), self.label_at(s, pv)));
                }
                NiceKind::Forget(v) => {
                    let child_bag = &nodes[node.children[0]].bag;
                    let pos = child_bag.binary_search(&v).unwrap();
                    let mut map = ForgetMap::default();
                    for &s in &table {
                        let l = self.label_at(s, pos);
                        map.entry(self.remove_at(s, pos))
                            .and_modify(|m| *m = (*m).min(l))
                            .or_insert(l);
                    }
                    table = map.keys().copied().collect();
                    self.charge(table.len())?;
                    forgets.push((id, map));
                }
                NiceKind::Leaf | NiceKind::Join => unreachable!("chain interior is unary"),
            }
            let cap = self.pow.get(node.bag.len()).copied().unwrap_or(u128::MAX);
            assert!(table.len() as u128 <= cap, "table exceeds (k+1)^|bag|");
        }
        Ok((table, forgets))
    }

    /// Extends every state with a label `l ≤ top` at `pos` that passes each
    /// check against an existing bag position.
    fn introduce(&self, table: &Table, pos: usize, top: Label, checks: &[(usize, Check)]) -> Result<Table> {
        let mut out = Table::default();
        let mut others = Vec::with_capacity(checks.len());
        for &s in table {
            others.clear();
            others.extend(checks.iter().map(|&(p, c)| (self.label_at(s, p), c)));
            for l in 0..=top {
                if others.iter().all(|&(m, c)| c.admits(l, m)) {
                    out.insert(self.insert_at(s, pos, l));
                }
            }
            if out.len() > self.budget {
                return Err(self.refuse());
            }
        }
        self.charge(out.len())?;
        Ok(out)
    }

    fn traceback(&self, forgets: Vec<(usize, ForgetMap)>) -> Result<Labeling> {
        let nodes = self.nice.nodes();
        let mut maps: Vec<Option<ForgetMap>> = vec![None; nodes.len()];
        for (id, m) in forgets {
            maps[id] = Some(m);
        }
        let mut labels = vec![None; self.inst.n];
        let mut stack = vec![(self.nice.root(), 0u128)];
        while let Some((id, key)) = stack.pop() {
            let node = &nodes[id];
            match node.kind {
                NiceKind::Leaf => {}
                NiceKind::IntroduceVertex(v) => {
                    let pos = node.bag.binary_search(&v).unwrap();
                    stack.push((node.children[0], self.remove_at(key, pos)));
                }
                NiceKind::IntroduceEdge { .. } => stack.push((node.children[0], key)),
                NiceKind::Forget(v) => {
                    let l = maps[id]
                        .as_ref()
                        .and_then(|m| m.get(&key))
                        .copied()
                        .ok_or_else(|| Error::Internal(format!("traceback lost state at node {id}")))?;
                    labels[v] = Some(l);
                    let pos = nodes[node.children[0]].bag.binary_search(&v).unwrap();
                    stack.push((node.children[0], self.insert_at(key, pos, l)));
                }
                NiceKind::Join => {
                    stack.push((node.children[0], key));
                    stack.push((node.children[1], key));
                }
            }
        }
        Labeling::from_partial(&labels)
    }
}

#[derive(Debug, Clone, Copy)]
enum Order {
    Any,
    /// The checked vertex takes the smaller label.
    Below,
    Above,
}

#[derive(Debug, Clone, Copy)]
struct Check {
    gap: u32,
    order: Order,
}

impl Check {
    fn admits(self, mine: Label, other: Label) -> bool {
        mine.abs_diff(other) >= self.gap
            && match self.order {
                Order::Any => true,
                Order::Below => mine < other,
                Order::Above => mine > other,
            }
    }
}

fn powers(radix: u128, count: usize) -> Option<Vec<u128>> {
    let mut pow = Vec::with_capacity(count + 1);
    let mut acc: u128 = 1;
    pow.push(acc);
    for _ in 0..count {
        acc = acc.checked_mul(radix)?;
        pow.push(acc);
    }
    Some(pow)
}

/// A nice decomposition of `G²` plus symmetry-breaking data.
///
/// Permuting a class of twins (equal open or equal closed neighborhoods) is
/// an automorphism, and any two members are within distance two, so labels
/// may be required to increase with the vertex index inside each class.
/// Reflection `l ↦ k − l` composed with re-sorting the classes fixes every
/// vertex outside them, so one such anchor may be kept in the lower half.
#[derive(Debug, Clone)]
pub struct DpInstance {
    nice: NiceTreeDecomposition,
    n: usize,
    ordered: FxHashSet<(usize, usize)>,
    anchor: Option<usize>,
}

impl DpInstance {
    /// Instance over the square transform of a decomposition of `G`. Bags
    /// contained in a neighbouring bag are merged away first: an edge is
    /// introduced once, so duplicated bags would only carry unfiltered states.
    pub fn with_td(g: &Graph, td: &TreeDecomposition) -> Result<Self> {
        g.require_connected()?;
        validate_td(g, td)?;
        Self::over_square(g, &compress(square_td(g, td)?))
    }

    /// Instance over the narrower of the square transform of a heuristic
    /// decomposition of `G` and a heuristic decomposition of `G²` itself.
    pub fn heuristic(g: &Graph) -> Result<Self> {
        g.require_connected()?;
        let via_g = compress(square_td(g, &heuristic_td(g)?)?);
        let direct = heuristic_td(&g.square().base)?;
        Self::over_square(g, if direct.width() <= via_g.width() { &direct } else { &via_g })
    }

    fn over_square(g: &Graph, std: &TreeDecomposition) -> Result<Self> {
        let sq = g.square();
        let nice = make_nice_square(&sq, std)?;
        let classes = twin_classes(g);
        let mut ordered = FxHashSet::default();
        let mut in_class = vec![false; g.n()];
        for class in &classes {
            for (i, &u) in class.iter().enumerate() {
                in_class[u] = true;
                for &v in &class[i + 1..] {
                    ordered.insert((u, v));
                }
            }
        }
        Ok(DpInstance {
            nice,
            n: g.n(),
            ordered,
            anchor: (0..g.n()).find(|&v| !in_class[v]),
        })
    }

    pub fn nice(&self) -> &NiceTreeDecomposition {
        &self.nice
    }

    pub fn width(&self) -> usize {
        self.nice.width()
    }

    pub fn decide(&self, params: PqParams, k: Label, config: DpConfig) -> Result<Option<Labeling>> {
        let radix = k as u128 + 1;
        let Some(pow) = powers(radix, self.width() + 2) else {
            return Err(Error::StateBudget {
                budget: config.state_budget,
                width: self.width(),
                k,
            });
        };
        let run = Run {
            inst: self,
            nice: &self.nice,
            params,
            k,
            radix,
            pow,
            budget: config.state_budget,
            used: AtomicUsize::new(0),
            mode: config.mode,
        };
        let (root, forgets) = run.eval(self.nice.root())?;
        if root.is_empty() {
            return Ok(None);
        }
        run.traceback(forgets).map(Some)
    }

    /// Ascends `k` from the lower bound to the upper bound.
    pub fn lambda(&self, g: &Graph, params: PqParams, config: DpConfig) -> Result<(Label, Labeling)> {
        let upper = upper_bound_lambda(g, params);
        for k in lower_bound_lambda(g, params.p)..=upper {
            if let Some(f) = self.decide(params, k, config)? {
                return Ok((k, f));
            }
        }
        Err(Error::Internal(format!("no labeling found up to the upper bound {upper}")))
    }
}

/// Nontrivial classes of vertices with equal open or equal closed
/// neighborhoods, each sorted. The two relations never share a vertex.
fn twin_classes(g: &Graph) -> Vec<Vec<usize>> {
    if g.n() < 2 {
        return Vec::new();
    }
    let mut by_open: FxHashMap<&[usize], Vec<usize>> = FxHashMap::default();
    let mut by_closed: FxHashMap<Vec<usize>, Vec<usize>> = FxHashMap::default();
    for v in 0..g.n() {
        by_open.entry(g.neighbors(v)).or_default().push(v);
        by_closed.entry(g.closed_neighborhood(v)).or_default().push(v);
    }
    let mut classes: Vec<Vec<usize>> = by_open
        .into_values()
        .chain(by_closed.into_values())
        .filter(|c| c.len() > 1)
        .collect();
    classes.sort();
    classes
}

pub fn decide_dp(g: &Graph, params: PqParams, k: Label) -> Result<Option<Labeling>> {
    DpInstance::heuristic(g)?.decide(params, k, DpConfig::from_env())
}

/// Like [`decide_dp`] with a caller-supplied decomposition of `G`.
pub fn decide_dp_with_td(
    g: &Graph,
    params: PqParams,
    k: Label,
    td: &TreeDecomposition,
    config: DpConfig,
) -> Result<Option<Labeling>> {
    DpInstance::with_td(g, td)?.decide(params, k, config)
}

pub fn lambda_dp(g: &Graph, params: PqParams) -> Result<(Label, Labeling)> {
    DpInstance::heuristic(g)?.lambda(g, params, DpConfig::from_env())
}

pub fn lambda_dp_with_td(
    g: &Graph,
    params: PqParams,
    td: &TreeDecomposition,
    config: DpConfig,
) -> Result<(Label, Labeling)> {
    DpInstance::with_td(g, td)?.lambda(g, params, config)
}
