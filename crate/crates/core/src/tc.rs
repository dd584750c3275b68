//! `k`-L(p,1)-labeling parameterized by twin cover and clique size.
//!
//! After augmenting a minimum twin cover to `X′` so that every remaining type
//! satisfies `p·ω_i ≤ n_i`, small `k` (below `8p·|X′|`) is decided by the exact
//! or DP track. Large `k` enumerates labelings of `X′` inside the good range,
//! places the boundary labels into set systems, and decides the rest with an
//! integer program over how many labels each system receives.

use rustc_hash::FxHashMap;

use crate::dp::decide_dp;
use crate::error::{Error, Result};
use crate::exact::{decide_exact, EXACT_CAP};
use crate::graph::Graph;
use crate::ilp::{self, LinearSystem, Relation};
use crate::labeling::{lower_bound_lambda, upper_bound_lambda, verify, Label, Labeling, PqParams};
use crate::par::{self, Mode};
use crate::twincover::{augment_cover, min_twin_cover, type_partition, TwinCoverContext, TwinType};

pub const SET_SYSTEM_CAP: usize = 4096;
/// Cap on complete labelings of `X′` tried in one decision.
pub const COVER_LABELING_CAP: usize = 2_000_000;
/// Cap on distinct placement count vectors kept while placing boundary labels.
pub const PLACEMENT_CAP: usize = 200_000;

/// `A = (2p−1)·|X| − p`; negative when the cover is empty.
fn good_reach(p: u32, cover_size: usize) -> i64 {
    (2 * p as i64 - 1) * cover_size as i64 - p as i64
}

/// `[0, A] ∪ [k−A, k]` clipped to `[0, k]`, ascending.
pub fn good_label_range(p: u32, cover_size: usize, k: Label) -> Vec<Label> {
    let a = good_reach(p, cover_size);
    split_range(a, k as i64 - a, k)
}

/// Labels `l ≤ low_end` or `l ≥ high_start` in `[0, k]`.
fn split_range(low_end: i64, high_start: i64, k: Label) -> Vec<Label> {
    (0..=k).filter(|&l| (l as i64) <= low_end || (l as i64) >= high_start).collect()
}

/// Assigns labels to the vertices of `cliques` (largest first) so that the
/// members of each clique receive labels whose indices in `labels` are at
/// least `p` apart. The first `Σ|C_j|` labels are all used.
///
/// Index `i` goes to the clique with the most unplaced vertices among those
/// whose last index is at most `i − p`, ties to the earlier clique. With
/// `p·ω ≤ Σ|C_j|` no index is ever skipped.
pub fn schedule_clique_labels(labels: &[Label], cliques: &[Vec<usize>], p: u32) -> Result<Vec<(usize, Label)>> {
    let total: usize = cliques.iter().map(Vec::len).sum();
    let largest = cliques.first().map_or(0, Vec::len);
    if labels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("labels must be strictly increasing".into()));
    }
    if cliques.windows(2).any(|w| w[0].len() < w[1].len()) {
        return Err(Error::Precondition("cliques must be sorted by decreasing size".into()));
    }
    if labels.len() < total {
        return Err(Error::Precondition(format!(
            "{} labels for {total} clique vertices",
            labels.len()
        )));
    }
    if total < p as usize * largest {
        return Err(Error::Precondition(format!(
            "{total} clique vertices is less than p times the largest clique ({largest})"
        )));
    }
    let p = p as usize;
    let mut placed = vec![0usize; cliques.len()];
    let mut last: Vec<Option<usize>> = vec![None; cliques.len()];
    let mut out = Vec::with_capacity(total);
    for (i, &label) in labels.iter().take(total).enumerate() {
        let pick = (0..cliques.len())
            .filter(|&c| placed[c] < cliques[c].len() && last[c].is_none_or(|j| i - j >= p))
            .max_by_key(|&c| (cliques[c].len() - placed[c], std::cmp::Reverse(c)))
            .ok_or_else(|| Error::Internal(format!("no clique can take label index {i}")))?;
        out.push((cliques[pick][placed[pick]], label));
        placed[pick] += 1;
        last[pick] = Some(i);
    }
    Ok(out)
}

/// Rewrites the labels of one type with [`schedule_clique_labels`] over the
/// `n_i` smallest labels it uses. Every other vertex keeps its label. Distance
/// conditions inside the type's cliques need not hold in `f`.
pub fn relabel_type(g: &Graph, ctx: &TwinCoverContext, f: &Labeling, type_index: usize, p: u32) -> Result<Labeling> {
    if f.len() != g.n() {
        return Err(Error::NotTotal(f.len().min(g.n())));
    }
    let t = ctx
        .types
        .get(type_index)
        .ok_or_else(|| Error::Precondition(format!("no type with index {type_index}")))?;
    if p as usize * t.omega() > t.size() {
        return Err(Error::Precondition(format!(
            "type {type_index} has p·ω = {} > n = {}",
            p as usize * t.omega(),
            t.size()
        )));
    }
    let mut used: Vec<Label> = t.members.iter().map(|&v| f.get(v)).collect();
    used.sort_unstable();
    used.dedup();
    if used.len() < t.size() {
        return Err(Error::Precondition(format!(
            "type {type_index} uses {} distinct labels for {} vertices",
            used.len(),
            t.size()
        )));
    }
    used.truncate(t.size());
    let mut labels = f.as_slice().to_vec();
    for (v, l) in schedule_clique_labels(&used, &t.cliques, p)? {
        labels[v] = l;
    }
    Ok(Labeling::new(labels))
}

/// Every set of types with pairwise disjoint cover neighborhoods, the empty
/// system first, then in lexicographic order of type indices.
pub fn enumerate_set_systems(ctx: &TwinCoverContext, cap: usize) -> Result<Vec<Vec<usize>>> {
    fn grow(
        ctx: &TwinCoverContext,
        start: usize,
        current: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<()> {
        for j in start..ctx.types.len() {
            if ctx.types[j].neighborhood.iter().any(|&x| used[x]) {
                continue;
            }
            if out.len() == cap {
                return Err(Error::CapExceeded {
                    what: "set systems",
                    actual: cap + 1,
                    cap,
                    advice: "the twin cover is too large for this track; use the dp algorithm",
                });
            }
            current.push(j);
            for &x in &ctx.types[j].neighborhood {
                used[x] = true;
            }
            out.push(current.clone());
            grow(ctx, j + 1, current, used, out, cap)?;
            for &x in &ctx.types[j].neighborhood {
                used[x] = false;
            }
            current.pop();
        }
        Ok(())
    }
    let n = ctx
        .cover
        .iter()
        .chain(ctx.types.iter().flat_map(|t| &t.members))
        .max()
        .map_or(0, |&v| v + 1);
    let mut out = vec![Vec::new()];
    grow(ctx, 0, &mut Vec::new(), &mut vec![false; n], &mut out, cap)?;
    Ok(out)
}

/// Integer program over label counts `x_0..x_t` of the systems `C_0..C_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IlpInstance {
    pub k: Label,
    /// `a_i`: labels already placed into `L_i`.
    pub lower: Vec<u32>,
    /// `|T_j|`.
    pub type_sizes: Vec<usize>,
    /// Member types of each system; `systems[0]` is empty.
    pub systems: Vec<Vec<usize>>,
}

/// `Σ x_i ≤ k+1`, `x_i ≥ a_i`, and `Σ_{i : T_j ∈ C_i} x_i = |T_j|` for each
/// type.
pub fn ilp_feasible(inst: &IlpInstance) -> Result<Option<Vec<u32>>> {
    let vars = inst.systems.len();
    if inst.lower.len() != vars {
        return Err(Error::Precondition("one lower bound per system is required".into()));
    }
    let cap = inst.k as i64 + 1;
    let mut sys = LinearSystem::new(vars);
    for (i, &a) in inst.lower.iter().enumerate() {
        if a as i64 > cap {
            return Ok(None);
        }
        sys.set_bounds(i, a as i64, cap)?;
    }
    sys.add(vec![1; vars], Relation::Le, cap)?;
    for (j, &size) in inst.type_sizes.iter().enumerate() {
        let coeffs = inst
            .systems
            .iter()
            .map(|s| i64::from(s.contains(&j)))
            .collect();
        sys.add(coeffs, Relation::Eq, size as i64)?;
    }
    Ok(ilp::feasible(&sys)?.map(|x| x.into_iter().map(|v| v as u32).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TcCase {
    /// `k < 8p·tc′`.
    Small,
    /// `k ≥ 8p·tc′`.
    Large,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TcReport {
    pub case: TcCase,
    /// Size of the minimum twin cover.
    pub tc: usize,
    /// Size of the augmented cover.
    pub tc_prime: usize,
    /// Number of types outside the augmented cover.
    pub types: usize,
    /// Number of nonempty set systems; `None` for the small case.
    pub systems: Option<usize>,
    pub labeling: Option<Labeling>,
}

/// Cover data shared by every `k` for one graph and `p`.
#[derive(Debug, Clone)]
pub struct TcContext {
    pub tc: usize,
    pub augmented: TwinCoverContext,
    pub p: u32,
}

impl TcContext {
    pub fn new(g: &Graph, p: u32) -> Result<Self> {
        g.require_connected()?;
        PqParams::new(p, 1)?;
        let x = min_twin_cover(g)?;
        let base = type_partition(g, &x)?;
        let augmented = augment_cover(g, &base, p)?;
        Ok(TcContext {
            tc: x.len(),
            augmented,
            p,
        })
    }

    pub fn threshold(&self) -> u64 {
        8 * self.p as u64 * self.augmented.cover.len() as u64
    }

    pub fn decide(&self, g: &Graph, k: Label, mode: Mode) -> Result<TcReport> {
        let params = PqParams::new(self.p, 1)?;
        let ctx = &self.augmented;
        let mut report = TcReport {
            case: TcCase::Small,
            tc: self.tc,
            tc_prime: ctx.cover.len(),
            types: ctx.types.len(),
            systems: None,
            labeling: None,
        };
        if (k as u64) < self.threshold() {
            // Members of a type are pairwise within distance two.
            if ctx.types.iter().any(|t| t.size() > k as usize + 1) {
                return Ok(report);
            }
            report.labeling = if g.n() <= EXACT_CAP {
                decide_exact(g, params, k)?
            } else {
                decide_dp(g, params, k)?
            };
            return Ok(report);
        }
        report.case = TcCase::Large;
        let systems = enumerate_set_systems(ctx, SET_SYSTEM_CAP)?;
        report.systems = Some(systems.len() - 1);
        let search = LargeCase::new(g, ctx, &systems, self.p, k);
        if let Some(f) = search.run(mode)? {
            if !verify(g, &f, params)?.is_valid() {
                return Err(Error::Internal("twin-cover witness failed verification".into()));
            }
            report.labeling = Some(f);
        }
        Ok(report)
    }
}

struct LargeCase<'a> {
    g: &'a Graph,
    ctx: &'a TwinCoverContext,
    systems: &'a [Vec<usize>],
    p: u32,
    k: Label,
    /// Labels allowed on the cover.
    good: Vec<Label>,
    /// Labels placed into systems before the integer program.
    boundary: Vec<Label>,
    /// `[A+p, k−A−p]`: at least `p` from every good label.
    middle: Vec<Label>,
    /// Pairwise distances among cover vertices and from each cover vertex
    /// to each type representative.
    dist: Vec<Vec<Option<usize>>>,
}

/// A full labeling of the cover, indexed like `ctx.cover`.
type CoverLabels = Vec<Label>;

impl<'a> LargeCase<'a> {
    fn new(g: &'a Graph, ctx: &'a TwinCoverContext, systems: &'a [Vec<usize>], p: u32, k: Label) -> Self {
        let a = good_reach(p, ctx.cover.len());
        let reach = a + p as i64 - 1;
        let boundary = split_range(reach, k as i64 - reach, k);
        let middle = (0..=k)
            .filter(|&l| (l as i64) > reach && (l as i64) < k as i64 - reach)
            .collect();
        LargeCase {
            g,
            ctx,
            systems,
            p,
            k,
            good: good_label_range(p, ctx.cover.len(), k),
            boundary,
            middle,
            dist: ctx.cover.iter().map(|&x| g.distances_from(x)).collect(),
        }
    }

    fn run(&self, mode: Mode) -> Result<Option<Labeling>> {
        let m = self.ctx.cover.len();
        if m == 0 {
            return self.extend(&[]);
        }
        // l ↦ k − l maps good labelings to good labelings.
        let first: Vec<Label> = self.good.iter().copied().filter(|&l| l <= self.k / 2).collect();
        let budget = std::sync::atomic::AtomicUsize::new(0);
        let found = par::find_map_first(mode, &first, |&l| {
            let mut labels = vec![l];
            self.dfs(&mut labels, &budget).transpose()
        });
        found.transpose()
    }

    fn dfs(&self, labels: &mut CoverLabels, budget: &std::sync::atomic::AtomicUsize) -> Result<Option<Labeling>> {
        let m = self.ctx.cover.len();
        if labels.len() == m {
            let tried = budget.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            if tried >= COVER_LABELING_CAP {
                return Err(Error::CapExceeded {
                    what: "cover labelings",
                    actual: tried + 1,
                    cap: COVER_LABELING_CAP,
                    advice: "use the dp algorithm",
                });
            }
            return self.extend(labels);
        }
        let i = labels.len();
        let x = self.ctx.cover[i];
        for &l in &self.good {
            let ok = (0..i).all(|j| match self.dist[j][x] {
                Some(1) => labels[j].abs_diff(l) >= self.p,
                Some(2) => labels[j] != l,
                _ => true,
            });
            if ok {
                labels.push(l);
                let r = self.dfs(labels, budget)?;
                labels.pop();
                if r.is_some() {
                    return Ok(r);
                }
            }
        }
        Ok(None)
    }

    /// Whether boundary label `l` may go to a member of type `t` given the
    /// cover labels.
    fn compatible(&self, t: &TwinType, cover: &[Label], l: Label) -> bool {
        let rep = t.members[0];
        cover.iter().enumerate().all(|(j, &c)| match self.dist[j][rep] {
            Some(1) => c.abs_diff(l) >= self.p,
            Some(2) => c != l,
            _ => true,
        })
    }

    /// Places the boundary labels into systems, then solves the integer
    /// program for each reachable count vector.
    fn extend(&self, cover: &[Label]) -> Result<Option<Labeling>> {
        let types = &self.ctx.types;
        let t = self.systems.len();
        let compat: Vec<Vec<bool>> = types
            .iter()
            .map(|ty| self.boundary.iter().map(|&l| self.compatible(ty, cover, l)).collect())
            .collect();
        let sizes: Vec<usize> = types.iter().map(TwinType::size).collect();

        // Layered reachability over count vectors (a_1..a_t); each entry keeps
        // its parent index and chosen system for reconstruction.
        let mut layers: Vec<Vec<(Vec<u16>, usize, usize)>> = vec![vec![(vec![0; t], 0, 0)]];
        for (b, _) in self.boundary.iter().enumerate() {
            let allowed: Vec<usize> = (0..t)
                .filter(|&i| self.systems[i].iter().all(|&j| compat[j][b]))
                .collect();
            let prev = layers.last().unwrap();
            let mut index: FxHashMap<Vec<u16>, usize> = FxHashMap::default();
            let mut next = Vec::new();
            for (pi, (counts, _, _)) in prev.iter().enumerate() {
                for &i in &allowed {
                    let mut c = counts.clone();
                    if i > 0 {
                        c[i] += 1;
                        let over = self.systems[i]
                            .iter()
                            .any(|&j| (0..t).filter(|&s| self.systems[s].contains(&j)).map(|s| c[s] as usize).sum::<usize>() > sizes[j]);
                        if over {
                            continue;
                        }
                    }
                    if !index.contains_key(&c) {
                        index.insert(c.clone(), next.len());
                        next.push((c, pi, i));
                    }
                }
            }
            if next.len() > PLACEMENT_CAP {
                return Err(Error::CapExceeded {
                    what: "boundary placements",
                    actual: next.len(),
                    cap: PLACEMENT_CAP,
                    advice: "use the dp algorithm",
                });
            }
            layers.push(next);
        }

        let last = layers.len() - 1;
        for (fi, (counts, _, _)) in layers[last].iter().enumerate() {
            let mut lower: Vec<u32> = counts.iter().map(|&c| c as u32).collect();
            lower[0] = self.boundary.len() as u32 - lower[1..].iter().sum::<u32>();
            let inst = IlpInstance {
                k: self.k,
                lower: lower.clone(),
                type_sizes: sizes.clone(),
                systems: self.systems.to_vec(),
            };
            if let Some(x) = ilp_feasible(&inst)? {
                let mut placement = vec![0usize; self.boundary.len()];
                let mut at = fi;
                for layer in (1..=last).rev() {
                    let (_, parent, system) = &layers[layer][at];
                    placement[layer - 1] = *system;
                    at = *parent;
                }
                return self.build(cover, &placement, &lower, &x).map(Some);
            }
        }
        Ok(None)
    }

    fn build(&self, cover: &[Label], placement: &[usize], lower: &[u32], x: &[u32]) -> Result<Labeling> {
        let t = self.systems.len();
        let mut pools: Vec<Vec<Label>> = vec![Vec::new(); t];
        for (b, &i) in placement.iter().enumerate() {
            pools[i].push(self.boundary[b]);
        }
        let mut middle = self.middle.iter().copied();
        for i in 1..t {
            for _ in lower[i]..x[i] {
                let l = middle
                    .next()
                    .ok_or_else(|| Error::Internal("middle range exhausted".into()))?;
                pools[i].push(l);
            }
        }
        let mut labels = vec![None; self.g.n()];
        for (j, &v) in self.ctx.cover.iter().enumerate() {
            labels[v] = Some(cover[j]);
        }
        for (j, ty) in self.ctx.types.iter().enumerate() {
            let mut mine: Vec<Label> = (1..t)
                .filter(|&i| self.systems[i].contains(&j))
                .flat_map(|i| pools[i].iter().copied())
                .collect();
            mine.sort_unstable();
            for (v, l) in schedule_clique_labels(&mine, &ty.cliques, self.p)? {
                labels[v] = Some(l);
            }
        }
        Labeling::from_partial(&labels)
    }
}

/// A `k`-L(p,1)-labeling if one exists.
pub fn decide_tc(g: &Graph, p: u32, k: Label) -> Result<Option<Labeling>> {
    Ok(decide_tc_detailed(g, p, k)?.labeling)
}

pub fn decide_tc_detailed(g: &Graph, p: u32, k: Label) -> Result<TcReport> {
    TcContext::new(g, p)?.decide(g, k, Mode::default())
}

/// `λ_{p,1}` with a witness, ascending from the lower bound.
pub fn lambda_tc(g: &Graph, p: u32) -> Result<(Label, Labeling)> {
    let (k, report) = lambda_tc_detailed(g, p)?;
    Ok((k, report.labeling.expect("feasible report carries a labeling")))
}

/// Like [`lambda_tc`], returning the report of the deciding call.
pub fn lambda_tc_detailed(g: &Graph, p: u32) -> Result<(Label, TcReport)> {
    let ctx = TcContext::new(g, p)?;
    let params = PqParams::new(p, 1)?;
    let upper = upper_bound_lambda(g, params);
    for k in lower_bound_lambda(g, p)..=upper {
        let report = ctx.decide(g, k, Mode::default())?;
        if report.labeling.is_some() {
            return Ok((k, report));
        }
    }
    Err(Error::Internal(format!("no labeling found up to the upper bound {upper}")))
}
