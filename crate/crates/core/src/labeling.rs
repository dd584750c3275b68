//! Labelings with their verifier and the classical bounds on λ.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GapClass, Graph};

pub type Label = u32;

/// Gap requirements: `p` for adjacent pairs, `q` for pairs at distance two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PqParams {
    pub p: u32,
    pub q: u32,
}

impl PqParams {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidParams { p, q });
        }
        Ok(PqParams { p, q })
    }

    pub fn gap(&self, class: GapClass) -> u32 {
        match class {
            GapClass::Dist1 => self.p,
            GapClass::Dist2 => self.q,
        }
    }
}

impl fmt::Display for PqParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

/// A total assignment vertex → nonnegative label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Labeling(Vec<Label>);

impl Labeling {
    pub fn new(labels: Vec<Label>) -> Self {
        Labeling(labels)
    }

    /// Fails with [`Error::NotTotal`] naming the first unlabeled vertex.
    pub fn from_partial(labels: &[Option<Label>]) -> Result<Self> {
        labels
            .iter()
            .enumerate()
            .map(|(v, l)| l.ok_or(Error::NotTotal(v)))
            .collect::<Result<Vec<_>>>()
            .map(Labeling)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, v: usize) -> Label {
        self.0[v]
    }

    pub fn as_slice(&self) -> &[Label] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Label> {
        self.0
    }

    pub fn max_label(&self) -> Option<Label> {
        self.0.iter().copied().max()
    }

    /// Shift so the smallest label is 0.
    pub fn normalized(&self) -> Labeling {
        let min = self.0.iter().copied().min().unwrap_or(0);
        Labeling(self.0.iter().map(|&l| l - min).collect())
    }

    /// λ of this labeling: the largest label after normalization.
    pub fn lambda(&self) -> Result<Label> {
        span_of(self).map(|s| s - 1)
    }
}

/// One failed distance condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub u: usize,
    pub v: usize,
    pub class: GapClass,
    pub gap: u32,
    pub required: u32,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dist = match self.class {
            GapClass::Dist1 => 1,
            GapClass::Dist2 => 2,
        };
        write!(
            f,
            "pair {{{}, {}}} at distance {}: gap {} < {}",
            self.u, self.v, dist, self.gap, self.required
        )
    }
}

/// Result of [`verify`]: every violated pair, in square-edge order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Verification {
    pub violations: Vec<Violation>,
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks both distance conditions and reports all violations.
pub fn verify(g: &Graph, f: &Labeling, params: PqParams) -> Result<Verification> {
    if f.len() != g.n() {
        return Err(Error::NotTotal(f.len().min(g.n())));
    }
    let violations = g
        .square()
        .tagged_edges()
        .filter_map(|((u, v), class)| {
            let gap = f.get(u).abs_diff(f.get(v));
            let required = params.gap(class);
            (gap < required).then_some(Violation {
                u,
                v,
                class,
                gap,
                required,
            })
        })
        .collect();
    Ok(Verification { violations })
}

/// `max − min + 1`.
pub fn span_of(f: &Labeling) -> Result<u32> {
    let max = f.0.iter().max().ok_or(Error::EmptyLabeling)?;
    let min = f.0.iter().min().unwrap();
    Ok(max - min + 1)
}

/// `Δ + p − 1`, or 0 for an edgeless graph. Valid for every `q ≥ 1`: the
/// leaves of a maximum-degree star need distinct labels outside a window of
/// at least `p` labels around the centre.
pub fn lower_bound_lambda(g: &Graph, p: u32) -> u32 {
    match g.max_degree() as u32 {
        0 => 0,
        d => d + p - 1,
    }
}

/// Upper bound on `λ_{p,q}`. For `q = 1`, `p ≥ 2` and `Δ ≥ 3` this is
/// `Δ² + (p−1)Δ − 2`; otherwise `max(p,q)·Δ²`, never below the lower bound.
/// The sharper form fails for `p = 1`: the Petersen graph has `Δ = 3` and a
/// complete square, so `λ_{1,1} = 9 > Δ² − 2`.
pub fn upper_bound_lambda(g: &Graph, params: PqParams) -> u32 {
    let d = g.max_degree() as u32;
    let general = params.p.max(params.q) * d * d;
    let bound = if params.q == 1 && params.p >= 2 && d >= 3 {
        d * d + (params.p - 1) * d - 2
    } else {
        general
    };
    bound.max(lower_bound_lambda(g, params.p))
}

/// `v ↦ c·f(v)`; an `L(p,q)` labeling becomes an `L(cp,cq)` labeling.
pub fn scale_labeling(f: &Labeling, c: u32) -> Result<Labeling> {
    if c == 0 {
        return Err(Error::ZeroScale);
    }
    Ok(Labeling(f.0.iter().map(|&l| l * c).collect()))
}
