//! Integer feasibility for small bounded systems by depth-first search with
//! interval propagation.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<i64>,
    pub relation: Relation,
    pub rhs: i64,
}

impl Constraint {
    fn holds(&self, x: &[i64]) -> bool {
        let lhs: i64 = self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

/// Variables `x_0..x_{n−1}` with `lower_i ≤ x_i ≤ upper_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    lower: Vec<i64>,
    upper: Vec<Option<i64>>,
    constraints: Vec<Constraint>,
}

impl LinearSystem {
    /// `vars` variables, each with lower bound 0 and no upper bound.
    pub fn new(vars: usize) -> Self {
        LinearSystem {
            lower: vec![0; vars],
            upper: vec![None; vars],
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.lower.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn bounds(&self, var: usize) -> (i64, Option<i64>) {
        (self.lower[var], self.upper[var])
    }

    pub fn set_bounds(&mut self, var: usize, lower: i64, upper: i64) -> Result<()> {
        if lower > upper || lower < 0 {
            return Err(Error::Precondition(format!(
                "bounds of x{var} must satisfy 0 <= lower <= upper (got {lower}..={upper})"
            )));
        }
        self.lower[var] = lower;
        self.upper[var] = Some(upper);
        Ok(())
    }

    pub fn add(&mut self, coeffs: Vec<i64>, relation: Relation, rhs: i64) -> Result<()> {
        if coeffs.len() != self.num_vars() {
            return Err(Error::Precondition(format!(
                "constraint has {} coefficients for {} variables",
                coeffs.len(),
                self.num_vars()
            )));
        }
        self.constraints.push(Constraint { coeffs, relation, rhs });
        Ok(())
    }

    /// Whether `x` is within bounds and satisfies every constraint.
    pub fn satisfied_by(&self, x: &[i64]) -> bool {
        x.len() == self.num_vars()
            && x.iter().enumerate().all(|(i, &v)| {
                v >= self.lower[i] && self.upper[i].is_none_or(|u| v <= u)
            })
            && self.constraints.iter().all(|c| c.holds(x))
    }
}

type Domains = Vec<(i64, i64)>;

/// Tightens domains to a fixpoint. `false` when some domain empties.
fn propagate(sys: &LinearSystem, dom: &mut Domains) -> bool {
    loop {
        let mut changed = false;
        for c in &sys.constraints {
            let (mut min_act, mut max_act) = (0i64, 0i64);
            for (&a, &(lo, hi)) in c.coeffs.iter().zip(dom.iter()) {
                if a >= 0 {
                    min_act += a * lo;
                    max_act += a * hi;
                } else {
                    min_act += a * hi;
                    max_act += a * lo;
                }
            }
            let le = matches!(c.relation, Relation::Le | Relation::Eq);
            let ge = matches!(c.relation, Relation::Ge | Relation::Eq);
            if (le && min_act > c.rhs) || (ge && max_act < c.rhs) {
                return false;
            }
            for (i, &a) in c.coeffs.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let (lo, hi) = dom[i];
                let (own_min, own_max) = if a > 0 { (a * lo, a * hi) } else { (a * hi, a * lo) };
                // a·x_i ≤ rhs − (min activity of the others)
                if le {
                    let cap = c.rhs - (min_act - own_min);
                    if a > 0 {
                        let new_hi = floor_div(cap, a);
                        if new_hi < dom[i].1 {
                            dom[i].1 = new_hi;
                            changed = true;
                        }
                    } else {
                        let new_lo = ceil_div(cap, a);
                        if new_lo > dom[i].0 {
                            dom[i].0 = new_lo;
                            changed = true;
                        }
                    }
                }
                // a·x_i ≥ rhs − (max activity of the others)
                if ge {
                    let floor = c.rhs - (max_act - own_max);
                    if a > 0 {
                        let new_lo = ceil_div(floor, a);
                        if new_lo > dom[i].0 {
                            dom[i].0 = new_lo;
                            changed = true;
                        }
                    } else {
                        let new_hi = floor_div(floor, a);
                        if new_hi < dom[i].1 {
                            dom[i].1 = new_hi;
                            changed = true;
                        }
                    }
                }
                if dom[i].0 > dom[i].1 {
                    return false;
                }
            }
            if changed {
                break;
            }
        }
        if !changed {
            return true;
        }
    }
}

/// `⌊n / d⌋` for `d ≠ 0`.
fn floor_div(n: i64, d: i64) -> i64 {
    let q = n / d;
    if n % d != 0 && ((n < 0) != (d < 0)) { q - 1 } else { q }
}

/// `⌈n / d⌉` for `d ≠ 0`.
fn ceil_div(n: i64, d: i64) -> i64 {
    -floor_div(-n, d)
}

fn search(sys: &LinearSystem, dom: Domains) -> Option<Vec<i64>> {
    let pick = dom
        .iter()
        .enumerate()
        .filter(|(_, (lo, hi))| lo < hi)
        .min_by_key(|&(i, (lo, hi))| (hi - lo, i))
        .map(|(i, _)| i);
    let Some(var) = pick else {
        let x: Vec<i64> = dom.iter().map(|&(lo, _)| lo).collect();
        return sys.satisfied_by(&x).then_some(x);
    };
    let (lo, hi) = dom[var];
    for value in lo..=hi {
        let mut next = dom.clone();
        next[var] = (value, value);
        if propagate(sys, &mut next) {
            if let Some(x) = search(sys, next) {
                return Some(x);
            }
        }
    }
    None
}

/// A satisfying assignment within bounds, or `None`. Every variable needs an
/// upper bound.
pub fn feasible(sys: &LinearSystem) -> Result<Option<Vec<i64>>> {
    let mut dom = Vec::with_capacity(sys.num_vars());
    for i in 0..sys.num_vars() {
        let hi = sys.upper[i].ok_or(Error::UnboundedVariable(i))?;
        dom.push((sys.lower[i], hi));
    }
    if !propagate(sys, &mut dom) {
        return Ok(None);
    }
    let found = search(sys, dom);
    if let Some(x) = &found {
        if !sys.satisfied_by(x) {
            return Err(Error::Internal("ILP search returned a violating assignment".into()));
        }
    }
    Ok(found)
}
