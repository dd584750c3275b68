//! Seeded cross-checking suites behind the `bench` command.
//!
//! Every suite is a deterministic function of its options. Wall-times appear
//! only in the text table, so the JSON report is byte-identical across runs.

use std::fmt::Write as _;
use std::time::Instant;

use serde_json::{json, Value};

use crate::dp::{DpConfig, DpInstance};
use crate::error::Result;
use crate::exact::{decide_exact, lambda_exact, EXACT_CAP};
use crate::generate::random_suite;
use crate::graph::Graph;
use crate::l11::{approx_lp1, lambda_l11};
use crate::labeling::{Label, PqParams};
use crate::par::{self, Mode};
use crate::tc::{TcCase, TcContext};

/// Edge densities of suite graphs are drawn from `[0, SUITE_MAX_DENSITY)`.
pub const SUITE_MAX_DENSITY: f64 = 0.6;
/// Threshold probes run only for augmented covers up to this size.
pub const PROBE_MAX_COVER: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SuiteKind {
    Agreement,
    Bounds,
    Random,
}

impl SuiteKind {
    pub fn name(self) -> &'static str {
        match self {
            SuiteKind::Agreement => "agreement",
            SuiteKind::Bounds => "bounds",
            SuiteKind::Random => "random",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteOptions {
    pub kind: SuiteKind,
    /// Graphs have `1..=max_n` vertices.
    pub max_n: usize,
    pub seed: u64,
    pub count: usize,
    pub mode: Mode,
}

impl SuiteOptions {
    pub fn graphs(&self) -> Vec<Graph> {
        random_suite(self.seed, self.count, 1, self.max_n, SUITE_MAX_DENSITY)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Lambda(Label),
    Sat(bool),
    Failed(String),
}

impl Outcome {
    fn to_json(&self) -> Value {
        match self {
            Outcome::Lambda(l) => json!(l),
            Outcome::Sat(b) => json!(if *b { "SAT" } else { "UNSAT" }),
            Outcome::Failed(e) => json!(format!("error: {e}")),
        }
    }

    fn text(&self) -> String {
        match self {
            Outcome::Lambda(l) => l.to_string(),
            Outcome::Sat(b) => (if *b { "SAT" } else { "UNSAT" }).into(),
            Outcome::Failed(_) => "ERR".into(),
        }
    }
}

impl<T> From<Result<T>> for Outcome
where
    T: Into<Outcome>,
{
    fn from(r: Result<T>) -> Self {
        r.map_or_else(|e| Outcome::Failed(e.to_string()), Into::into)
    }
}

impl From<Label> for Outcome {
    fn from(l: Label) -> Self {
        Outcome::Lambda(l)
    }
}

impl From<bool> for Outcome {
    fn from(b: bool) -> Self {
        Outcome::Sat(b)
    }
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub algo: &'static str,
    pub outcome: Outcome,
    pub seconds: f64,
}

/// Which branch of the twin-cover solver produced an answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CaseNote {
    pub case: TcCase,
    /// Nonempty set systems, for the large case.
    pub systems: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Row {
    pub instance: usize,
    pub n: usize,
    pub m: usize,
    pub max_degree: usize,
    pub p: u32,
    pub q: u32,
    /// `None` for a λ row; the probed `k` for a decision row.
    pub k: Option<Label>,
    pub entries: Vec<Entry>,
    pub tc_case: Option<CaseNote>,
    pub ok: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CaseCounts {
    pub small: usize,
    pub large: usize,
    /// Large-case answers with at least two nonempty set systems.
    pub large_multi: usize,
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub kind: SuiteKind,
    pub seed: u64,
    pub max_n: usize,
    pub count: usize,
    pub rows: Vec<Row>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.ok).count()
    }

    pub fn case_counts(&self) -> CaseCounts {
        let mut c = CaseCounts::default();
        for note in self.rows.iter().filter_map(|r| r.tc_case) {
            match note.case {
                TcCase::Small => c.small += 1,
                TcCase::Large => {
                    c.large += 1;
                    if note.systems.unwrap_or(0) >= 2 {
                        c.large_multi += 1;
                    }
                }
            }
        }
        c
    }

    /// Deterministic JSON: everything except wall-times.
    pub fn to_json(&self) -> String {
        let cases = self.case_counts();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut results = serde_json::Map::new();
                for e in &r.entries {
                    results.insert(e.algo.into(), e.outcome.to_json());
                }
                json!({
                    "instance": r.instance,
                    "n": r.n,
                    "m": r.m,
                    "max_degree": r.max_degree,
                    "p": r.p,
                    "q": r.q,
                    "k": r.k,
                    "results": results,
                    "tc_case": r.tc_case.map(|c| json!({
                        "case": match c.case { TcCase::Small => "small-k", TcCase::Large => "large-k" },
                        "systems": c.systems,
                    })),
                    "ok": r.ok,
                    "note": r.note,
                })
            })
            .collect();
        let obj = json!({
            "suite": self.kind.name(),
            "seed": self.seed,
            "max_n": self.max_n,
            "count": self.count,
            "max_density": SUITE_MAX_DENSITY,
            "rows": rows,
            "failures": self.failures(),
            "tc_cases": {
                "small_k": cases.small,
                "large_k": cases.large,
                "large_k_multi_system": cases.large_multi,
            },
        });
        format!("{}\n", serde_json::to_string_pretty(&obj).expect("JSON values always serialize"))
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "suite {} seed {} max_n {} count {}",
            self.kind.name(),
            self.seed,
            self.max_n,
            self.count
        );
        let _ = writeln!(out, "{:>5} {:>3} {:>3} {:>3} {:>5} {:>4}  results", "inst", "n", "m", "Δ", "(p,q)", "k");
        for r in &self.rows {
            let results: Vec<String> = r
                .entries
                .iter()
                .map(|e| format!("{}={} ({:.3}s)", e.algo, e.outcome.text(), e.seconds))
                .collect();
            let _ = writeln!(
                out,
                "{:>5} {:>3} {:>3} {:>3} {:>5} {:>4}  {}{}{}",
                r.instance,
                r.n,
                r.m,
                r.max_degree,
                format!("({},{})", r.p, r.q),
                r.k.map_or("-".into(), |k| k.to_string()),
                results.join(" "),
                if r.ok { "" } else { "  MISMATCH" },
                r.note.as_ref().map_or(String::new(), |n| format!("  [{n}]")),
            );
        }
        let c = self.case_counts();
        let _ = writeln!(
            out,
            "{} rows, {} failures; tc small-k {}, large-k {} (with >= 2 systems: {})",
            self.rows.len(),
            self.failures(),
            c.small,
            c.large,
            c.large_multi
        );
        out
    }
}

/// Runs `f` and records its outcome under `algo`.
fn timed<T, O>(algo: &'static str, f: impl FnOnce() -> Result<T>, outcome: impl FnOnce(&T) -> O) -> (Entry, Result<T>)
where
    O: Into<Outcome>,
{
    let start = Instant::now();
    let value = f();
    let seconds = start.elapsed().as_secs_f64();
    let outcome = match &value {
        Ok(v) => outcome(v).into(),
        Err(e) => Outcome::Failed(e.to_string()),
    };
    (Entry { algo, outcome, seconds }, value)
}

fn row(instance: usize, g: &Graph, p: u32, q: u32) -> Row {
    Row {
        instance,
        n: g.n(),
        m: g.m(),
        max_degree: g.max_degree(),
        p,
        q,
        k: None,
        entries: Vec::new(),
        tc_case: None,
        ok: true,
        note: None,
    }
}

/// All entries succeeded and agree.
fn agree(entries: &[Entry]) -> bool {
    let first = &entries[0].outcome;
    !matches!(first, Outcome::Failed(_)) && entries.iter().all(|e| e.outcome == *first)
}

/// Parameter pairs of the agreement suite.
pub const AGREEMENT_PARAMS: [(u32, u32); 5] = [(1, 1), (2, 1), (3, 1), (2, 2), (3, 2)];

fn lambda_of<T>(x: &(Label, T)) -> Label {
    x.0
}

fn agreement_rows(instance: usize, g: &Graph, mode: Mode) -> Vec<Row> {
    let config = DpConfig { mode, ..DpConfig::from_env() };
    let dp = DpInstance::heuristic(g);
    let mut rows = Vec::new();
    for (p, q) in AGREEMENT_PARAMS {
        let params = PqParams::new(p, q).expect("suite parameters are positive");
        let mut r = row(instance, g, p, q);
        r.entries.push(timed("exact", || lambda_exact(g, params), lambda_of).0);
        let (e, _) = timed(
            "dp",
            || dp.clone().and_then(|inst| inst.lambda(g, params, config)),
            lambda_of,
        );
        r.entries.push(e);
        let mut probe = None;
        if q == 1 {
            let ctx = TcContext::new(g, p);
            let (e, tc) = timed("tc", || ctx.clone().and_then(|ctx| tc_lambda(&ctx, g, mode)), lambda_of);
            r.entries.push(e);
            r.tc_case = tc.ok().map(|x| x.1);
            probe = ctx.ok().and_then(|ctx| threshold_probe(instance, g, &ctx, mode));
        }
        r.ok = agree(&r.entries);
        rows.push(r);
        rows.extend(probe);
    }
    rows
}

/// Decides `k = 8p·tc′`, the smallest `k` handled by the large-k branch,
/// with the twin-cover solver and the exact oracle.
fn threshold_probe(instance: usize, g: &Graph, ctx: &TcContext, mode: Mode) -> Option<Row> {
    if ctx.augmented.cover.len() > PROBE_MAX_COVER || g.n() > EXACT_CAP {
        return None;
    }
    let k = Label::try_from(ctx.threshold()).ok()?;
    let params = PqParams::new(ctx.p, 1).ok()?;
    let mut r = row(instance, g, ctx.p, 1);
    r.k = Some(k);
    let (e, report) = timed("tc", || ctx.decide(g, k, mode), |rep| rep.labeling.is_some());
    r.entries.push(e);
    r.tc_case = report.ok().map(|rep| CaseNote {
        case: rep.case,
        systems: rep.systems,
    });
    r.entries.push(timed("exact", || decide_exact(g, params, k), Option::is_some).0);
    r.ok = agree(&r.entries);
    Some(r)
}

/// `Δ + p − 1 ≤ λ_{p,1} ≤ Δ² + (p−1)Δ − 2` for graphs with `Δ ≥ 3`.
pub fn sandwich(max_degree: usize, p: u32) -> (Label, Label) {
    let d = max_degree as Label;
    (d + p - 1, d * d + (p - 1) * d - 2)
}

fn lambda_any(g: &Graph, params: PqParams, config: DpConfig) -> (Entry, Result<(Label, crate::labeling::Labeling)>) {
    if g.n() <= EXACT_CAP {
        timed("exact", || lambda_exact(g, params), lambda_of)
    } else {
        timed("dp", || DpInstance::heuristic(g)?.lambda(g, params, config), lambda_of)
    }
}

fn bounds_rows(instance: usize, g: &Graph, mode: Mode) -> Vec<Row> {
    if g.max_degree() < 3 {
        return Vec::new();
    }
    let config = DpConfig { mode, ..DpConfig::from_env() };
    (1..=3)
        .map(|p| {
            let params = PqParams::new(p, 1).expect("suite parameters are positive");
            let mut r = row(instance, g, p, 1);
            let (e, lam) = lambda_any(g, params, config);
            r.entries.push(e);
            let (lo, hi) = sandwich(g.max_degree(), p);
            r.ok = matches!(lam, Ok((l, _)) if lo <= l && l <= hi);
            r.note = Some(format!("bounds [{lo}, {hi}]"));
            r
        })
        .collect()
}

fn random_rows(instance: usize, g: &Graph, mode: Mode) -> Vec<Row> {
    let config = DpConfig { mode, ..DpConfig::from_env() };
    let dp = DpInstance::heuristic(g);
    let mut out = Vec::new();

    let p21 = PqParams::new(2, 1).expect("positive");
    let mut r = row(instance, g, 2, 1);
    let (e, opt) = lambda_any(g, p21, config);
    r.entries.push(e);
    if g.n() <= EXACT_CAP {
        r.entries.push(timed("dp", || dp.clone()?.lambda(g, p21, config), lambda_of).0);
    }
    let (e, tc) = timed("tc", || tc_lambda(&TcContext::new(g, 2)?, g, mode), lambda_of);
    r.entries.push(e);
    r.tc_case = tc.ok().map(|x| x.1);
    r.ok = agree(&r.entries);
    let (e, approx) = timed("approx", || approx_lp1(g, 2), lambda_of);
    r.entries.push(e);
    r.ok &= matches!((approx, opt), (Ok((a, _)), Ok((o, _))) if a <= 2 * o);
    out.push(r);

    let p11 = PqParams::new(1, 1).expect("positive");
    let mut r = row(instance, g, 1, 1);
    r.entries.push(timed("dp", || dp.clone()?.lambda(g, p11, config), lambda_of).0);
    r.entries.push(timed("l11", || lambda_l11(g), lambda_of).0);
    r.ok = agree(&r.entries);
    out.push(r);
    out
}

/// `λ_{p,1}` by ascending with a prepared twin-cover context.
fn tc_lambda(ctx: &TcContext, g: &Graph, mode: Mode) -> Result<(Label, CaseNote)> {
    let params = PqParams::new(ctx.p, 1)?;
    let upper = crate::labeling::upper_bound_lambda(g, params);
    for k in crate::labeling::lower_bound_lambda(g, ctx.p)..=upper {
        let report = ctx.decide(g, k, mode)?;
        if report.labeling.is_some() {
            return Ok((
                k,
                CaseNote {
                    case: report.case,
                    systems: report.systems,
                },
            ));
        }
    }
    Err(crate::error::Error::Internal("no labeling up to the upper bound".into()))
}

pub fn run_suite(opts: &SuiteOptions) -> SuiteReport {
    let graphs: Vec<(usize, Graph)> = opts.graphs().into_iter().enumerate().collect();
    let per_graph = |(i, g): &(usize, Graph)| match opts.kind {
        SuiteKind::Agreement => agreement_rows(*i, g, opts.mode),
        SuiteKind::Bounds => bounds_rows(*i, g, opts.mode),
        SuiteKind::Random => random_rows(*i, g, opts.mode),
    };
    let rows = par::map(opts.mode, &graphs, per_graph).into_iter().flatten().collect();
    SuiteReport {
        kind: opts.kind,
        seed: opts.seed,
        max_n: opts.max_n,
        count: opts.count,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(kind: SuiteKind) -> SuiteOptions {
        SuiteOptions {
            kind,
            max_n: 7,
            seed: 3,
            count: 12,
            mode: Mode::default(),
        }
    }

    #[test]
    fn suites_pass_and_are_deterministic() {
        for kind in [SuiteKind::Agreement, SuiteKind::Bounds, SuiteKind::Random] {
            let a = run_suite(&opts(kind));
            assert_eq!(a.failures(), 0, "{}", a.to_table());
            let b = run_suite(&SuiteOptions {
                mode: Mode::Sequential,
                ..opts(kind)
            });
            assert_eq!(a.to_json(), b.to_json());
        }
    }

    #[test]
    fn agreement_logs_small_k_cases() {
        let report = run_suite(&opts(SuiteKind::Agreement));
        assert!(report.case_counts().small > 0);
        assert!(report.rows.iter().any(|r| r.k.is_some()));
    }

    #[test]
    fn sandwich_formula() {
        assert_eq!(sandwich(3, 2), (4, 10));
        assert_eq!(sandwich(4, 1), (4, 14));
    }
}
