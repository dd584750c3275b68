//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines reach the terminal under
//! plain `cargo test`. A criterion listed in `EXPECTED_FAILURES` must fail
//! for exactly the recorded reason; any other failure exits nonzero.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spanlab::exact::decide_exact;
use spanlab::generate::{all_graphs, named, random_suite};
use spanlab::ilp::{feasible, LinearSystem, Relation};
use spanlab::l11::{approx_lp1, delete_twin_edges, reduction_cover};
use spanlab::mso::{emit_phi, naive_model_check};
use spanlab::suite::{run_suite, sandwich, Outcome, SuiteKind, SuiteOptions, SUITE_MAX_DENSITY};
use spanlab::tc::{lambda_tc_detailed, TcCase};
use spanlab::treedecomp::{heuristic_td, square_td, validate_td};
use spanlab::twincover::min_twin_cover;
use spanlab::{lambda_dp, lambda_exact, verify, Graph, Label, Mode, PqParams};

const AGREEMENT_SEED: u64 = 2026;

struct Verdict {
    pass: bool,
    detail: String,
    /// For an expected failure: whether it failed for the recorded reason.
    explained: bool,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict {
            pass,
            detail: detail.into(),
            explained: false,
        }
    }
}

fn pq(p: u32, q: u32) -> PqParams {
    PqParams::new(p, q).unwrap()
}

/// `λ` of a possibly disconnected graph: the largest over its components.
fn lambda_by_components(g: &Graph, params: PqParams) -> Label {
    g.components()
        .iter()
        .map(|c| lambda_exact(&g.induced(c), params).unwrap().0)
        .max()
        .unwrap_or(0)
}

/// Feasibility of a possibly disconnected graph, component by component.
fn feasible_by_components(g: &Graph, params: PqParams, k: Label) -> bool {
    g.components()
        .iter()
        .all(|c| decide_exact(&g.induced(c), params, k).unwrap().is_some())
}

fn closed_ball2(g: &Graph, v: usize) -> Vec<usize> {
    let d = g.distances_from(v);
    (0..g.n()).filter(|&u| d[u].is_some_and(|d| d <= 2)).collect()
}

fn is_complete(g: &Graph) -> bool {
    g.m() == g.n() * g.n().saturating_sub(1) / 2
}

fn agreement_report() -> spanlab::suite::SuiteReport {
    run_suite(&SuiteOptions {
        kind: SuiteKind::Agreement,
        max_n: 9,
        seed: AGREEMENT_SEED,
        count: 200,
        mode: Mode::default(),
    })
}

fn cross_algorithm_agreement(report: &spanlab::suite::SuiteReport) -> Verdict {
    let lambda_rows: Vec<_> = report.rows.iter().filter(|r| r.k.is_none()).collect();
    let bad: Vec<_> = lambda_rows.iter().filter(|r| !r.ok).collect();
    let with_tc = lambda_rows.iter().filter(|r| r.entries.iter().any(|e| e.algo == "tc")).count();
    let seconds: f64 = report.rows.iter().flat_map(|r| &r.entries).map(|e| e.seconds).sum();
    Verdict::new(
        bad.is_empty() && lambda_rows.len() == 200 * 5,
        format!(
            "{} graphs (seed {AGREEMENT_SEED}, n <= 9, density < {SUITE_MAX_DENSITY}), {} lambda rows, {} with tc; {} disagreements; {seconds:.1}s solver time",
            report.count,
            lambda_rows.len(),
            with_tc,
            bad.len()
        ),
    )
}

fn square_width_bound() -> Verdict {
    let mut checked = 0;
    let mut violations = Vec::new();
    for (i, g) in random_suite(7, 200, 1, 20, 0.3).into_iter().enumerate() {
        let td = heuristic_td(&g).unwrap();
        let sq = square_td(&g, &td).unwrap();
        let square = g.square().base;
        let t = td.width();
        let bound = (t + 1) * g.max_degree() + t;
        if validate_td(&square, &sq).is_err() || sq.width() > bound {
            violations.push(i);
        }
        checked += 1;
    }
    let mut stars_tight = true;
    for d in 1..=10 {
        let star = named::star(d);
        let td = heuristic_td(&star).unwrap();
        let sq = square_td(&star, &td).unwrap();
        stars_tight &= td.width() == 1
            && sq.width() == d
            && star.square().base == named::complete(d + 1)
            && validate_td(&star.square().base, &sq).is_ok();
    }
    Verdict::new(
        violations.is_empty() && stars_tight,
        format!(
            "{checked} graphs (n <= 20): {} invalid or over (t+1)Δ+t; stars K_1,Δ for Δ = 1..10 map width 1 to width Δ = tw(K_Δ+1): {}",
            violations.len(),
            if stars_tight { "yes" } else { "no" }
        ),
    )
}

fn known_values() -> Verdict {
    let cases: [(&str, Graph, Label); 6] = [
        ("P2", named::path(2), 2),
        ("P5", named::path(5), 4),
        ("C5", named::cycle(5), 4),
        ("K5", named::complete(5), 8),
        ("K1,4", named::star(4), 5),
        ("Petersen", named::petersen(), 9),
    ];
    let params = pq(2, 1);
    let mut ok = true;
    let mut parts = Vec::new();
    let mut slowest = 0.0f64;
    for (name, g, want) in &cases {
        let exact = lambda_exact(g, params).unwrap().0;
        let t = Instant::now();
        let dp = lambda_dp(g, params).map(|x| x.0);
        let dp_time = t.elapsed().as_secs_f64();
        let t = Instant::now();
        let tc = lambda_tc_detailed(g, 2).map(|x| x.0);
        let tc_time = t.elapsed().as_secs_f64();
        slowest = slowest.max(dp_time).max(tc_time);
        let good = exact == *want && dp == Ok(exact) && tc == Ok(exact) && dp_time < 60.0 && tc_time < 60.0;
        ok &= good;
        parts.push(format!("{name}={exact}{}", if good { "" } else { "(!)" }));
    }
    Verdict::new(ok, format!("{}; slowest track {slowest:.2}s", parts.join(" ")))
}

fn scaling_identity() -> Verdict {
    let graphs = random_suite(11, 50, 1, 8, SUITE_MAX_DENSITY);
    let bad = graphs
        .iter()
        .filter(|g| {
            let base = lambda_exact(g, pq(1, 1)).unwrap().0;
            lambda_exact(g, pq(2, 2)).unwrap().0 != 2 * base || lambda_exact(g, pq(3, 3)).unwrap().0 != 3 * base
        })
        .count();
    Verdict::new(bad == 0, format!("{} graphs (n <= 8): {bad} violations", graphs.len()))
}

fn twin_edge_invariance() -> Verdict {
    let graphs = random_suite(13, 100, 1, 9, SUITE_MAX_DENSITY);
    let mut literal_bad = Vec::new();
    let mut fixed_bad = 0;
    for g in &graphs {
        let x = min_twin_cover(g).unwrap();
        let h = delete_twin_edges(g, &x).unwrap();
        let lam = lambda_exact(g, pq(1, 1)).unwrap().0;
        let balls = (0..g.n()).all(|v| closed_ball2(g, v) == closed_ball2(&h, v));
        if lambda_by_components(&h, pq(1, 1)) != lam || !balls {
            literal_bad.push(g);
        }
        let y = reduction_cover(g).unwrap();
        let h = delete_twin_edges(g, &y).unwrap();
        let balls = (0..g.n()).all(|v| closed_ball2(g, v) == closed_ball2(&h, v));
        if lambda_by_components(&h, pq(1, 1)) != lam || !balls {
            fixed_bad += 1;
        }
    }
    let complete = literal_bad.iter().filter(|g| is_complete(g)).count();
    let mut v = Verdict::new(
        literal_bad.is_empty(),
        format!(
            "{} graphs (n <= 9): {} violate with the minimum twin cover, {complete} of them complete graphs \
             (empty cover, every edge deleted); with one cover vertex kept for complete graphs: {fixed_bad} violations",
            graphs.len(),
            literal_bad.len()
        ),
    );
    v.explained = complete == literal_bad.len() && fixed_bad == 0;
    v
}

fn approximation_ratio() -> Verdict {
    let graphs = random_suite(17, 100, 1, 8, SUITE_MAX_DENSITY);
    let mut bad = 0;
    let mut worst = 1.0f64;
    for g in &graphs {
        for p in 2..=3 {
            let (k, f) = approx_lp1(g, p).unwrap();
            let opt = lambda_exact(g, pq(p, 1)).unwrap().0;
            if k > p * opt || !verify(g, &f, pq(p, 1)).unwrap().is_valid() {
                bad += 1;
            }
            if opt > 0 {
                worst = worst.max(k as f64 / opt as f64);
            }
        }
    }
    Verdict::new(
        bad == 0,
        format!("{} graphs (n <= 8), p in {{2,3}}: {bad} violations; worst ratio {worst:.3}", graphs.len()),
    )
}

fn bound_sandwich(report: &spanlab::suite::SuiteReport) -> Verdict {
    let mut checked = 0;
    let mut bad = Vec::new();
    for r in report.rows.iter().filter(|r| r.k.is_none() && r.q == 1 && r.max_degree >= 3) {
        let Some(Outcome::Lambda(lam)) = r.entries.iter().find(|e| e.algo == "exact").map(|e| &e.outcome) else {
            bad.push((r.instance, r.p));
            continue;
        };
        let (lo, hi) = sandwich(r.max_degree, r.p);
        checked += 1;
        if *lam < lo || *lam > hi {
            bad.push((r.instance, r.p));
        }
    }
    Verdict::new(
        bad.is_empty() && checked > 0,
        format!("{checked} (graph, p) pairs with Δ >= 3 from the agreement suite, p in {{1,2,3}}: {} violations {bad:?}", bad.len()),
    )
}

fn mso_semantics() -> Verdict {
    let start = Instant::now();
    let mut checks = 0;
    let mut graphs = 0;
    let mut bad = 0;
    for n in 1..=7 {
        for g in all_graphs(n) {
            graphs += 1;
            for (p, q) in [(1, 1), (2, 1)] {
                for k in 0..=6 {
                    let text = emit_phi(k, pq(p, q));
                    if naive_model_check(&g, &text).unwrap() != feasible_by_components(&g, pq(p, q), k) {
                        bad += 1;
                    }
                    checks += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Verdict::new(
        bad == 0 && secs < 300.0,
        format!("all {graphs} graphs with n <= 7 up to isomorphism, {checks} checks: {bad} disagreements; {secs:.1}s"),
    )
}

/// Tries every point of the bounding box.
fn enumerate_system(sys: &LinearSystem) -> bool {
    let n = sys.num_vars();
    let ranges: Vec<(i64, i64)> = (0..n)
        .map(|i| {
            let (lo, hi) = sys.bounds(i);
            (lo, hi.unwrap())
        })
        .collect();
    let mut x: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    loop {
        if sys.satisfied_by(&x) {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            if x[i] < ranges[i].1 {
                x[i] += 1;
                break;
            }
            x[i] = ranges[i].0;
            i += 1;
        }
    }
}

fn ilp_oracle() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let mut bad = 0;
    let mut sat = 0;
    for _ in 0..500 {
        let vars = rng.random_range(1..=4);
        let mut sys = LinearSystem::new(vars);
        for i in 0..vars {
            let lo = rng.random_range(0..=5);
            sys.set_bounds(i, lo, rng.random_range(lo..=15)).unwrap();
        }
        for _ in 0..rng.random_range(1..=4) {
            let coeffs = (0..vars).map(|_| rng.random_range(-3..=3)).collect();
            let rel = [Relation::Le, Relation::Eq, Relation::Ge][rng.random_range(0..3)];
            sys.add(coeffs, rel, rng.random_range(-10..=40)).unwrap();
        }
        let got = feasible(&sys).unwrap();
        let want = enumerate_system(&sys);
        if got.is_some() != want || got.is_some_and(|x| !sys.satisfied_by(&x)) {
            bad += 1;
        }
        sat += usize::from(want);
    }
    Verdict::new(bad == 0, format!("500 systems ({sat} feasible): {bad} mismatches"))
}

fn case_split(report: &spanlab::suite::SuiteReport) -> Verdict {
    let c = report.case_counts();
    let example = report.rows.iter().find(|r| {
        r.tc_case
            .is_some_and(|n| n.case == TcCase::Large && n.systems.unwrap_or(0) >= 2)
    });
    Verdict::new(
        c.small > 0 && c.large_multi > 0,
        format!(
            "small-k answers {}, large-k answers {} ({} with >= 2 set systems){}",
            c.small,
            c.large,
            c.large_multi,
            example.map_or(String::new(), |r| format!(
                "; e.g. instance {} (n = {}, p = {}, k = {})",
                r.instance,
                r.n,
                r.p,
                r.k.map_or("lambda".into(), |k| k.to_string())
            ))
        ),
    )
}

/// Criteria that cannot hold as stated, with the reason checked by
/// `Verdict::explained`.
const EXPECTED_FAILURES: [(usize, &str); 1] = [(
    5,
    "complete graphs have an empty minimum twin cover, so every edge is a twin edge and deletion changes λ",
)];

type Criterion<'a> = (usize, &'static str, Box<dyn Fn() -> Verdict + 'a>);

fn main() -> ExitCode {
    let start = Instant::now();
    let report = agreement_report();
    let criteria: Vec<Criterion> = vec![
        (1, "cross-algorithm agreement", Box::new(|| cross_algorithm_agreement(&report))),
        (2, "square decomposition width bound", Box::new(square_width_bound)),
        (3, "known λ_{2,1} values", Box::new(known_values)),
        (4, "scaling identity", Box::new(scaling_identity)),
        (5, "L(1,1) twin-edge invariance", Box::new(twin_edge_invariance)),
        (6, "approximation ratio", Box::new(approximation_ratio)),
        (7, "bound sandwich", Box::new(|| bound_sandwich(&report))),
        (8, "MSO semantics", Box::new(mso_semantics)),
        (9, "ILP oracle equivalence", Box::new(ilp_oracle)),
        (10, "case-split exercise", Box::new(|| case_split(&report))),
    ];
    let mut unexpected = 0;
    for (id, name, check) in &criteria {
        let v = check();
        let expected = EXPECTED_FAILURES.iter().find(|(e, _)| e == id);
        println!("{} [{id}] {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        match (v.pass, expected) {
            (true, None) => {}
            (false, Some((_, why))) if v.explained => println!("     known: {why}"),
            (true, Some(_)) => println!("     note: passes on this sample (no counterexample drawn)"),
            _ => unexpected += 1,
        }
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria failed unexpectedly");
        ExitCode::FAILURE
    }
}
