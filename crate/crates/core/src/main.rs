use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use spanlab::dp::{DpConfig, DpInstance};
use spanlab::io::{parse_gr, parse_labeling_json, parse_td, LabelingRecord};
use spanlab::suite::{run_suite, SuiteKind, SuiteOptions};
use spanlab::treedecomp::validate_td;
use spanlab::{
    approx_lp1, decide_exact, decide_tc, lambda_exact, lambda_l11, lambda_tc, mso, verify, Error, Graph, Label,
    Labeling, Mode, PqParams,
};

const EXIT_UNSAT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_REFUSED: u8 = 3;

#[derive(Parser)]
#[command(name = "spanlab", version, about = "L(p,q)-labeling solver and cross-checker")]
struct Cli {
    /// Run every solver sequentially.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Exact,
    Dp,
    Tc,
    L11,
    Approx,
}

impl Algo {
    fn name(self) -> &'static str {
        match self {
            Algo::Exact => "exact",
            Algo::Dp => "dp",
            Algo::Tc => "tc",
            Algo::L11 => "l11",
            Algo::Approx => "approx",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Agreement,
    Bounds,
    Random,
}

#[derive(Subcommand)]
enum Command {
    /// Compute λ, or decide a fixed span with --k.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        k: Option<Label>,
        #[arg(long, value_enum)]
        algo: Algo,
        /// Tree decomposition of the graph for the dp track.
        #[arg(long)]
        td: Option<PathBuf>,
        /// Write the labeling as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check a labeling file against a graph.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        labeling: PathBuf,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
    },
    /// Run a seeded cross-checking suite.
    Bench {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Largest vertex count.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        count: usize,
        /// Write the deterministic JSON report.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write the MSO₁ sentence for k-L(p,q)-labeling.
    Mso {
        #[arg(long)]
        k: Label,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

/// A one-line reason and the exit status.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_refusal() {
            EXIT_REFUSED
        } else if matches!(e, Error::Internal(_)) {
            EXIT_UNSAT
        } else {
            EXIT_USAGE
        };
        Failure(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("cannot write {}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    parse_gr(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn check_params(algo: Algo, params: PqParams, k: Option<Label>, td: bool) -> Result<(), Failure> {
    match algo {
        Algo::Tc if params.q != 1 => Err(usage("the tc algorithm requires q = 1")),
        Algo::L11 if params.p != 1 || params.q != 1 => Err(usage("the l11 algorithm requires p = q = 1")),
        Algo::Approx if params.q != 1 => Err(usage("the approx algorithm requires q = 1")),
        Algo::Approx if k.is_some() => Err(usage("the approx algorithm computes a span and does not take --k")),
        _ if td && !matches!(algo, Algo::Dp) => Err(usage("--td is only used by the dp algorithm")),
        _ => Ok(()),
    }
}

fn print_labeling(f: &Labeling) {
    for (v, l) in f.as_slice().iter().enumerate() {
        println!("{} {l}", v + 1);
    }
}

#[allow(clippy::too_many_arguments)]
fn solve(
    graph: &Path,
    p: u32,
    q: u32,
    k: Option<Label>,
    algo: Algo,
    td: Option<&Path>,
    json: Option<&Path>,
    mode: Mode,
) -> Result<u8, Failure> {
    let params = PqParams::new(p, q)?;
    check_params(algo, params, k, td.is_some())?;
    let g = load_graph(graph)?;
    g.require_connected()?;
    let config = DpConfig { mode, ..DpConfig::from_env() };
    let dp = || -> Result<DpInstance, Failure> {
        Ok(match td {
            Some(path) => {
                let td = parse_td(&read(path)?, g.n()).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                validate_td(&g, &td)?;
                DpInstance::with_td(&g, &td)?
            }
            None => DpInstance::heuristic(&g)?,
        })
    };

    let (lambda, f) = match k {
        Some(k) => {
            let found = match algo {
                Algo::Exact => decide_exact(&g, params, k)?,
                Algo::Dp => dp()?.decide(params, k, config)?,
                Algo::Tc => decide_tc(&g, p, k)?,
                Algo::L11 => Some(lambda_l11(&g)?).filter(|(lam, _)| *lam <= k).map(|(_, f)| f),
                Algo::Approx => unreachable!("rejected by check_params"),
            };
            let Some(f) = found else {
                println!("UNSAT");
                return Ok(EXIT_UNSAT);
            };
            println!("SAT");
            (f.max_label().unwrap_or(0), f)
        }
        None => {
            let (lambda, f) = match algo {
                Algo::Exact => lambda_exact(&g, params)?,
                Algo::Dp => dp()?.lambda(&g, params, config)?,
                Algo::Tc => lambda_tc(&g, p)?,
                Algo::L11 => lambda_l11(&g)?,
                Algo::Approx => approx_lp1(&g, p)?,
            };
            println!("lambda = {lambda}");
            (lambda, f)
        }
    };
    if !verify(&g, &f, params)?.is_valid() {
        return Err(Failure(EXIT_UNSAT, "computed labeling failed verification".into()));
    }
    print_labeling(&f);
    if let Some(path) = json {
        let record = LabelingRecord {
            p,
            q,
            lambda,
            labeling: f,
            algo: algo.name().into(),
            valid: true,
        };
        write(path, &record.to_json())?;
    }
    Ok(0)
}

fn verify_cmd(graph: &Path, labeling: &Path, p: u32, q: u32) -> Result<u8, Failure> {
    let params = PqParams::new(p, q)?;
    let g = load_graph(graph)?;
    let f = parse_labeling_json(&read(labeling)?, g.n()).map_err(|e| match e {
        Error::NotTotal(v) => usage(format!("{}: vertex {} has no label", labeling.display(), v + 1)),
        e => usage(format!("{}: {e}", labeling.display())),
    })?;
    let report = verify(&g, &f, params)?;
    if report.is_valid() {
        println!("valid");
        return Ok(0);
    }
    println!("invalid: {} violation(s)", report.violations.len());
    for v in &report.violations {
        let dist = match v.class {
            spanlab::GapClass::Dist1 => 1,
            spanlab::GapClass::Dist2 => 2,
        };
        println!(
            "vertices {} and {} at distance {dist}: labels differ by {}, need {}",
            v.u + 1,
            v.v + 1,
            v.gap,
            v.required
        );
    }
    Ok(EXIT_UNSAT)
}

fn bench(suite: Suite, n: usize, seed: u64, count: usize, json: Option<&Path>, mode: Mode) -> Result<u8, Failure> {
    let kind = match suite {
        Suite::Agreement => SuiteKind::Agreement,
        Suite::Bounds => SuiteKind::Bounds,
        Suite::Random => SuiteKind::Random,
    };
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let report = run_suite(&SuiteOptions {
        kind,
        max_n: n,
        seed,
        count,
        mode,
    });
    print!("{}", report.to_table());
    if let Some(path) = json {
        write(path, &report.to_json())?;
    }
    Ok(if report.failures() == 0 { 0 } else { EXIT_UNSAT })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let mode = if cli.sequential { Mode::Sequential } else { Mode::default() };
    match cli.command {
        Command::Solve {
            graph,
            p,
            q,
            k,
            algo,
            td,
            json,
        } => solve(&graph, p, q, k, algo, td.as_deref(), json.as_deref(), mode),
        Command::Verify { graph, labeling, p, q } => verify_cmd(&graph, &labeling, p, q),
        Command::Bench {
            suite,
            n,
            seed,
            count,
            json,
        } => bench(suite, n, seed, count, json.as_deref(), mode),
        Command::Mso { k, p, q, out } => {
            write(&out, &mso::emit_phi(k, PqParams::new(p, q)?))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
