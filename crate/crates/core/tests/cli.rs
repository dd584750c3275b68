use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn spanlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spanlab"))
        .args(args)
        .env_remove("SPANLAB_STATE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

struct Files {
    _dir: TempDir,
    root: PathBuf,
}

impl Files {
    fn new() -> Self {
        let dir = TempDir::new().unwrap();
        let root = dir.path().to_path_buf();
        write(&root, "p3.gr", "c path on three vertices\np tw 3 2\n1 2\n2 3\n");
        write(&root, "k2.gr", "p tw 2 1\n1 2\n");
        write(&root, "c5.gr", "p tw 5 5\n1 2\n2 3\n3 4\n4 5\n5 1\n");
        write(&root, "split.gr", "p tw 4 2\n1 2\n3 4\n");
        Files { _dir: dir, root }
    }

    fn path(&self, name: &str) -> String {
        self.root.join(name).to_string_lossy().into_owned()
    }
}

#[test]
fn solve_reports_lambda_and_writes_json() {
    let f = Files::new();
    let json = f.path("out.json");
    let o = spanlab(&["solve", "--graph", &f.path("p3.gr"), "--p", "2", "--q", "1", "--algo", "exact", "--json", &json]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("lambda = 3\n"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["lambda"], 3);
    assert_eq!(v["algo"], "exact");
    assert_eq!(v["valid"], true);
    assert_eq!(v["labels"].as_object().unwrap().len(), 3);

    let o = spanlab(&["verify", "--graph", &f.path("p3.gr"), "--labeling", &json, "--p", "2", "--q", "1"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn every_algorithm_solves() {
    let f = Files::new();
    for (algo, p, want) in [("dp", "2", "3"), ("tc", "2", "3"), ("l11", "1", "2"), ("approx", "2", "4")] {
        let o = spanlab(&["solve", "--graph", &f.path("p3.gr"), "--p", p, "--q", "1", "--algo", algo]);
        assert_eq!(o.status.code(), Some(0), "{algo}: {}", stderr(&o));
        assert!(stdout(&o).starts_with(&format!("lambda = {want}\n")), "{algo}: {}", stdout(&o));
    }
    let o = spanlab(&["solve", "--graph", &f.path("c5.gr"), "--p", "1", "--q", "1", "--algo", "l11"]);
    assert!(stdout(&o).starts_with("lambda = 4\n"));
}

#[test]
fn decision_mode() {
    let f = Files::new();
    let o = spanlab(&["solve", "--graph", &f.path("k2.gr"), "--p", "2", "--q", "1", "--k", "1", "--algo", "dp"]);
    assert_eq!(stdout(&o), "UNSAT\n");
    assert_eq!(o.status.code(), Some(1));
    let o = spanlab(&["solve", "--graph", &f.path("k2.gr"), "--p", "2", "--q", "1", "--k", "2", "--algo", "tc"]);
    assert!(stdout(&o).starts_with("SAT\n"));
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn user_supplied_decomposition() {
    let f = Files::new();
    let td = write(&f.root, "p3.td", "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n");
    let td = td.to_string_lossy().into_owned();
    let o = spanlab(&["solve", "--graph", &f.path("p3.gr"), "--p", "2", "--q", "1", "--algo", "dp", "--td", &td]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("lambda = 3\n"));

    let bad = write(&f.root, "bad.td", "s td 2 2 3\nb 1 1 2\nb 2 3\n1 2\n");
    let bad = bad.to_string_lossy().into_owned();
    let o = spanlab(&["solve", "--graph", &f.path("p3.gr"), "--p", "2", "--q", "1", "--algo", "dp", "--td", &bad]);
    assert_eq!(o.status.code(), Some(2));
    let o = spanlab(&["solve", "--graph", &f.path("p3.gr"), "--p", "2", "--q", "1", "--algo", "exact", "--td", &td]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rejections_have_one_line_reasons() {
    let f = Files::new();
    let cases: [(&[&str], i32); 6] = [
        (&["--graph", "split.gr", "--p", "1", "--q", "1", "--algo", "exact"], 2),
        (&["--graph", "p3.gr", "--p", "2", "--q", "2", "--algo", "tc"], 2),
        (&["--graph", "p3.gr", "--p", "2", "--q", "1", "--algo", "l11"], 2),
        (&["--graph", "p3.gr", "--p", "2", "--q", "2", "--algo", "approx"], 2),
        (&["--graph", "p3.gr", "--p", "0", "--q", "1", "--algo", "exact"], 2),
        (&["--graph", "missing.gr", "--p", "1", "--q", "1", "--algo", "exact"], 2),
    ];
    for (args, code) in cases {
        let mut full = vec!["solve".to_string()];
        full.extend(args.iter().map(|a| if a.ends_with(".gr") { f.path(a) } else { a.to_string() }));
        let refs: Vec<&str> = full.iter().map(String::as_str).collect();
        let o = spanlab(&refs);
        assert_eq!(o.status.code(), Some(code), "{args:?}");
        let err = stderr(&o);
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(err.starts_with("error: "));
    }
    let o = spanlab(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_refusal_exits_three() {
    let f = Files::new();
    let o = Command::new(env!("CARGO_BIN_EXE_spanlab"))
        .args(["solve", "--graph", &f.path("c5.gr"), "--p", "2", "--q", "1", "--algo", "dp"])
        .env("SPANLAB_STATE_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("budget"));
}

#[test]
fn verify_failures() {
    let f = Files::new();
    let gap = write(&f.root, "gap.json", r#"{"labels":{"1":0,"2":1,"3":3}}"#);
    let o = spanlab(&["verify", "--graph", &f.path("p3.gr"), "--labeling", gap.to_str().unwrap(), "--p", "2", "--q", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("vertices 1 and 2 at distance 1"));

    let missing = write(&f.root, "missing.json", r#"{"labels":{"1":0,"2":2}}"#);
    let o = spanlab(&["verify", "--graph", &f.path("p3.gr"), "--labeling", missing.to_str().unwrap(), "--p", "2", "--q", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("vertex 3 has no label"));

    let garbled = write(&f.root, "garbled.json", "{\"labels\": [");
    let o = spanlab(&["verify", "--graph", &f.path("p3.gr"), "--labeling", garbled.to_str().unwrap(), "--p", "2", "--q", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_json_is_reproducible() {
    let f = Files::new();
    let (a, b) = (f.path("a.json"), f.path("b.json"));
    for (out, extra) in [(&a, None), (&b, Some("--sequential"))] {
        let mut args = vec!["bench", "--suite", "agreement", "--n", "6", "--seed", "9", "--count", "15", "--json", out];
        args.extend(extra);
        let o = spanlab(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    for suite in ["bounds", "random"] {
        let o = spanlab(&["bench", "--suite", suite, "--n", "7", "--seed", "4", "--count", "10"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
    }
}

#[test]
fn mso_writes_the_sentence() {
    let f = Files::new();
    let out = f.path("phi.txt");
    let o = spanlab(&["mso", "--k", "2", "--p", "2", "--q", "1", "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("(exists-set (V0 V1 V2) "));
    assert_eq!(text, spanlab::mso::emit_phi(2, spanlab::PqParams::new(2, 1).unwrap()));
}
