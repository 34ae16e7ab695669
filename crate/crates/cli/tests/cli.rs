use std::io::Write;
use std::process::{Command, Output, Stdio};

use pivot_transform::{fixtures, write_pcnf};
use serde_json::Value;

fn pivsat(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pivsat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn solve_fixtures_in_pivoted_form() {
    let dir = tempfile::tempdir().unwrap();
    let psi1 = dir.path().join("psi1.pcnf");
    std::fs::write(&psi1, write_pcnf(&fixtures::psi1())).unwrap();
    let out = pivsat(&["solve", psi1.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "UNSAT");
    assert!(v["per_closed_digraph"].as_array().unwrap().iter().all(|r| r["antichain"] == false));

    let out = pivsat(&["solve", "-"], Some(&write_pcnf(&fixtures::psi2())));
    assert_eq!(json(&out)["status"], "SAT");
}

#[test]
fn oracle_reads_stdin() {
    let out = pivsat(&["oracle"], Some("p cnf 2 3\n1 2 0\n-1 0\n-2 0\n"));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["status"], "UNSAT");
    let out = pivsat(&["oracle", "--oracle-cap", "1"], Some("p cnf 2 1\n1 2 0\n"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn transform_with_certificate() {
    let out = pivsat(&["transform", "--check"], Some("p cnf 4 3\n1 2 3 0\n-1 -2 4 0\n2 -3 -4 0\n"));
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["pcnf"].as_str().unwrap().contains("p pcnf"));
    assert_eq!(v["certificate"]["agree"], true);
}

#[test]
fn fixtures_pass() {
    let out = pivsat(&["fixtures", "--format", "text"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with("PASS")).count(), 2, "{text}");
}

#[test]
fn exit_codes() {
    assert_eq!(pivsat(&["frobnicate"], None).status.code(), Some(1));
    assert_eq!(pivsat(&[], None).status.code(), Some(1));
    assert_eq!(pivsat(&["solve"], Some("p cnf 2 1\n1 7 0\n")).status.code(), Some(1));
    assert_eq!(pivsat(&["--help"], None).status.code(), Some(0));
    let out = pivsat(&["solve", "--budget-scale", "0.0001"], Some("p cnf 3 2\n1 2 0\n-1 0\n"));
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["status"], "ABORT");
    assert!(v["abort_reason"].as_str().unwrap().contains("budget"));
}

#[test]
fn trace_writes_every_stage() {
    let dir = tempfile::tempdir().unwrap();
    let out = pivsat(
        &["trace", "--trace-dir", dir.path().to_str().unwrap()],
        Some("p cnf 3 2\n1 2 0\n-1 0\n"),
    );
    assert_eq!(out.status.code(), Some(0));
    let files: Vec<String> = json(&out)["files"].as_array().unwrap().iter().map(|f| f.as_str().unwrap().to_string()).collect();
    for prefix in ["00-pivoted", "01-cylinder", "02-closed", "03-lin", "04-nested"] {
        assert!(files.iter().any(|f| f.starts_with(prefix)), "{prefix} missing from {files:?}");
    }
    for f in files.iter().filter(|f| f.ends_with(".dot")) {
        let text = std::fs::read_to_string(dir.path().join(f)).unwrap();
        assert!(text.starts_with("digraph"));
    }
    assert_eq!(pivsat(&["trace"], Some("p cnf 1 1\n1 0\n")).status.code(), Some(1));
}

#[test]
fn fuzz_is_deterministic_and_bench_has_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("campaign.cfg");
    std::fs::write(&cfg, "seed = 5\ninstances = 40\nmax_atoms = 6\nmax_clauses = 15\ncombine = all\n").unwrap();
    let csv = dir.path().join("score.csv");
    let args = ["fuzz", cfg.to_str().unwrap(), "--csv", csv.to_str().unwrap()];
    let a = pivsat(&args, None);
    let b = pivsat(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["totals"]["instances"], 40);
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("claim,pass,fail,untested"));

    let out = pivsat(&["bench", cfg.to_str().unwrap(), "--instances", "10"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["rows"].as_array().unwrap().len(), 30);

    std::fs::write(&cfg, "min_atoms = 9\nmax_atoms = 4\n").unwrap();
    assert_eq!(pivsat(&["fuzz", cfg.to_str().unwrap()], None).status.code(), Some(1));
}
