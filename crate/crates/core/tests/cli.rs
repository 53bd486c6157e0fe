use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

fn run(cache: &std::path::Path, args: &[&str]) -> (Output, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_gamma-aq"))
        .env("GAMMA_AQ_CACHE_DIR", cache)
        .args(["--format", "json"])
        .args(args)
        .output()
        .expect("binary runs");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out, v)
}

#[test]
fn pi0_matches_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let f = corpus("cubic-regular-f3.problem");
    let (out, v) = run(dir.path(), &["pi0", f.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["verdict"], "MATCH");
    assert_eq!(v["result"]["pi0"], 3);
}

#[test]
fn invalid_problem_exits_nonzero_with_named_pair() {
    let dir = tempfile::tempdir().unwrap();
    let f = corpus("non-commutative.problem");
    let (out, v) = run(dir.path(), &["pi0", f.to_str().unwrap()]);
    assert!(!out.status.success());
    assert_eq!(v["status"], "ERROR");
    assert!(v["result"]["error"].as_str().unwrap().contains("(x, y)"));
}

#[test]
fn piy_uses_cache_and_reports_stability() {
    let dir = tempfile::tempdir().unwrap();
    let f = corpus("dual-regular-f2.problem");
    let f = f.to_str().unwrap();
    let (_, a) = run(dir.path(), &["piy", f, "-N", "3"]);
    assert_eq!(a["result"]["cache"], "miss");
    assert_eq!(a["result"]["report"]["dims"], serde_json::json!([2, 2]));
    assert_eq!(a["result"]["classical"]["pi1_agrees"], true);
    let (_, b) = run(dir.path(), &["piy", f, "-N", "3"]);
    assert_eq!(b["result"]["cache"], "hit");
    assert_eq!(a["result"]["report"], b["result"]["report"]);
    let (_, c) = run(dir.path(), &["piy", f, "-N", "4", "-B", "4"]);
    assert_eq!(c["result"]["report"]["stability"]["stable"], true);
    let (_, ls) = run(dir.path(), &["cache", "ls"]);
    assert_eq!(ls["result"]["count"], 2);
    let (out, cl) = run(dir.path(), &["cache", "clear"]);
    assert!(out.status.success());
    assert_eq!(cl["result"]["removed"], 2);
}

#[test]
fn piy_cap_error_suggests_truncation() {
    let dir = tempfile::tempdir().unwrap();
    let f = corpus("cubic-regular-f3.problem");
    let (out, v) = run(dir.path(), &["--cap", "2000", "piy", f.to_str().unwrap(), "-N", "4", "-B", "4", "--no-cache"]);
    assert!(!out.status.success());
    assert_eq!(v["status"], "ERROR");
    assert_eq!(v["result"]["largest_feasible"]["trunc"], 3);
}

#[test]
fn classical_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let f = corpus("cubic-regular-q.problem");
    let (out, v) = run(dir.path(), &["classical", f.to_str().unwrap(), "--degree", "1"]);
    assert!(out.status.success());
    assert_eq!(v["result"]["dim"], 2);
    let (out, v) = run(dir.path(), &["verify", "lemma32"]);
    assert!(out.status.success());
    assert_eq!(v["result"]["suites"][0]["passed"], 24);
    let (out, _) = run(dir.path(), &["verify", "lemma99"]);
    assert!(!out.status.success());
}

#[test]
fn text_and_json_out_agree() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("r.json");
    let f = corpus("gamma-2.problem");
    let out = Command::new(env!("CARGO_BIN_EXE_gamma-aq"))
        .env("GAMMA_AQ_CACHE_DIR", dir.path())
        .args(["--json-out", json_path.to_str().unwrap(), "piy", f.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(v["result"]["report"]["dims"], serde_json::json!([1, 0, 0]));
    assert!(text.contains("dims: [1, 0, 0]"), "{text}");
    let numbers = |s: &str| -> Vec<String> {
        s.split(|c: char| !c.is_ascii_digit() && c != '.')
            .map(|t| t.trim_matches('.').to_string())
            .filter(|t| !t.is_empty())
            .collect()
    };
    let in_json = numbers(&serde_json::to_string(&v).unwrap());
    for n in numbers(&text) {
        assert!(in_json.contains(&n), "{n} printed but not in the JSON");
    }
}
