use std::io::Write;
use std::process::{Command as Process, Output, Stdio};

use apw_cli::{certificates, run_request, Command, Overrides};
use serde_json::{json, Value};

fn apw(args: &[&str], stdin: &str) -> Output {
    let mut child = Process::new(env!("CARGO_BIN_EXE_apw"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn t(k: i64, re: f64) -> Value {
    json!({"coord": [k], "re": re, "im": 0.0})
}

fn mat(rows: Vec<Vec<Vec<Value>>>) -> Value {
    let (m, n) = (rows.len(), rows[0].len());
    json!({"basis": [["1/1"]], "m": m, "n": n, "entries": rows.into_iter().flatten().collect::<Vec<_>>()})
}

fn s1() -> Value {
    json!({"Z": [["1/1"]]})
}

fn worked(gamma: f64) -> Value {
    json!({
        "apw_schema": 1,
        "A": mat(vec![vec![vec![t(0, 1.0), t(1, -0.5)], vec![t(1, 0.5)]]]),
        "B": mat(vec![vec![vec![t(0, 1.0)]]]),
        "gamma": gamma,
        "S": s1(),
        "cutoff": 32
    })
}

#[test]
fn analyze_character() {
    let req = json!({"apw_schema": 1, "f": {"basis": [["1/1"], ["1/3"]], "terms": [t(1, 1.0)]}});
    let out = apw(&["analyze"], &req.to_string());
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["wiener_norm"], 1.0);
    assert_eq!(r["bohr_mean"], 0.0);
    assert!((r["sup_norm_estimate"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(r["apw_schema"], 1);
    assert_eq!(r["options"]["cutoff"], 32);
}

#[test]
fn factorize_shifted_scalar() {
    let req = json!({"apw_schema": 1, "G": mat(vec![vec![vec![t(-1, 1.0), t(0, -0.5)]]]), "S": s1()});
    let out = apw(&["factorize"], &req.to_string());
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["status"], "factored");
    assert_eq!(r["factorization"]["indices"], json!([[-1]]));
}

#[test]
fn not_invertible_exit_code() {
    let req = json!({"apw_schema": 1, "G": mat(vec![vec![vec![t(-1, 1.0), t(1, 1.0)]]]), "S": s1()});
    let out = apw(&["factorize"], &req.to_string());
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(report(&out)["status"], "not_invertible");
}

#[test]
fn corona_worked_instance() {
    let out = apw(&["corona"], &worked(3.0).to_string());
    assert!(out.status.success());
    let r = report(&out);
    assert_eq!(r["status"], "solved");
    assert!(r["residuals"]["af0_minus_b"].as_f64().unwrap() <= 1e-7);
    assert!(r["residuals"]["f0_sup_norm"].as_f64().unwrap() <= 3.0 + 1e-6);
}

#[test]
fn infeasible_exit_code() {
    let out = apw(&["corona"], &worked(1.0).to_string());
    assert_eq!(out.status.code(), Some(6));
    let r = report(&out);
    assert_eq!(r["error"]["class"], "infeasible");
    assert_eq!(r["error"]["stage"], "gram");
    assert!(!out.stderr.is_empty());
}

#[test]
fn parse_errors() {
    assert_eq!(apw(&["analyze"], "{not json").status.code(), Some(2));
    let unknown = json!({"apw_schema": 1, "f": {"basis": [["1/1"]], "terms": []}, "extra": 1});
    assert_eq!(apw(&["analyze"], &unknown.to_string()).status.code(), Some(2));
    let schema = json!({"apw_schema": 2, "f": {"basis": [["1/1"]], "terms": []}});
    assert_eq!(apw(&["analyze"], &schema.to_string()).status.code(), Some(2));
}

#[test]
fn domain_and_rank_exit_codes() {
    let outside = json!({
        "apw_schema": 1,
        "A": mat(vec![vec![vec![t(-1, 1.0)], vec![t(0, 1.0)]]]),
        "B": mat(vec![vec![vec![t(0, 1.0)]]]),
        "gamma": 2.0,
        "S": s1()
    });
    assert_eq!(apw(&["corona"], &outside.to_string()).status.code(), Some(3));
    let g = json!({"basis": [["1/1", "0/1"], ["0/1", "1/1"]], "m": 1, "n": 1,
        "entries": [[{"coord": [0, 0], "re": 1.0, "im": 0.0}, {"coord": [1, 0], "re": 0.2, "im": 0.0}, {"coord": [0, 1], "re": 0.2, "im": 0.0}]]});
    let req = json!({"apw_schema": 1, "G": g, "S": {"Z": [["1/1", "0/1"], ["0/1", "1/1"]]}});
    assert_eq!(apw(&["factorize"], &req.to_string()).status.code(), Some(4));
}

#[test]
fn files_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("req.json");
    let output = dir.path().join("rep.json");
    std::fs::write(&input, worked(3.0).to_string()).unwrap();
    let out = apw(
        &["--command", "gram", "-i", input.to_str().unwrap(), "-o", output.to_str().unwrap(), "--cutoff", "8"],
        "",
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(r["options"]["cutoff"], 8);
    assert_eq!(r["section_size"], 9);
}

#[test]
fn reports_are_reproducible() {
    let text = worked(3.0).to_string();
    let a = apw(&["corona"], &text);
    let b = apw(&["corona"], &text);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn factorization_json_round_trips_through_verify() {
    let g = mat(vec![vec![vec![t(0, 1.0), t(1, -0.5)], vec![t(1, 1.0)]]]);
    let req = json!({"apw_schema": 1, "G": g, "S": s1()});
    let (rep, code) = run_request(Command::Factorize, &req.to_string(), &Overrides::default());
    assert_eq!(code, 0);
    let fact = rep["factorization"].clone();
    let vreq = json!({"apw_schema": 1, "G": g, "S": s1(), "factorization": fact});
    let (v, code) = run_request(Command::Verify, &vreq.to_string(), &Overrides::default());
    assert_eq!(code, 0);
    assert_eq!(v["passes"], true);
    // the factor matrices re-serialize to the same bytes
    let back: apw_core::json::FactorizationJson = serde_json::from_value(fact.clone()).unwrap();
    assert_eq!(serde_json::to_value(&back).unwrap(), fact);
}

#[test]
fn certificates_skip_matrices() {
    let (rep, _) = run_request(Command::Corona, &worked(3.0).to_string(), &Overrides::default());
    let certs = certificates(&rep);
    assert!(certs.contains_key("residuals.af0_minus_b"));
    assert!(!certs.keys().any(|k| k.starts_with("options") || k.contains("entries")));
}

#[test]
fn shipped_corpus_passes() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/corpus.json");
    let out = apw(&["corpus", "-i", path], "");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    assert_eq!(r["failed"], 0);
}

#[test]
fn corpus_mismatch_exit_code() {
    let corpus = json!({"apw_schema": 1, "instances": [{
        "name": "wrong_status",
        "command": "corona",
        "request": worked(3.0),
        "expected_status": "failed"
    }]});
    let out = apw(&["corpus"], &corpus.to_string());
    assert_eq!(out.status.code(), Some(7));
}
