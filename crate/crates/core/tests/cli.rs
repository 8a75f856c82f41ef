use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn specs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn spec(name: &str) -> String {
    specs().join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ucomplete"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn validate_accepts_the_sample_specs() {
    for name in ["discrete2.json", "indiscrete2.json", "line3.json"] {
        let out = run(&["validate", &spec(name)]);
        assert_eq!(code(&out), 0, "{name}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn validate_reports_a_missing_cover_with_a_witness() {
    let out = run(&["validate", &spec("bad.json"), "--format", "json"]);
    assert_eq!(code(&out), 1);
    let report = json(&out);
    let failed: Vec<&Value> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["id"], "uniformity/covers");
    assert!(failed[0]["detail"].as_str().unwrap().contains("U0"));
}

#[test]
fn json_reports_are_reproducible() {
    let args = ["check-frobenius", "discrete-2", "--format", "json"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["horizon"], 2);
}

#[test]
fn frobenius_holds_on_a_spec_at_horizon_three() {
    let out = run(&["check-frobenius", &spec("discrete2.json"), "--horizon", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn out_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = run(&["complete", "discrete-3", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["command"], "complete");
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn approx_meets_the_requested_width() {
    let out = run(&["approx", "--seq", "newton-sqrt:2", "--precision", "1e-6", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let detail = json(&out)["checks"][0]["detail"].as_str().unwrap().to_string();
    assert!(detail.starts_with("[1414213/1000000, 707107/500000]"), "{detail}");
}

#[test]
fn cut_of_a_constant_passes_every_axiom() {
    let out = run(&["cut", "--seq", "const:3/7", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["checks"].as_array().unwrap().len(), 8);
}

#[test]
fn truncated_spec_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cut.json");
    let text = std::fs::read_to_string(spec("discrete2.json")).unwrap();
    std::fs::write(&path, &text[..text.len() / 2]).unwrap();
    let out = run(&["validate", path.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["no-such-command"])), 2);
    assert_eq!(code(&run(&["approx"])), 2);
}

#[test]
fn budget_overruns_exit_four() {
    let out = run(&["complete", "discrete-3", "--budget", "3"]);
    assert_eq!(code(&out), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn unknown_files_are_spec_errors() {
    assert_eq!(code(&run(&["validate", "/nonexistent/instance.json"])), 3);
}
