//! Integration tests that drive the compiled binary end to end: exit codes,
//! the single-JSON-document stdout contract, and stderr diagnostics.

use serde_json::Value;
use std::io::Write;
use std::process::{Command, Output};

const C4: &str = r#"{"n": 4, "edges": [[0,1],[1,2],[2,3],[0,3]]}"#;
const K4_MINUS_EDGE: &str = r#"{"n": 4, "edges": [[0,1],[0,2],[0,3],[1,2],[2,3]]}"#;
const P3: &str = r#"{"n": 3, "edges": [[0,1],[1,2]]}"#;
const CIRCUIT_FRAMEWORK: &str = r#"{
  "n": 4,
  "edges": [[0,1],[0,2],[0,3],[1,2],[2,3]],
  "d": 2,
  "positions": [["0", "7/5"], ["1", "2"], ["6", "8"], ["16", "12"]]
}"#;

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(contents.as_bytes()).unwrap();
    file.flush().unwrap();
    file
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dilrig"))
        .args(args)
        .output()
        .expect("binary must spawn")
}

/// stdout must hold exactly one JSON document and nothing else.
fn single_doc(output: &Output) -> Value {
    let text = String::from_utf8(output.stdout.clone()).unwrap();
    serde_json::from_str(text.trim()).unwrap_or_else(|e| {
        panic!("stdout is not a single JSON document ({e}): {text:?}")
    })
}

#[test]
fn check_reports_a_verdict_with_exit_zero() {
    let file = write_temp(C4);
    let path = file.path().to_str().unwrap();
    let output = run(&["check", "--graph", path, "-d", "2", "-k", "1", "--mode", "both"]);
    assert_eq!(output.status.code(), Some(0));
    let doc = single_doc(&output);
    assert_eq!(doc["rigid"], Value::Bool(true));
    assert_eq!(doc["agree"], Value::Bool(true));
    assert_eq!(doc["combinatorial"]["method"], "combinatorial");
    assert_eq!(doc["generic"]["method"], "generic-rank");
}

#[test]
fn check_default_mode_is_generic() {
    let file = write_temp(P3);
    let path = file.path().to_str().unwrap();
    let output = run(&["check", "--graph", path, "-d", "2", "-k", "1"]);
    assert_eq!(output.status.code(), Some(0));
    let doc = single_doc(&output);
    assert_eq!(doc["rigid"], Value::Bool(false));
    assert!(doc.get("agree").is_none(), "single-mode output carries no agreement flag");
}

#[test]
fn bad_parameters_exit_two_with_stderr_diagnostics() {
    let file = write_temp(C4);
    let path = file.path().to_str().unwrap();
    let output = run(&["check", "--graph", path, "-d", "2", "-k", "2"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(output.stdout.is_empty(), "errors must not print a document");
    assert!(!output.stderr.is_empty(), "errors must explain themselves on stderr");
}

#[test]
fn missing_files_and_malformed_json_exit_two() {
    let output = run(&["check", "--graph", "/nonexistent.json", "-d", "2", "-k", "1"]);
    assert_eq!(output.status.code(), Some(2));

    let file = write_temp("{ not json");
    let path = file.path().to_str().unwrap();
    let output = run(&["check", "--graph", path, "-d", "2", "-k", "1"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let output = run(&["check", "--no-such-flag"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn check_rejects_realizations_instead_of_ignoring_them() {
    let file = write_temp(CIRCUIT_FRAMEWORK);
    let path = file.path().to_str().unwrap();
    let output = run(&["check", "--graph", path, "-d", "2", "-k", "1"]);
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("check decides graphs"), "stderr was: {stderr}");
}

#[test]
fn global_certifies_and_refutes_through_the_binary() {
    let file = write_temp(K4_MINUS_EDGE);
    let path = file.path().to_str().unwrap();
    let output = run(&["global", "--input", path, "-d", "2", "-k", "1", "--seed", "3"]);
    assert_eq!(output.status.code(), Some(0));
    let doc = single_doc(&output);
    assert_eq!(doc["status"], "globally-rigid (certified)");
    assert_eq!(doc["certificate"]["rank_omega"], 2);

    let file = write_temp(P3);
    let path = file.path().to_str().unwrap();
    let output = run(&["global", "--input", path, "-d", "2", "-k", "1"]);
    assert_eq!(output.status.code(), Some(0));
    let doc = single_doc(&output);
    assert_eq!(doc["status"], "not-globally-rigid (necessary condition failed: not 2-connected)");
}

#[test]
fn stress_prints_the_basis_for_a_framework_input() {
    let file = write_temp(CIRCUIT_FRAMEWORK);
    let path = file.path().to_str().unwrap();
    let output = run(&["stress", "--input", path, "-k", "1"]);
    assert_eq!(output.status.code(), Some(0));
    let doc = single_doc(&output);
    assert_eq!(doc["dimension"], 1);
    assert_eq!(doc["basis"][0][0], "490");

    // A bare graph carries no realization to take stresses at.
    let file = write_temp(C4);
    let path = file.path().to_str().unwrap();
    let output = run(&["stress", "--input", path, "-k", "1"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn extend_pipeline_runs_through_files() {
    // Produce a certificate, store it, then grow it by one extension.
    let graph = write_temp(K4_MINUS_EDGE);
    let output = run(&[
        "global", "--input", graph.path().to_str().unwrap(), "-d", "2", "-k", "1",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let doc = single_doc(&output);
    let cert = write_temp(&doc["certificate"].to_string());

    let steps = write_temp(r#"{"steps": [{"kind": "one-ext", "edge": [0, 1]}]}"#);
    let output = run(&[
        "extend",
        "--cert",
        cert.path().to_str().unwrap(),
        "--steps",
        steps.path().to_str().unwrap(),
        "--seed",
        "5",
    ]);
    assert_eq!(output.status.code(), Some(0));
    let grown = single_doc(&output);
    assert_eq!(grown["n"], 5);
    assert_eq!(grown["rank_omega"], 3);

    // Steps referencing absent edges are input errors.
    let bad = write_temp(r#"{"steps": [{"kind": "one-ext", "edge": [0, 9]}]}"#);
    let output = run(&[
        "extend",
        "--cert",
        cert.path().to_str().unwrap(),
        "--steps",
        bad.path().to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(!output.stderr.is_empty());
}

#[test]
fn probe_enumerates_and_validates_bounds() {
    let output = run(&["probe", "-d", "2", "-k", "1", "--nmax", "4"]);
    assert_eq!(output.status.code(), Some(0));
    let doc = single_doc(&output);
    assert_eq!(doc["graphs_tested"], 9);
    assert_eq!(doc["discrepancies"], serde_json::json!([]));

    let output = run(&["probe", "-d", "2", "-k", "1", "--nmax", "12"]);
    assert_eq!(output.status.code(), Some(2));
}
