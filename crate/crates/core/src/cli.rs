//! Command-line surface: every subcommand reads JSON documents, prints a
//! single JSON document on stdout, and reserves stderr for diagnostics.
//!
//! Exit codes: 0 when a verdict was produced (whatever the verdict says),
//! 2 on malformed input, 3 on an internal consistency failure (such as the
//! two rigidity oracles disagreeing in `check --mode both`).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::combinat::{hendrickson_checks, is_dk_rigid_combinatorial};
use crate::construct::{build_global_family, ConstructError, ConstructionStep};
use crate::framework::{parse_framework, parse_input, sample_generic, DilationProblem, Framework, InputDoc};
use crate::graph::Graph;
use crate::matrices::is_infinitesimally_dk_rigid;
use crate::probe::{probe, ProbeError};
use crate::rational::format_rational;
use crate::stress::{global_sufficiency, stress_space, Certificate, StressError};
use crate::verdict::{Method, Verdict};

/// Generic realizations sampled before a rank question is answered "no".
const GENERIC_SAMPLES: u64 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Combinatorial,
    Generic,
    Both,
}

/// Exact rigidity analysis of bar-joint frameworks with coordinate-dilation
/// constraints.
#[derive(Debug, Parser)]
#[command(name = "dilrig", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide (d,k)-rigidity of a graph.
    Check {
        /// Graph document: JSON with "n" and "edges".
        #[arg(long)]
        graph: PathBuf,
        /// Ambient dimension.
        #[arg(short)]
        d: usize,
        /// Number of trailing coordinates constrained only up to dilation.
        #[arg(short)]
        k: usize,
        /// Oracle to run; "both" also cross-checks agreement.
        #[arg(long, value_enum, default_value_t = Mode::Generic)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Base vertex of the dilation system (defaults to the first vertex
        /// with nonzero dilation coordinates).
        #[arg(long)]
        v0: Option<usize>,
    },
    /// Search for a global-rigidity certificate, after fast necessary checks.
    Global {
        /// Graph or framework document.
        #[arg(long)]
        input: PathBuf,
        #[arg(short)]
        d: usize,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print an integer basis of the stress space of a framework.
    Stress {
        /// Framework document (graph plus "d" and "positions").
        #[arg(long)]
        input: PathBuf,
        #[arg(short)]
        k: usize,
    },
    /// Extend a certificate through 1-extensions and edge additions.
    Extend {
        /// Certificate document, as produced by `global`.
        #[arg(long)]
        cert: PathBuf,
        /// JSON document {"steps": [...]}.
        #[arg(long)]
        steps: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare conjectured combinatorial conditions for global rigidity
    /// against certificate searches on all small connected graphs.
    Probe {
        #[arg(short)]
        d: usize,
        #[arg(short)]
        k: usize,
        /// Largest vertex count to enumerate (at most 7).
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))
}

fn validate_dk(d: usize, k: usize) -> Result<(), CliError> {
    if k == 0 || k >= d {
        return Err(CliError::Input(format!(
            "the dilation order must satisfy 1 <= k < d, got d = {d}, k = {k}"
        )));
    }
    Ok(())
}

fn verdict_json(v: &Verdict) -> Value {
    serde_json::to_value(v).expect("verdicts serialize")
}

/// Maximum-over-samples generic rank verdict: rigid iff some sampled
/// realization is infinitesimally rigid.
fn generic_rigidity(
    g: &Graph,
    d: usize,
    k: usize,
    seed: u64,
    v0: Option<usize>,
) -> Result<Verdict, CliError> {
    let mut last = None;
    for t in 0..GENERIC_SAMPLES {
        let f = sample_generic(g, d, seed.wrapping_add(t)).map_err(input_err)?;
        let base = match v0 {
            Some(v) => v,
            None => DilationProblem::default_v0(&f, k).map_err(input_err)?,
        };
        let prob = DilationProblem::new(f, k, base).map_err(input_err)?;
        let mut verdict = is_infinitesimally_dk_rigid(&prob);
        if verdict.method == Method::ExactRank {
            verdict.method = Method::GenericRank;
        }
        if verdict.answer {
            return Ok(verdict);
        }
        last = Some(verdict);
    }
    Ok(last.expect("at least one sample was drawn"))
}

fn cmd_check(
    path: &Path,
    d: usize,
    k: usize,
    mode: Mode,
    seed: u64,
    v0: Option<usize>,
) -> Result<(Value, i32), CliError> {
    validate_dk(d, k)?;
    let input = parse_input(&read_file(path)?).map_err(input_err)?;
    let g = match input {
        InputDoc::Graph(g) => g,
        InputDoc::Framework(_) => {
            return Err(CliError::Input(
                "check decides graphs, not realizations: strip \"d\"/\"positions\" from the \
                 document, or use `stress`/`global`, which read frameworks"
                    .into(),
            ))
        }
    };
    match mode {
        Mode::Combinatorial => {
            let v = is_dk_rigid_combinatorial(&g, d, k, seed);
            Ok((json!({ "rigid": v.answer, "verdict": verdict_json(&v) }), 0))
        }
        Mode::Generic => {
            let v = generic_rigidity(&g, d, k, seed, v0)?;
            Ok((json!({ "rigid": v.answer, "verdict": verdict_json(&v) }), 0))
        }
        Mode::Both => {
            let c = is_dk_rigid_combinatorial(&g, d, k, seed);
            let r = generic_rigidity(&g, d, k, seed, v0)?;
            let agree = c.answer == r.answer;
            let doc = json!({
                "rigid": r.answer,
                "agree": agree,
                "combinatorial": verdict_json(&c),
                "generic": verdict_json(&r),
            });
            if agree {
                Ok((doc, 0))
            } else {
                eprintln!("error: the combinatorial and generic-rank oracles disagree");
                Ok((doc, 3))
            }
        }
    }
}

fn cmd_global(path: &Path, d: usize, k: usize, seed: u64) -> Result<(Value, i32), CliError> {
    validate_dk(d, k)?;
    let input = parse_input(&read_file(path)?).map_err(input_err)?;
    let g = input.graph().clone();
    let hendrickson = hendrickson_checks(&g, d, k);
    let hendrickson_doc = serde_json::to_value(&hendrickson).expect("report serializes");
    if hendrickson.refutes() {
        let reason = if !hendrickson.connectivity_ok {
            format!("not {}-connected", hendrickson.required_connectivity)
        } else {
            "not redundantly rigid in the projection dimension".to_string()
        };
        return Ok((
            json!({
                "status": format!("not-globally-rigid (necessary condition failed: {reason})"),
                "hendrickson": hendrickson_doc,
            }),
            0,
        ));
    }

    let realizations: Vec<Framework> = match &input {
        InputDoc::Framework(f) => {
            if f.d() != d {
                return Err(CliError::Input(format!(
                    "the supplied realization lives in dimension {}, but -d is {d}",
                    f.d()
                )));
            }
            vec![f.clone()]
        }
        InputDoc::Graph(g) => (0..GENERIC_SAMPLES)
            .map(|t| sample_generic(g, d, seed.wrapping_add(t)))
            .collect::<Result<_, _>>()
            .map_err(input_err)?,
    };

    let mut last_dimension = 0;
    for f in &realizations {
        if let Some(cert) = global_sufficiency(f, k, seed).map_err(input_err)? {
            return Ok((
                json!({
                    "status": "globally-rigid (certified)",
                    "hendrickson": hendrickson_doc,
                    "certificate": cert.to_json(),
                }),
                0,
            ));
        }
        last_dimension = stress_space(f, k).map_err(input_err)?.len();
    }

    if g.is_complete() {
        return Ok((
            json!({
                "status": "globally-rigid (complete)",
                "hendrickson": hendrickson_doc,
                "explanation": "complete graphs are globally rigid at every realization",
            }),
            0,
        ));
    }
    let explanation = if last_dimension == 0 {
        "the stress space is zero-dimensional at the sampled realizations, so no rank \
         certificate exists there"
            .to_string()
    } else {
        format!(
            "no stress of rank |V| - d + k - 1 was found among {last_dimension}-dimensional \
             stress-space samples"
        )
    };
    Ok((
        json!({
            "status": "inconclusive",
            "hendrickson": hendrickson_doc,
            "explanation": explanation,
        }),
        0,
    ))
}

fn cmd_stress(path: &Path, k: usize) -> Result<(Value, i32), CliError> {
    let f = parse_framework(&read_file(path)?).map_err(input_err)?;
    let basis = stress_space(&f, k).map_err(input_err)?;
    let rows: Vec<Vec<String>> = basis
        .iter()
        .map(|v| v.iter().map(format_rational).collect())
        .collect();
    Ok((json!({ "dimension": rows.len(), "basis": rows }), 0))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StepsDoc {
    steps: Vec<ConstructionStep>,
}

fn cmd_extend(cert: &Path, steps: &Path, seed: u64) -> Result<(Value, i32), CliError> {
    let cert = Certificate::from_json(&read_file(cert)?).map_err(input_err)?;
    let steps: StepsDoc = serde_json::from_str(&read_file(steps)?).map_err(input_err)?;
    let built = build_global_family(&cert, &steps.steps, seed).map_err(|e| {
        let search_failure = matches!(
            &e,
            ConstructError::StepFailed { .. }
                | ConstructError::Stress(
                    StressError::NoNowhereZeroStress | StressError::NotMaximalRank
                )
        );
        if search_failure {
            CliError::Internal(e.to_string())
        } else {
            CliError::Input(e.to_string())
        }
    })?;
    Ok((built.to_json(), 0))
}

fn cmd_probe(d: usize, k: usize, nmax: usize, seed: u64) -> Result<(Value, i32), CliError> {
    let report = probe(d, k, nmax, seed).map_err(|e| match e {
        ProbeError::TooLarge(_) | ProbeError::BadParameters { .. } => input_err(e),
        other => CliError::Internal(other.to_string()),
    })?;
    Ok((serde_json::to_value(&report).expect("report serializes"), 0))
}

/// Executes a parsed invocation. Returns the JSON document to print and the
/// process exit code (0 unless an oracle cross-check failed).
pub fn run(cli: Cli) -> Result<(Value, i32), CliError> {
    match cli.command {
        Command::Check { graph, d, k, mode, seed, v0 } => cmd_check(&graph, d, k, mode, seed, v0),
        Command::Global { input, d, k, seed } => cmd_global(&input, d, k, seed),
        Command::Stress { input, k } => cmd_stress(&input, k),
        Command::Extend { cert, steps, seed } => cmd_extend(&cert, &steps, seed),
        Command::Probe { d, k, nmax, seed } => cmd_probe(d, k, nmax, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(contents: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(contents.as_bytes()).unwrap();
        file
    }

    fn run_args(args: &[&str]) -> Result<(Value, i32), CliError> {
        run(Cli::try_parse_from(args).unwrap())
    }

    const C4: &str = r#"{"n": 4, "edges": [[0,1],[1,2],[2,3],[0,3]]}"#;
    const K4_MINUS_EDGE: &str = r#"{"n": 4, "edges": [[0,1],[0,2],[0,3],[1,2],[2,3]]}"#;
    const P3: &str = r#"{"n": 3, "edges": [[0,1],[1,2]]}"#;
    const CIRCUIT: &str = r#"{
        "n": 4,
        "edges": [[0,1],[0,2],[0,3],[1,2],[2,3]],
        "d": 2,
        "positions": [["0","7/5"],["1","2"],["6","8"],["16","12"]]
    }"#;

    #[test]
    fn check_cycle_both_modes_agree() {
        let file = write_temp(C4);
        let (doc, code) = run_args(&[
            "dilrig", "check", "--graph", file.path().to_str().unwrap(),
            "-d", "2", "-k", "1", "--mode", "both",
        ])
        .unwrap();
        assert_eq!(code, 0);
        assert_eq!(doc["rigid"], json!(true));
        assert_eq!(doc["agree"], json!(true));
    }

    #[test]
    fn check_cycle_fails_with_two_dilation_coordinates() {
        let file = write_temp(C4);
        let (doc, code) = run_args(&[
            "dilrig", "check", "--graph", file.path().to_str().unwrap(),
            "-d", "3", "-k", "2",
        ])
        .unwrap();
        assert_eq!(code, 0);
        assert_eq!(doc["rigid"], json!(false));
        assert!(doc.get("agree").is_none());
    }

    #[test]
    fn check_tree_is_flexible() {
        let file = write_temp(P3);
        let (doc, _) = run_args(&[
            "dilrig", "check", "--graph", file.path().to_str().unwrap(),
            "-d", "2", "-k", "1", "--mode", "combinatorial",
        ])
        .unwrap();
        assert_eq!(doc["rigid"], json!(false));
    }

    #[test]
    fn check_rejects_bad_parameters_and_files() {
        let file = write_temp(C4);
        let err = run_args(&[
            "dilrig", "check", "--graph", file.path().to_str().unwrap(),
            "-d", "2", "-k", "2",
        ])
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);

        let err = run_args(&[
            "dilrig", "check", "--graph", "/nonexistent/graph.json", "-d", "2", "-k", "1",
        ])
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);

        let garbage = write_temp("not json");
        let err = run_args(&[
            "dilrig", "check", "--graph", garbage.path().to_str().unwrap(), "-d", "2", "-k", "1",
        ])
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn check_rejects_framework_documents() {
        // A realization would be silently discarded by the graph-level
        // oracles, so its presence is an input error, not a hint.
        let file = write_temp(CIRCUIT);
        let err = run_args(&[
            "dilrig", "check", "--graph", file.path().to_str().unwrap(), "-d", "2", "-k", "1",
        ])
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("check decides graphs"));
    }

    #[test]
    fn global_certifies_the_circuit() {
        let file = write_temp(K4_MINUS_EDGE);
        let (doc, code) = run_args(&[
            "dilrig", "global", "--input", file.path().to_str().unwrap(), "-d", "2", "-k", "1",
        ])
        .unwrap();
        assert_eq!(code, 0);
        assert_eq!(doc["status"], json!("globally-rigid (certified)"));
        assert_eq!(doc["certificate"]["rank_omega"], json!(2));
        // The printed certificate re-parses and re-verifies.
        Certificate::from_json(&doc["certificate"].to_string()).unwrap();
    }

    #[test]
    fn global_is_inconclusive_on_the_stress_free_cycle() {
        let file = write_temp(C4);
        let (doc, code) = run_args(&[
            "dilrig", "global", "--input", file.path().to_str().unwrap(), "-d", "2", "-k", "1",
        ])
        .unwrap();
        assert_eq!(code, 0);
        assert_eq!(doc["status"], json!("inconclusive"));
        assert!(doc["explanation"]
            .as_str()
            .unwrap()
            .contains("zero-dimensional"));
        assert_eq!(doc["hendrickson"]["connectivity_ok"], json!(true));
    }

    #[test]
    fn global_refutes_the_path() {
        let file = write_temp(P3);
        let (doc, _) = run_args(&[
            "dilrig", "global", "--input", file.path().to_str().unwrap(), "-d", "2", "-k", "1",
        ])
        .unwrap();
        assert_eq!(
            doc["status"],
            json!("not-globally-rigid (necessary condition failed: not 2-connected)")
        );
        assert!(doc.get("certificate").is_none());
    }

    #[test]
    fn global_accepts_a_supplied_realization() {
        let framework = r#"{
            "n": 4,
            "edges": [[0,1],[0,2],[0,3],[1,2],[2,3]],
            "d": 2,
            "positions": [["0","7/5"],["1","2"],["6","8"],["16","12"]]
        }"#;
        let file = write_temp(framework);
        let (doc, _) = run_args(&[
            "dilrig", "global", "--input", file.path().to_str().unwrap(), "-d", "2", "-k", "1",
        ])
        .unwrap();
        assert_eq!(doc["status"], json!("globally-rigid (certified)"));
        assert_eq!(doc["certificate"]["sigma"][0], json!("490"));

        let err = run_args(&[
            "dilrig", "global", "--input", file.path().to_str().unwrap(), "-d", "3", "-k", "2",
        ])
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn stress_prints_the_integer_basis() {
        let framework = r#"{
            "n": 4,
            "edges": [[0,1],[0,2],[0,3],[1,2],[2,3]],
            "d": 2,
            "positions": [["0","7/5"],["1","2"],["6","8"],["16","12"]]
        }"#;
        let file = write_temp(framework);
        let (doc, code) =
            run_args(&["dilrig", "stress", "--input", file.path().to_str().unwrap(), "-k", "1"])
                .unwrap();
        assert_eq!(code, 0);
        assert_eq!(doc["dimension"], json!(1));
        assert_eq!(doc["basis"][0], json!(["490", "-95", "5", "98", "-8"]));
    }

    #[test]
    fn stress_requires_a_realization() {
        let file = write_temp(C4);
        let err = run_args(&[
            "dilrig", "stress", "--input", file.path().to_str().unwrap(), "-k", "1",
        ])
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn extend_grows_a_certificate_end_to_end() {
        let graph_file = write_temp(K4_MINUS_EDGE);
        let (global_doc, _) = run_args(&[
            "dilrig", "global", "--input", graph_file.path().to_str().unwrap(),
            "-d", "2", "-k", "1",
        ])
        .unwrap();
        let cert_file = write_temp(&global_doc["certificate"].to_string());
        let steps_file = write_temp(r#"{"steps": [{"kind": "one-ext", "edge": [0, 1]}]}"#);
        let (doc, code) = run_args(&[
            "dilrig", "extend", "--cert", cert_file.path().to_str().unwrap(),
            "--steps", steps_file.path().to_str().unwrap(),
        ])
        .unwrap();
        assert_eq!(code, 0);
        assert_eq!(doc["n"], json!(5));
        assert_eq!(doc["rank_omega"], json!(3));
        let built = Certificate::from_json(&doc.to_string()).unwrap();
        assert_eq!(built.trace.len(), 1);
    }

    #[test]
    fn extend_rejects_malformed_steps() {
        let graph_file = write_temp(K4_MINUS_EDGE);
        let (global_doc, _) = run_args(&[
            "dilrig", "global", "--input", graph_file.path().to_str().unwrap(),
            "-d", "2", "-k", "1",
        ])
        .unwrap();
        let cert_file = write_temp(&global_doc["certificate"].to_string());
        let steps_file = write_temp(r#"{"steps": [{"kind": "one-ext", "edge": [0, 9]}]}"#);
        let err = run_args(&[
            "dilrig", "extend", "--cert", cert_file.path().to_str().unwrap(),
            "--steps", steps_file.path().to_str().unwrap(),
        ])
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn probe_reports_and_guards() {
        let (doc, code) = run_args(&["dilrig", "probe", "-d", "2", "-k", "1", "--nmax", "4"]).unwrap();
        assert_eq!(code, 0);
        assert_eq!(doc["graphs_tested"], json!(9));
        assert_eq!(doc["discrepancies"], json!([]));

        let err = run_args(&["dilrig", "probe", "-d", "2", "-k", "1", "--nmax", "12"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
