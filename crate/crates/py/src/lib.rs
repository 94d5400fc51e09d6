//! Python bindings for the rigidity library. Structured payloads cross the
//! boundary as JSON strings so the Python side stays dependency-free and the
//! formats match the CLI's file formats exactly.

use dilrig::combinat::{hendrickson_checks, is_dk_rigid_combinatorial};
use dilrig::construct::{build_global_family, ConstructionStep};
use dilrig::framework::{framework_to_json, parse_framework, parse_input, sample_generic, InputDoc};
use dilrig::matrices::is_infinitesimally_dk_rigid;
use dilrig::probe::probe;
use dilrig::stress::{global_sufficiency, stress_space, Certificate};
use dilrig::verdict::{Method, Verdict};
use dilrig::{DilationProblem, Framework, Graph};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::json;

const GENERIC_SAMPLES: u64 = 3;

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn require_dk(d: usize, k: usize) -> PyResult<()> {
    if k == 0 || k >= d {
        return Err(PyValueError::new_err(format!(
            "dilation count must satisfy 1 <= k < d (got d={d}, k={k})"
        )));
    }
    Ok(())
}

/// Rigidity of one exact realization.
fn exact_verdict(f: &Framework, k: usize) -> PyResult<Verdict> {
    let v0 = DilationProblem::default_v0(f, k).map_err(value_err)?;
    let prob = DilationProblem::new(f.clone(), k, v0).map_err(value_err)?;
    Ok(is_infinitesimally_dk_rigid(&prob))
}

/// Generic rigidity of a graph: the best verdict over a few sampled
/// realizations, reported as a generic-rank answer.
fn generic_verdict(g: &Graph, d: usize, k: usize, seed: u64) -> PyResult<Verdict> {
    let mut last = None;
    for t in 0..GENERIC_SAMPLES {
        let f = sample_generic(g, d, seed.wrapping_add(t)).map_err(value_err)?;
        let mut v = exact_verdict(&f, k)?;
        if v.method == Method::ExactRank {
            v.method = Method::GenericRank;
        }
        let rigid = v.answer;
        last = Some(v);
        if rigid {
            break;
        }
    }
    Ok(last.expect("at least one sample is always drawn"))
}

/// Decide (d,k)-rigidity of a JSON graph or framework document.
///
/// `mode` is "combinatorial", "generic", or "both" (graphs only); framework
/// inputs are decided exactly at the given realization. Returns a JSON
/// verdict document.
#[pyfunction]
#[pyo3(signature = (input_json, d, k, mode = "generic", seed = 0))]
fn check(input_json: &str, d: usize, k: usize, mode: &str, seed: u64) -> PyResult<String> {
    require_dk(d, k)?;
    let input = parse_input(input_json).map_err(value_err)?;
    let doc = match (&input, mode) {
        (InputDoc::Framework(f), _) => {
            let v = exact_verdict(f, k)?;
            json!({ "rigid": v.answer, "verdict": v })
        }
        (InputDoc::Graph(g), "combinatorial") => {
            let v = is_dk_rigid_combinatorial(g, d, k, seed);
            json!({ "rigid": v.answer, "verdict": v })
        }
        (InputDoc::Graph(g), "generic") => {
            let v = generic_verdict(g, d, k, seed)?;
            json!({ "rigid": v.answer, "verdict": v })
        }
        (InputDoc::Graph(g), "both") => {
            let c = is_dk_rigid_combinatorial(g, d, k, seed);
            let r = generic_verdict(g, d, k, seed)?;
            json!({
                "rigid": r.answer,
                "agree": c.answer == r.answer,
                "combinatorial": c,
                "generic": r,
            })
        }
        _ => {
            return Err(PyValueError::new_err(format!(
                "unknown mode {mode:?}: expected combinatorial, generic, or both"
            )))
        }
    };
    Ok(doc.to_string())
}

/// Draw a generic rational realization of a JSON graph in dimension `d`.
#[pyfunction]
#[pyo3(signature = (graph_json, d, seed = 0))]
fn sample_framework(graph_json: &str, d: usize, seed: u64) -> PyResult<String> {
    let g = match parse_input(graph_json).map_err(value_err)? {
        InputDoc::Graph(g) => g,
        InputDoc::Framework(f) => f.graph().clone(),
    };
    let f = sample_generic(&g, d, seed).map_err(value_err)?;
    Ok(framework_to_json(&f).to_string())
}

/// The stress space of a JSON framework with `k` dilation coordinates:
/// dimension plus a primitive integer basis (entries as decimal strings).
#[pyfunction]
fn stress_basis(framework_json: &str, k: usize) -> PyResult<String> {
    let f = parse_framework(framework_json).map_err(value_err)?;
    require_dk(f.d(), k)?;
    let basis = stress_space(&f, k).map_err(value_err)?;
    let rows: Vec<Vec<String>> = basis
        .iter()
        .map(|sigma| sigma.iter().map(|x| x.to_string()).collect())
        .collect();
    Ok(json!({ "dimension": rows.len(), "basis": rows }).to_string())
}

/// Search for a maximal-rank stress certificate of global (d,k)-rigidity.
///
/// Graph inputs are tried at a few generic realizations; framework inputs at
/// the one given realization. Returns a JSON document with the screening
/// report, a `certified` flag, and the certificate when one is found.
#[pyfunction]
#[pyo3(signature = (input_json, d, k, seed = 0))]
fn global_certificate(input_json: &str, d: usize, k: usize, seed: u64) -> PyResult<String> {
    require_dk(d, k)?;
    let input = parse_input(input_json).map_err(value_err)?;
    let (g, realizations) = match input {
        InputDoc::Graph(g) => (g, None),
        InputDoc::Framework(f) => {
            if f.d() != d {
                return Err(PyValueError::new_err(format!(
                    "realization lives in dimension {}, not {d}",
                    f.d()
                )));
            }
            (f.graph().clone(), Some(f))
        }
    };
    let screen = hendrickson_checks(&g, d, k);
    if screen.refutes() {
        return Ok(json!({ "certified": false, "screen": screen, "certificate": null })
            .to_string());
    }
    let candidates: Vec<Framework> = match realizations {
        Some(f) => vec![f],
        None => (0..GENERIC_SAMPLES)
            .map(|t| sample_generic(&g, d, seed.wrapping_add(t)).map_err(value_err))
            .collect::<PyResult<_>>()?,
    };
    for (t, f) in candidates.iter().enumerate() {
        if let Some(cert) =
            global_sufficiency(f, k, seed.wrapping_add(t as u64)).map_err(value_err)?
        {
            return Ok(json!({
                "certified": true,
                "screen": screen,
                "certificate": cert.to_json(),
            })
            .to_string());
        }
    }
    Ok(json!({ "certified": false, "screen": screen, "certificate": null }).to_string())
}

/// Grow a certificate along construction steps (JSON: `{"steps": [...]}`),
/// re-certifying after each step. Returns the final certificate.
#[pyfunction]
#[pyo3(signature = (cert_json, steps_json, seed = 0))]
fn extend_certificate(cert_json: &str, steps_json: &str, seed: u64) -> PyResult<String> {
    let cert = Certificate::from_json(cert_json).map_err(value_err)?;
    let doc: serde_json::Value = serde_json::from_str(steps_json).map_err(value_err)?;
    let steps: Vec<ConstructionStep> = serde_json::from_value(
        doc.get("steps")
            .cloned()
            .ok_or_else(|| PyValueError::new_err("steps document must carry a \"steps\" array"))?,
    )
    .map_err(value_err)?;
    let grown = build_global_family(&cert, &steps, seed).map_err(value_err)?;
    Ok(grown.to_json().to_string())
}

/// Sweep all connected graphs up to `nmax` vertices, comparing certificate
/// existence with the combinatorial conditions. Returns the JSON report.
#[pyfunction]
#[pyo3(signature = (d, k, nmax, seed = 0))]
fn probe_conjecture(d: usize, k: usize, nmax: usize, seed: u64) -> PyResult<String> {
    let report = probe(d, k, nmax, seed).map_err(value_err)?;
    serde_json::to_string(&report).map_err(value_err)
}

#[pymodule]
fn dilrig_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(sample_framework, m)?)?;
    m.add_function(wrap_pyfunction!(stress_basis, m)?)?;
    m.add_function(wrap_pyfunction!(global_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(extend_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(probe_conjecture, m)?)?;
    Ok(())
}
