//! Small-scale exploration probe: on every connected graph up to a vertex
//! bound, compare the conjectured combinatorial descriptions of global
//! rigidity against an actual stress-certificate search, and report each
//! graph where the two disagree.

use serde::Serialize;
use thiserror::Error;

use crate::combinat::{
    globally_m_rigid_graph, is_k_connected, is_two_edge_connected, redundantly_two_rigid,
    CombinatError,
};
use crate::enumerate::{canonical_bits, canonical_graph6, enumerate_connected_graphs};
use crate::framework::{sample_generic, FrameworkError};
use crate::graph::{EdgeSubset, Graph};
use crate::stress::{global_sufficiency, StressError};

/// Largest vertex count the probe enumerates up to; beyond this the graph
/// count (and the per-graph edge-subset scans) blow up.
pub const MAX_PROBE_VERTICES: usize = 7;
/// Generic realizations sampled before the certificate search gives up.
const CERT_SAMPLE_ATTEMPTS: u64 = 3;

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error("nmax {0} exceeds the supported maximum of {MAX_PROBE_VERTICES}")]
    TooLarge(usize),
    #[error("the probe requires 1 <= k < d and d - k <= 2, got d = {d}, k = {k}")]
    BadParameters { d: usize, k: usize },
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error(transparent)]
    Stress(#[from] StressError),
    #[error(transparent)]
    Combinat(#[from] CombinatError),
}

/// The three evaluations on one graph: does some k-edge set F make G - F
/// both (d-k+1)-connected and redundantly (d-k)-rigid (`cond2`); does some
/// F make G - F globally (d-k)-rigid by the known low-dimensional
/// characterizations (`cond3`); and did the stress search certify G itself
/// (`certified`).
#[derive(Debug, Clone, Serialize)]
pub struct ProbeInstance {
    pub graph6: String,
    pub cond2: bool,
    pub cond3: bool,
    pub certified: bool,
}

/// Aggregate probe outcome. `discrepancies` lists every graph whose
/// certificate flag disagrees with `cond2`, in either direction; an empty
/// list means no counterexample candidate was found at this scale.
#[derive(Debug, Serialize)]
pub struct ProbeReport {
    pub d: usize,
    pub k: usize,
    pub nmax: usize,
    pub graphs_tested: usize,
    pub cond2_count: usize,
    pub cond3_count: usize,
    pub certified_count: usize,
    pub discrepancies: Vec<ProbeInstance>,
}

fn validate(d: usize, k: usize) -> Result<usize, ProbeError> {
    if k == 0 || k >= d || d - k > 2 {
        return Err(ProbeError::BadParameters { d, k });
    }
    Ok(d - k)
}

/// All k-element index subsets of 0..m, in lexicographic order.
fn edge_choices(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::with_capacity(k), &mut out);
    out
}

fn redundantly_m_rigid(h: &Graph, m: usize) -> bool {
    match m {
        1 => h.is_connected() && is_two_edge_connected(h),
        2 => redundantly_two_rigid(h),
        _ => unreachable!("probe dimension gap is at most 2"),
    }
}

fn condition_two(g: &Graph, m: usize, k: usize) -> bool {
    edge_choices(g.edge_count(), k).iter().any(|f| {
        let h = g.without_edges(&EdgeSubset::from_indices(f));
        is_k_connected(&h, m + 1).answer && redundantly_m_rigid(&h, m)
    })
}

fn condition_three(g: &Graph, m: usize, k: usize) -> Result<bool, CombinatError> {
    for f in edge_choices(g.edge_count(), k) {
        let h = g.without_edges(&EdgeSubset::from_indices(&f));
        if globally_m_rigid_graph(&h, m)?.answer {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Runs all three evaluations on one graph. The certificate search draws up
/// to a few generic realizations from `seed` before concluding "not
/// certified".
pub fn evaluate_graph(
    g: &Graph,
    d: usize,
    k: usize,
    seed: u64,
) -> Result<ProbeInstance, ProbeError> {
    let m = validate(d, k)?;
    let cond2 = condition_two(g, m, k);
    let cond3 = condition_three(g, m, k)?;
    let mut certified = false;
    for attempt in 0..CERT_SAMPLE_ATTEMPTS {
        let draw = seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9));
        let f = sample_generic(g, d, draw)?;
        if global_sufficiency(&f, k, draw)?.is_some() {
            certified = true;
            break;
        }
    }
    Ok(ProbeInstance {
        graph6: canonical_graph6(g),
        cond2,
        cond3,
        certified,
    })
}

/// Evaluates every connected graph on 2..=nmax vertices (one per
/// isomorphism class) and collects the graphs where the combinatorial
/// condition and the certificate search disagree. Per-graph randomness is
/// derived from the master seed and the graph's canonical form, so the
/// report is reproducible and independent of enumeration order.
pub fn probe(d: usize, k: usize, nmax: usize, seed: u64) -> Result<ProbeReport, ProbeError> {
    validate(d, k)?;
    if nmax > MAX_PROBE_VERTICES {
        return Err(ProbeError::TooLarge(nmax));
    }
    let mut report = ProbeReport {
        d,
        k,
        nmax,
        graphs_tested: 0,
        cond2_count: 0,
        cond3_count: 0,
        certified_count: 0,
        discrepancies: Vec::new(),
    };
    for n in 2..=nmax {
        for g in enumerate_connected_graphs(n) {
            let graph_seed = seed ^ canonical_bits(&g).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            let instance = evaluate_graph(&g, d, k, graph_seed)?;
            report.graphs_tested += 1;
            report.cond2_count += instance.cond2 as usize;
            report.cond3_count += instance.cond3 as usize;
            report.certified_count += instance.certified as usize;
            if instance.cond2 != instance.certified {
                report.discrepancies.push(instance);
            }
        }
    }
    Ok(report)
}
