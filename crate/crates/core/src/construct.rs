//! Graph extension operations, the stress-lifted 1-extension, the certified
//! family builder, and the gluing admissibility check.
//!
//! A 0-extension adds a vertex of degree m; a 1-extension removes an edge
//! and adds a vertex of degree m + 1 adjacent to both of its ends. At
//! m = d - k both operations preserve combinatorial (d, k)-rigidity, and the
//! stress-lifted variant additionally transports a maximal-rank stress,
//! which is how certified families grow one vertex at a time.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::framework::{sample_generic, Framework, FrameworkError};
use crate::graph::{Graph, GraphError};
use crate::rational::{rat_int, Rational};
use crate::stress::{
    global_sufficiency, is_dilation_stress, stress_matrix, perturb_nowhere_zero, Certificate,
    StressError,
};
use crate::verdict::{Method, Verdict};

/// One recorded operation in a construction trace. Vertex and edge
/// parameters refer to labels in the graph as it exists when the step runs:
/// each extension appends its new vertex with the next free label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConstructionStep {
    ZeroExt {
        attach: Vec<usize>,
    },
    OneExt {
        edge: (usize, usize),
        #[serde(default)]
        extra: Vec<usize>,
    },
    AddEdge {
        edge: (usize, usize),
    },
    Glue {
        shared: Vec<(usize, usize)>,
    },
}

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Framework(#[from] FrameworkError),
    #[error(transparent)]
    Stress(#[from] StressError),
    #[error("attachment must name {needed} distinct existing vertices, got {found}")]
    BadAttachment { needed: usize, found: usize },
    #[error("edge ({}, {}) is not in the graph", edge.0, edge.1)]
    MissingEdge { edge: (usize, usize) },
    #[error("the stress vanishes on edge ({}, {}); perturb it away from zero first", edge.0, edge.1)]
    ZeroStressOnEdge { edge: (usize, usize) },
    #[error("the shared-vertex correspondence is not injective")]
    NonInjectiveMap,
    #[error("step kind \"{0}\" is not supported by the family builder")]
    UnsupportedStep(String),
    #[error("construction step {index} failed: {reason}")]
    StepFailed { index: usize, reason: String },
}

fn validate_attachment(g: &Graph, needed: usize, attach: &[usize]) -> Result<(), ConstructError> {
    let distinct: BTreeSet<usize> = attach.iter().copied().collect();
    if attach.len() != needed || distinct.len() != needed || attach.iter().any(|&v| v >= g.n()) {
        return Err(ConstructError::BadAttachment {
            needed,
            found: attach.len(),
        });
    }
    Ok(())
}

/// Adds one vertex joined to `m` distinct existing vertices.
pub fn zero_extension(g: &Graph, m: usize, attach: &[usize]) -> Result<Graph, ConstructError> {
    validate_attachment(g, m, attach)?;
    let new = g.n();
    let mut edges = g.edges().to_vec();
    edges.extend(attach.iter().map(|&a| (a, new)));
    Ok(Graph::new(g.n() + 1, edges)?)
}

/// Removes the edge `e` and adds one vertex joined to both of its ends and
/// to `m - 1` further vertices named by `extra` (degree m + 1 in total).
pub fn one_extension(
    g: &Graph,
    m: usize,
    e: (usize, usize),
    extra: &[usize],
) -> Result<Graph, ConstructError> {
    let (x, y) = (e.0.min(e.1), e.0.max(e.1));
    let idx = g
        .edge_index(x, y)
        .ok_or(ConstructError::MissingEdge { edge: (x, y) })?;
    let needed = m.saturating_sub(1);
    validate_attachment(g, needed, extra)?;
    if extra.contains(&x) || extra.contains(&y) {
        return Err(ConstructError::BadAttachment {
            needed,
            found: extra.len(),
        });
    }
    let new = g.n();
    let mut edges = g.without_edge_index(idx).edges().to_vec();
    edges.push((x, new));
    edges.push((y, new));
    edges.extend(extra.iter().map(|&a| (a, new)));
    Ok(Graph::new(g.n() + 1, edges)?)
}

/// The stress-transporting 1-extension: splits the edge `e` at the midpoint
/// of its endpoints and rewrites the stress so the new framework inherits
/// it. The stress on `e` must be nonzero; the two edges replacing `e` carry
/// twice that value, the other new edges carry zero, and every surviving
/// edge keeps its entry. Both postconditions are asserted exactly: the
/// rewritten vector is a stress of the extended framework, and its stress
/// matrix has rank exactly one more than before.
pub fn one_extension_stress_lift(
    f: &Framework,
    k: usize,
    sigma: &[Rational],
    e: (usize, usize),
    extra: &[usize],
) -> Result<(Framework, Vec<Rational>), ConstructError> {
    let g = f.graph();
    if sigma.len() != g.edge_count() {
        return Err(StressError::LengthMismatch {
            found: sigma.len(),
            expected: g.edge_count(),
        }
        .into());
    }
    if !is_dilation_stress(f, k, sigma)? {
        return Err(StressError::NotADilationStress.into());
    }
    let (x, y) = (e.0.min(e.1), e.0.max(e.1));
    let e_idx = g
        .edge_index(x, y)
        .ok_or(ConstructError::MissingEdge { edge: (x, y) })?;
    if sigma[e_idx].is_zero() {
        return Err(ConstructError::ZeroStressOnEdge { edge: (x, y) });
    }
    let m = f.d() - k;
    let new_graph = one_extension(g, m, (x, y), extra)?;
    let new_v = g.n();

    let mut positions = f.positions().to_vec();
    let midpoint: Vec<Rational> = f
        .position(x)
        .iter()
        .zip(f.position(y))
        .map(|(a, b)| (a + b) / rat_int(2))
        .collect();
    positions.push(midpoint);
    let lifted = Framework::new(new_graph.clone(), f.d(), positions)?;

    let doubled = &sigma[e_idx] * rat_int(2);
    let new_sigma: Vec<Rational> = new_graph
        .edges()
        .iter()
        .map(|&(u, v)| {
            if v == new_v {
                if u == x || u == y {
                    doubled.clone()
                } else {
                    Rational::zero()
                }
            } else {
                sigma[g.edge_index(u, v).expect("surviving edge")].clone()
            }
        })
        .collect();

    assert_eq!(
        new_graph.edge_count(),
        g.edge_count() + m,
        "a 1-extension must add exactly its dimension in edges"
    );
    assert!(
        is_dilation_stress(&lifted, k, &new_sigma)?,
        "the rewritten vector must be a stress of the extended framework"
    );
    let old_rank = stress_matrix(g, sigma).rank();
    let new_rank = stress_matrix(&new_graph, &new_sigma).rank();
    assert_eq!(
        new_rank,
        old_rank + 1,
        "the stress-matrix rank must step by exactly one"
    );
    Ok((lifted, new_sigma))
}

/// Re-anchors a construction state at a fresh generic realization and finds
/// a maximal-rank stress there, retrying a few samples before giving up.
fn recertify(
    graph: &Graph,
    d: usize,
    k: usize,
    trace: Vec<ConstructionStep>,
    rng_seed: u64,
    index: usize,
) -> Result<Certificate, ConstructError> {
    for attempt in 0..3u64 {
        let draw = rng_seed
            .wrapping_add(1 + index as u64)
            .wrapping_mul(2 * attempt + 1);
        let f = sample_generic(graph, d, draw)?;
        if let Some(mut cert) = global_sufficiency(&f, k, draw)? {
            cert.trace = trace;
            return Ok(cert);
        }
    }
    Err(ConstructError::StepFailed {
        index,
        reason: "no maximal-rank stress found at resampled generic realizations".into(),
    })
}

/// Grows a certified framework by 1-extensions and edge additions, keeping a
/// maximal-rank stress alive across every step.
///
/// Each 1-extension first perturbs the current stress to a nowhere-zero one
/// of equal rank (a no-op when it already vanishes nowhere), transports it
/// through the extension — which raises the stress-matrix rank by exactly
/// one — and then re-anchors the result at a freshly sampled generic
/// realization, where a maximal-rank stress is searched for again. Edge
/// additions extend the stress by a zero entry and re-anchor likewise. The
/// returned certificate records the steps in its trace, and after every step
/// its rank satisfies rank = |V| - d + k - 1.
pub fn build_global_family(
    seed: &Certificate,
    steps: &[ConstructionStep],
    rng_seed: u64,
) -> Result<Certificate, ConstructError> {
    seed.verify()?;
    let mut current = seed.clone();
    let d = current.framework.d();
    let k = current.k;
    for (index, step) in steps.iter().enumerate() {
        let fail = |reason: String| ConstructError::StepFailed { index, reason };
        match step {
            ConstructionStep::OneExt { edge, extra } => {
                let sigma =
                    perturb_nowhere_zero(&current.framework, k, &current.sigma, rng_seed)
                        .map_err(|e| fail(format!("stress perturbation failed: {e}")))?;
                let (lifted, lifted_sigma) =
                    one_extension_stress_lift(&current.framework, k, &sigma, *edge, extra)?;
                assert_eq!(
                    stress_matrix(lifted.graph(), &lifted_sigma).rank() as i64,
                    lifted.n() as i64 - d as i64 + k as i64 - 1,
                    "the transported stress must reach the rank target"
                );
                let mut trace = current.trace.clone();
                trace.push(step.clone());
                current = recertify(lifted.graph(), d, k, trace, rng_seed, index)?;
            }
            ConstructionStep::AddEdge { edge } => {
                let (u, v) = (edge.0.min(edge.1), edge.0.max(edge.1));
                let old_graph = current.framework.graph().clone();
                let new_graph = old_graph.with_edge(u, v)?;
                let extended: Vec<Rational> = new_graph
                    .edges()
                    .iter()
                    .map(|&(a, b)| {
                        if (a, b) == (u, v) {
                            Rational::zero()
                        } else {
                            current.sigma[old_graph.edge_index(a, b).expect("old edge")].clone()
                        }
                    })
                    .collect();
                let at_same_points = current.framework.with_graph(new_graph.clone())?;
                assert!(
                    is_dilation_stress(&at_same_points, k, &extended)?,
                    "a stress extended by zero must remain a stress"
                );
                assert_eq!(
                    stress_matrix(&new_graph, &extended).rank(),
                    current.rank_omega,
                    "a zero entry on the added edge must leave the stress matrix unchanged"
                );
                let mut trace = current.trace.clone();
                trace.push(step.clone());
                current = recertify(&new_graph, d, k, trace, rng_seed, index)?;
            }
            ConstructionStep::ZeroExt { .. } => {
                return Err(ConstructError::UnsupportedStep("zero-ext".into()));
            }
            ConstructionStep::Glue { .. } => {
                return Err(ConstructError::UnsupportedStep("glue".into()));
            }
        }
        assert_eq!(
            current.rank_omega as i64,
            current.framework.n() as i64 - d as i64 + k as i64 - 1,
            "every intermediate certificate must sit at the rank target"
        );
    }
    Ok(current)
}

/// Decides whether two graphs overlap enough for global rigidity to
/// transfer to their union: both pieces must have at least d - k + 2
/// vertices and share at least d - k + 1. `shared` pairs a vertex of `g1`
/// with the vertex of `g2` identified with it; the union keeps the labels
/// of `g1` and relabels the remaining vertices of `g2` in increasing order.
pub fn glue_check(
    g1: &Graph,
    g2: &Graph,
    shared: &[(usize, usize)],
    d: usize,
    k: usize,
) -> Result<(Verdict, Graph), ConstructError> {
    let left: BTreeSet<usize> = shared.iter().map(|&(a, _)| a).collect();
    let right: BTreeSet<usize> = shared.iter().map(|&(_, b)| b).collect();
    if left.len() != shared.len() || right.len() != shared.len() {
        return Err(ConstructError::NonInjectiveMap);
    }
    if shared
        .iter()
        .any(|&(a, b)| a >= g1.n() || b >= g2.n())
    {
        return Err(ConstructError::BadAttachment {
            needed: shared.len(),
            found: shared.len(),
        });
    }

    let mut map: Vec<Option<usize>> = vec![None; g2.n()];
    for &(a, b) in shared {
        map[b] = Some(a);
    }
    let mut next = g1.n();
    for slot in map.iter_mut() {
        if slot.is_none() {
            *slot = Some(next);
            next += 1;
        }
    }
    let mut edges: BTreeSet<(usize, usize)> = g1.edges().iter().copied().collect();
    for &(u, v) in g2.edges() {
        let (a, b) = (map[u].unwrap(), map[v].unwrap());
        edges.insert((a.min(b), a.max(b)));
    }
    let union = Graph::new(next, edges)?;

    let m = d.saturating_sub(k);
    let pass = g1.n() >= m + 2 && g2.n() >= m + 2 && shared.len() > m;
    Ok((Verdict::new(pass, Method::Combinatorial), union))
}
