//! Frameworks (graphs realized in rational d-space), their JSON form,
//! deterministic generic sampling, and the dilation problem wrapper.
//!
//! The JSON document format is
//!
//! ```json
//! {"n": 4, "edges": [[0,1],[1,2],[2,3],[0,3]], "d": 2,
//!  "positions": [["1","1"],["2","1"],["2","2"],["1","2"]]}
//! ```
//!
//! with every coordinate a rational in `"a"` or `"a/b"` form (never a float).
//! Graph-only documents omit `d` and `positions`. Edges may be listed in any
//! order and orientation; parsing normalizes to the canonical order.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::rational::{format_rational, parse_rational, Rational};
use num_traits::Zero;

/// Errors from framework construction and JSON parsing.
#[derive(Debug, Error)]
pub enum FrameworkError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("vertex count must be at least 1")]
    EmptyVertexSet,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("negative vertex index {0}")]
    NegativeVertex(i64),
    #[error("dimension must be at least 1")]
    DimensionZero,
    #[error("`d` and `positions` must be given together")]
    HalfSpecifiedRealization,
    #[error("expected {expected} position rows, found {found}")]
    WrongPositionCount { expected: usize, found: usize },
    #[error("position row {vertex} has {found} coordinates, expected {expected}")]
    WrongCoordinateCount {
        vertex: usize,
        expected: usize,
        found: usize,
    },
    #[error("bad coordinate for vertex {vertex}: {source}")]
    BadCoordinate {
        vertex: usize,
        source: crate::rational::ParseRationalError,
    },
    #[error("dilation order k={k} must satisfy 1 <= k < d={d}")]
    BadDilationOrder { k: usize, d: usize },
    #[error("vertex index {v0} out of range for {n} vertices")]
    BadBaseVertex { v0: usize, n: usize },
    #[error("coordinate {coord} of base vertex {v0} is zero; dilation ratios undefined")]
    ZeroAtBaseVertex { v0: usize, coord: usize },
    #[error("no vertex has all dilation coordinates nonzero")]
    NoValidBaseVertex,
    #[error("generic sampling exceeded the resample cap of {0}")]
    ResampleCapExceeded(usize),
}

/// A graph together with a rational realization in `d`-space.
///
/// `positions[v]` is the point of vertex `v`; coordinates are 0-indexed
/// internally (`0..d`), so "the last k coordinates" are `d-k..d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Framework {
    graph: Graph,
    d: usize,
    positions: Vec<Vec<Rational>>,
}

impl Framework {
    pub fn new(graph: Graph, d: usize, positions: Vec<Vec<Rational>>) -> Result<Self, FrameworkError> {
        if d == 0 {
            return Err(FrameworkError::DimensionZero);
        }
        if positions.len() != graph.n() {
            return Err(FrameworkError::WrongPositionCount {
                expected: graph.n(),
                found: positions.len(),
            });
        }
        for (vertex, row) in positions.iter().enumerate() {
            if row.len() != d {
                return Err(FrameworkError::WrongCoordinateCount {
                    vertex,
                    expected: d,
                    found: row.len(),
                });
            }
        }
        Ok(Framework { graph, d, positions })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn positions(&self) -> &[Vec<Rational>] {
        &self.positions
    }

    pub fn position(&self, v: usize) -> &[Rational] {
        &self.positions[v]
    }

    /// Coordinate `c` (0-based) of vertex `v`.
    pub fn coordinate(&self, v: usize, c: usize) -> &Rational {
        &self.positions[v][c]
    }

    /// The vector `(p_c(0), …, p_c(n-1))` for one coordinate `c` (0-based).
    pub fn coordinate_slice(&self, c: usize) -> Vec<Rational> {
        self.positions.iter().map(|p| p[c].clone()).collect()
    }

    /// Same positions on a different graph (same vertex count).
    pub fn with_graph(&self, graph: Graph) -> Result<Self, FrameworkError> {
        Framework::new(graph, self.d, self.positions.clone())
    }

    /// Drops the last `k` coordinates. Requires `1 <= k < d`.
    pub fn project(&self, k: usize) -> Result<Framework, FrameworkError> {
        if k == 0 || k >= self.d {
            return Err(FrameworkError::BadDilationOrder { k, d: self.d });
        }
        let keep = self.d - k;
        let positions = self
            .positions
            .iter()
            .map(|row| row[..keep].to_vec())
            .collect();
        Framework::new(self.graph.clone(), keep, positions)
    }

    /// Squared Euclidean distance between the points of `u` and `v`.
    pub fn squared_distance(&self, u: usize, v: usize) -> Rational {
        (0..self.d)
            .map(|c| {
                let diff = &self.positions[u][c] - &self.positions[v][c];
                &diff * &diff
            })
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    /// True iff all `n*d` coordinate values are pairwise distinct and nonzero.
    pub fn has_distinct_nonzero_coordinates(&self) -> bool {
        let mut seen: Vec<&Rational> = Vec::new();
        for row in &self.positions {
            for x in row {
                if x.is_zero() || seen.contains(&x) {
                    return false;
                }
                seen.push(x);
            }
        }
        true
    }
}

/// Raw JSON document; `d`/`positions` are optional together.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    n: i64,
    edges: Vec<[i64; 2]>,
    #[serde(default)]
    d: Option<usize>,
    #[serde(default)]
    positions: Option<Vec<Vec<String>>>,
}

/// A parsed input document: either a bare graph or a full framework.
#[derive(Debug, Clone)]
pub enum InputDoc {
    Graph(Graph),
    Framework(Framework),
}

impl InputDoc {
    pub fn graph(&self) -> &Graph {
        match self {
            InputDoc::Graph(g) => g,
            InputDoc::Framework(f) => f.graph(),
        }
    }
}

fn parse_raw(doc: &str) -> Result<RawDoc, FrameworkError> {
    serde_json::from_str(doc).map_err(|e| FrameworkError::Json(e.to_string()))
}

fn graph_from_raw(raw: &RawDoc) -> Result<Graph, FrameworkError> {
    if raw.n < 1 {
        return Err(FrameworkError::EmptyVertexSet);
    }
    let n = raw.n as usize;
    let mut edges = Vec::with_capacity(raw.edges.len());
    for &[a, b] in &raw.edges {
        if a < 0 {
            return Err(FrameworkError::NegativeVertex(a));
        }
        if b < 0 {
            return Err(FrameworkError::NegativeVertex(b));
        }
        edges.push((a as usize, b as usize));
    }
    Ok(Graph::new(n, edges)?)
}

/// Parses a graph-or-framework document.
pub fn parse_input(doc: &str) -> Result<InputDoc, FrameworkError> {
    let raw = parse_raw(doc)?;
    let graph = graph_from_raw(&raw)?;
    match (&raw.d, &raw.positions) {
        (None, None) => Ok(InputDoc::Graph(graph)),
        (Some(d), Some(positions)) => {
            let d = *d;
            if d == 0 {
                return Err(FrameworkError::DimensionZero);
            }
            let mut parsed = Vec::with_capacity(positions.len());
            for (vertex, row) in positions.iter().enumerate() {
                let mut out = Vec::with_capacity(row.len());
                for s in row {
                    out.push(
                        parse_rational(s)
                            .map_err(|source| FrameworkError::BadCoordinate { vertex, source })?,
                    );
                }
                parsed.push(out);
            }
            Ok(InputDoc::Framework(Framework::new(graph, d, parsed)?))
        }
        _ => Err(FrameworkError::HalfSpecifiedRealization),
    }
}

/// Parses a document that must carry a realization.
pub fn parse_framework(doc: &str) -> Result<Framework, FrameworkError> {
    match parse_input(doc)? {
        InputDoc::Framework(f) => Ok(f),
        InputDoc::Graph(_) => Err(FrameworkError::HalfSpecifiedRealization),
    }
}

/// Serializes a graph to the document format (no realization fields).
pub fn graph_to_json(g: &Graph) -> serde_json::Value {
    serde_json::json!({
        "n": g.n(),
        "edges": g.edges().iter().map(|&(u, v)| vec![u, v]).collect::<Vec<_>>(),
    })
}

/// Serializes a framework to the document format.
pub fn framework_to_json(f: &Framework) -> serde_json::Value {
    let positions: Vec<Vec<String>> = f
        .positions()
        .iter()
        .map(|row| row.iter().map(format_rational).collect())
        .collect();
    serde_json::json!({
        "n": f.n(),
        "edges": f.graph().edges().iter().map(|&(u, v)| vec![u, v]).collect::<Vec<_>>(),
        "d": f.d(),
        "positions": positions,
    })
}

/// Upper bound on rejected draws across one sampling call.
const RESAMPLE_CAP: usize = 100;

/// Samples a generic realization: each of the `n*d` coordinates is an
/// independent uniform integer in `[-2^30, 2^30]`, redrawn while it is zero or
/// collides with an earlier coordinate (at most [`RESAMPLE_CAP`] redraws).
/// Deterministic for a fixed seed.
pub fn sample_generic(graph: &Graph, d: usize, seed: u64) -> Result<Framework, FrameworkError> {
    if d == 0 {
        return Err(FrameworkError::DimensionZero);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used: HashSet<i64> = HashSet::new();
    let mut rejected = 0;
    let bound = 1i64 << 30;
    let mut positions = Vec::with_capacity(graph.n());
    for _ in 0..graph.n() {
        let mut row = Vec::with_capacity(d);
        for _ in 0..d {
            let value = loop {
                let v = rng.random_range(-bound..=bound);
                if v != 0 && used.insert(v) {
                    break v;
                }
                rejected += 1;
                if rejected > RESAMPLE_CAP {
                    return Err(FrameworkError::ResampleCapExceeded(RESAMPLE_CAP));
                }
            };
            row.push(crate::rational::rat_int(value));
        }
        positions.push(row);
    }
    Framework::new(graph.clone(), d, positions)
}

/// A framework with a dilation order `k` and a base vertex `v0` whose last `k`
/// coordinates are all nonzero, so the ratio constraints at `v0` are defined.
#[derive(Debug, Clone)]
pub struct DilationProblem {
    framework: Framework,
    k: usize,
    v0: usize,
}

impl DilationProblem {
    pub fn new(framework: Framework, k: usize, v0: usize) -> Result<Self, FrameworkError> {
        let d = framework.d();
        if k == 0 || k >= d {
            return Err(FrameworkError::BadDilationOrder { k, d });
        }
        if v0 >= framework.n() {
            return Err(FrameworkError::BadBaseVertex {
                v0,
                n: framework.n(),
            });
        }
        for c in d - k..d {
            if framework.coordinate(v0, c).is_zero() {
                return Err(FrameworkError::ZeroAtBaseVertex { v0, coord: c });
            }
        }
        Ok(DilationProblem { framework, k, v0 })
    }

    /// Lowest-index vertex whose dilation coordinates are all nonzero.
    pub fn default_v0(framework: &Framework, k: usize) -> Result<usize, FrameworkError> {
        let d = framework.d();
        if k == 0 || k >= d {
            return Err(FrameworkError::BadDilationOrder { k, d });
        }
        (0..framework.n())
            .find(|&v| (d - k..d).all(|c| !framework.coordinate(v, c).is_zero()))
            .ok_or(FrameworkError::NoValidBaseVertex)
    }

    pub fn framework(&self) -> &Framework {
        &self.framework
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn v0(&self) -> usize {
        self.v0
    }

    /// The dilation coordinates `d-k..d` (0-based).
    pub fn dilation_coords(&self) -> std::ops::Range<usize> {
        self.framework.d() - self.k..self.framework.d()
    }
}
