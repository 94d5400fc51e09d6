//! Decision results that carry how they were decided and why.

use serde::Serialize;

/// How a yes/no rigidity question was decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Purely graph-theoretic reasoning (counts, connectivity, pebble game).
    Combinatorial,
    /// Exact rank of a matrix at sampled generic realizations.
    GenericRank,
    /// Exact rank of a matrix at the realization supplied by the caller.
    ExactRank,
    /// The complete-graph special case (affine span of the points).
    CompleteClause,
}

/// Optional evidence attached to a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A subgraph given by its edge list (e.g. a spanning rigid subgraph).
    Subgraph { edges: Vec<(usize, usize)> },
    /// A set of vertices whose removal disconnects the graph.
    Separator { vertices: Vec<usize> },
    /// A subgraph violating a sparsity count: `|edges| > a*|vertices| - b`.
    SparsityViolation {
        vertices: Vec<usize>,
        edge_count: usize,
        bound: i64,
    },
    /// A computed rank against the rank required for a yes answer.
    Rank { computed: usize, required: usize },
    /// An edge count against the count required for a yes answer.
    EdgeCount { computed: usize, required: usize },
}

/// A yes/no answer with the deciding method and optional evidence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub answer: bool,
    pub method: Method,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn new(answer: bool, method: Method) -> Self {
        Verdict {
            answer,
            method,
            witness: None,
        }
    }

    pub fn with_witness(answer: bool, method: Method, witness: Witness) -> Self {
        Verdict {
            answer,
            method,
            witness: Some(witness),
        }
    }
}
