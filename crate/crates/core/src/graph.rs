//! Finite simple graphs with a canonical edge order.
//!
//! Vertices are `0..n`. Edges are stored as pairs `(u, v)` with `u < v`,
//! sorted lexicographically; every matrix row order and every edge bitset in
//! the crate refers to this canonical order. Constructors normalize and
//! validate, so a `Graph` value is canonical by construction.

use std::collections::VecDeque;

use thiserror::Error;

/// Errors from graph construction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) out of range for {2} vertices")]
    VertexOutOfRange(usize, usize, usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph has {0} edges; edge subsets support at most 64")]
    TooManyEdges(usize),
}

/// A simple undirected graph on vertices `0..n` with canonically ordered edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, normalizing each pair to `(min, max)` and sorting.
    /// Rejects loops, out-of-range endpoints and duplicate edges.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut norm: Vec<(usize, usize)> = Vec::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::Loop(a));
            }
            let (u, v) = (a.min(b), a.max(b));
            if v >= n {
                return Err(GraphError::VertexOutOfRange(a, b, n));
            }
            norm.push((u, v));
        }
        norm.sort_unstable();
        for w in norm.windows(2) {
            if w[0] == w[1] {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        Ok(Graph { n, edges: norm })
    }

    /// The complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph { n, edges }
    }

    /// The cycle `0-1-…-(n-1)-0`. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((0, n - 1));
        Graph::new(n, edges).expect("cycle is simple")
    }

    /// The path `0-1-…-(n-1)`.
    pub fn path(n: usize) -> Self {
        Graph {
            n,
            edges: (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Canonical index of edge `{u, v}`, if present.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_index(u, v).is_some()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Neighbor lists for all vertices.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &(a, b) in &self.edges {
            if a == v {
                out.push(b);
            } else if b == v {
                out.push(a);
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        self.edges.len() == self.n * self.n.saturating_sub(1) / 2
    }

    /// True iff the graph is connected (single vertices count as connected;
    /// the empty graph on 0 vertices does too).
    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// Number of connected components among `0..n`.
    pub fn component_count(&self) -> usize {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut comps = 0;
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            comps += 1;
            let mut queue = VecDeque::from([s]);
            seen[s] = true;
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        comps
    }

    /// Copy with one extra edge.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        let mut edges = self.edges.clone();
        edges.push((u, v));
        Graph::new(self.n, edges)
    }

    /// Copy without the edge of canonical index `idx`.
    pub fn without_edge_index(&self, idx: usize) -> Self {
        let mut edges = self.edges.clone();
        edges.remove(idx);
        Graph { n: self.n, edges }
    }

    /// Copy without the edges selected by `subset`.
    pub fn without_edges(&self, subset: &EdgeSubset) -> Self {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !subset.contains(*i))
            .map(|(_, &e)| e)
            .collect();
        Graph { n: self.n, edges }
    }

    /// Copy keeping only the edges selected by `subset`.
    pub fn edge_subgraph(&self, subset: &EdgeSubset) -> Self {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| subset.contains(*i))
            .map(|(_, &e)| e)
            .collect();
        Graph { n: self.n, edges }
    }

    /// Adjacency rows as bitmasks (vertex `v`'s row has bit `w` set iff `vw` is
    /// an edge). Requires `n <= 16`.
    pub fn adjacency_bits(&self) -> Vec<u16> {
        assert!(self.n <= 16, "bitmask adjacency supports at most 16 vertices");
        let mut rows = vec![0u16; self.n];
        for &(u, v) in &self.edges {
            rows[u] |= 1 << v;
            rows[v] |= 1 << u;
        }
        rows
    }
}

/// A subset of a graph's edges, as a bitset over canonical edge indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EdgeSubset(pub u64);

impl EdgeSubset {
    pub fn empty() -> Self {
        EdgeSubset(0)
    }

    /// All edges of a graph with `m` edges. Errors beyond 64 edges.
    pub fn full(m: usize) -> Result<Self, GraphError> {
        if m > 64 {
            return Err(GraphError::TooManyEdges(m));
        }
        if m == 64 {
            Ok(EdgeSubset(u64::MAX))
        } else {
            Ok(EdgeSubset((1u64 << m) - 1))
        }
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        let mut bits = 0u64;
        for &i in indices {
            assert!(i < 64, "edge index {i} out of bitset range");
            bits |= 1 << i;
        }
        EdgeSubset(bits)
    }

    pub fn contains(&self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < 64, "edge index {i} out of bitset range");
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        if i < 64 {
            self.0 &= !(1 << i);
        }
    }

    pub fn count(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(&self, other: &EdgeSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(&self, other: &EdgeSubset) -> EdgeSubset {
        EdgeSubset(self.0 | other.0)
    }

    pub fn intersection(&self, other: &EdgeSubset) -> EdgeSubset {
        EdgeSubset(self.0 & other.0)
    }

    /// Indices of the selected edges, increasing.
    pub fn indices(&self) -> Vec<usize> {
        (0..64).filter(|&i| self.contains(i)).collect()
    }

    /// All `2^m` subsets of `0..m`, in increasing bit-pattern order.
    /// Requires `m < 64` (enumeration of all subsets of 64 edges is absurd).
    pub fn all_subsets(m: usize) -> impl Iterator<Item = EdgeSubset> {
        assert!(m < 64);
        (0u64..1 << m).map(EdgeSubset)
    }
}
