//! Isomorphism-free enumeration of small graphs, canonical labelings, and
//! graph6 encoding.
//!
//! The canonical form of a graph is the lexicographically smallest
//! upper-triangle adjacency bit string over all vertex relabelings, in the
//! same column-major bit order that graph6 uses — so the canonical labeling
//! also minimizes the graph6 string. Found by backtracking over label
//! positions with prefix pruning, which is comfortably fast to n = 10.
//!
//! Enumeration is level-wise: all isomorphism classes on n vertices arise by
//! adding one vertex with every possible neighborhood to every class on n-1
//! vertices, deduplicating by canonical form.

use std::collections::HashSet;

use crate::graph::Graph;

/// Upper bound for canonical-form search; the u64 bit packing allows 11.
const MAX_CANON_VERTICES: usize = 11;

/// Upper-triangle adjacency bits of `g` under the identity labeling,
/// column-major (pairs (0,1), (0,2), (1,2), (0,3), …), packed so that earlier
/// pairs occupy more significant bits.
fn upper_triangle_bits(g: &Graph) -> u64 {
    let n = g.n();
    assert!(n <= MAX_CANON_VERTICES);
    let total = n * (n - 1) / 2;
    let mut bits = 0u64;
    let mut pos = 0;
    for j in 1..n {
        for i in 0..j {
            if g.has_edge(i, j) {
                bits |= 1 << (total - 1 - pos);
            }
            pos += 1;
        }
    }
    bits
}

struct CanonSearch {
    n: usize,
    adj: Vec<u16>,
    total_bits: usize,
    best: u64,
    perm: Vec<usize>,
    used: u16,
}

impl CanonSearch {
    /// Extends the partial labeling at `depth` with accumulated prefix value
    /// `prefix` over `prefix_bits` bits.
    fn descend(&mut self, depth: usize, prefix: u64, prefix_bits: usize) {
        if depth == self.n {
            if prefix < self.best {
                self.best = prefix;
            }
            return;
        }
        for v in 0..self.n {
            if self.used >> v & 1 == 1 {
                continue;
            }
            // Column bits for placing original vertex v at position `depth`:
            // adjacency to the vertices already placed, in position order.
            let mut col = 0u64;
            for (pos, &w) in self.perm[..depth].iter().enumerate() {
                if self.adj[v] >> w & 1 == 1 {
                    col |= 1 << (depth - 1 - pos);
                }
            }
            let new_bits = prefix_bits + depth;
            let new_prefix = (prefix << depth) | col;
            // Compare against the best value's prefix of the same length.
            if new_prefix > self.best >> (self.total_bits - new_bits) {
                continue;
            }
            self.perm[depth] = v;
            self.used |= 1 << v;
            self.descend(depth + 1, new_prefix, new_bits);
            self.used &= !(1 << v);
        }
    }
}

/// Canonical form of `g`: the minimal upper-triangle bit string over all
/// labelings. Isomorphism-invariant; equal bits (with equal n) mean
/// isomorphic graphs.
pub fn canonical_bits(g: &Graph) -> u64 {
    let n = g.n();
    assert!(n <= MAX_CANON_VERTICES, "canonical form supports at most {MAX_CANON_VERTICES} vertices");
    if n <= 1 {
        return 0;
    }
    let mut search = CanonSearch {
        n,
        adj: g.adjacency_bits(),
        total_bits: n * (n - 1) / 2,
        best: upper_triangle_bits(g),
        perm: vec![0; n],
        used: 0,
    };
    search.descend(0, 0, 0);
    search.best
}

/// `g` relabeled into its canonical form.
pub fn canonical_graph(g: &Graph) -> Graph {
    graph_from_bits(g.n(), canonical_bits(g))
}

/// Rebuilds a graph from column-major upper-triangle bits.
pub fn graph_from_bits(n: usize, bits: u64) -> Graph {
    let total = if n < 2 { 0 } else { n * (n - 1) / 2 };
    let mut edges = Vec::new();
    let mut pos = 0;
    for j in 1..n {
        for i in 0..j {
            if bits >> (total - 1 - pos) & 1 == 1 {
                edges.push((i, j));
            }
            pos += 1;
        }
    }
    Graph::new(n, edges).expect("bit string encodes a simple graph")
}

/// The graph6 string of `g` under its current labeling (n <= 62).
pub fn graph6_string(g: &Graph) -> String {
    let n = g.n();
    assert!(n <= 62, "single-byte graph6 sizes only");
    let mut out = String::new();
    out.push((n as u8 + 63) as char);
    let total = if n < 2 { 0 } else { n * (n - 1) / 2 };
    let bits = upper_triangle_bits(g);
    let groups = total.div_ceil(6);
    for group in 0..groups {
        let mut value = 0u8;
        for offset in 0..6 {
            let pos = group * 6 + offset;
            value <<= 1;
            if pos < total && bits >> (total - 1 - pos) & 1 == 1 {
                value |= 1;
            }
        }
        out.push((value + 63) as char);
    }
    out
}

/// The graph6 string of the canonical labeling: equal strings iff isomorphic.
pub fn canonical_graph6(g: &Graph) -> String {
    graph6_string(&canonical_graph(g))
}

/// All isomorphism classes of graphs on exactly `n` vertices, as canonical
/// representatives, ordered by canonical bits.
pub fn enumerate_graphs(n: usize) -> Vec<Graph> {
    assert!((1..=MAX_CANON_VERTICES).contains(&n));
    let mut level: Vec<u64> = vec![0]; // the single graph on one vertex
    for size in 2..=n {
        let mut next: HashSet<u64> = HashSet::new();
        for &bits in &level {
            let h = graph_from_bits(size - 1, bits);
            for neighborhood in 0u32..1 << (size - 1) {
                let mut edges: Vec<(usize, usize)> = h.edges().to_vec();
                for v in 0..size - 1 {
                    if neighborhood >> v & 1 == 1 {
                        edges.push((v, size - 1));
                    }
                }
                let g = Graph::new(size, edges).expect("extension stays simple");
                next.insert(canonical_bits(&g));
            }
        }
        let mut sorted: Vec<u64> = next.into_iter().collect();
        sorted.sort_unstable();
        level = sorted;
    }
    level.into_iter().map(|bits| graph_from_bits(n, bits)).collect()
}

/// The connected isomorphism classes on exactly `n` vertices.
pub fn enumerate_connected_graphs(n: usize) -> Vec<Graph> {
    enumerate_graphs(n)
        .into_iter()
        .filter(Graph::is_connected)
        .collect()
}
