//! The (a, b) pebble game for sparsity-matroid independence.
//!
//! Each vertex starts with `a` pebbles; inserting an edge needs `b + 1`
//! pebbles gathered on its endpoints, found by reversing directed paths to
//! free pebbles. Accepted edges are exactly the independent sets of the
//! (a, b)-sparsity matroid. With (a, b) = (2, 3) that is the generic
//! two-dimensional rigidity matroid; with (1, 1) it is the graphic matroid.
//! Only configurations with a <= b < 2a are supported, which keeps both
//! endpoints pebble-saturated at insertion time.

use crate::graph::{EdgeSubset, Graph};

/// Result of feeding a sequence of edges to the game.
#[derive(Debug, Clone)]
pub struct PebbleRun {
    /// Number of accepted edges: the rank of the fed edge set.
    pub rank: usize,
    /// Canonical indices of the accepted edges, in insertion order.
    pub accepted: Vec<usize>,
    /// On the first rejected edge: the vertex set certifying the violation
    /// (every vertex reachable from the rejected edge's endpoints; the fed
    /// edges induced on it exceed the sparsity count).
    pub first_violation: Option<Vec<usize>>,
}

struct PebbleGame {
    b: usize,
    pebbles: Vec<usize>,
    out: Vec<Vec<usize>>,
}

impl PebbleGame {
    fn new(n: usize, a: usize, b: usize) -> Self {
        assert!(a <= b && b < 2 * a, "pebble game needs a <= b < 2a");
        PebbleGame {
            b,
            pebbles: vec![a; n],
            out: vec![Vec::new(); n],
        }
    }

    /// Tries to move one pebble onto `root` by reversing a directed path to
    /// some pebbled vertex, never touching `keep` (the other endpoint).
    fn collect_one(&mut self, root: usize, keep: usize) -> bool {
        let n = self.pebbles.len();
        let mut parent = vec![usize::MAX; n];
        let mut stack = vec![root];
        let mut seen = vec![false; n];
        seen[root] = true;
        seen[keep] = true;
        while let Some(v) = stack.pop() {
            for &w in &self.out[v] {
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                parent[w] = v;
                if self.pebbles[w] > 0 {
                    // Reverse the path root -> … -> w.
                    self.pebbles[w] -= 1;
                    self.pebbles[root] += 1;
                    let mut cur = w;
                    while cur != root {
                        let p = parent[cur];
                        let slot = self.out[p].iter().position(|&x| x == cur).unwrap();
                        self.out[p].swap_remove(slot);
                        self.out[cur].push(p);
                        cur = p;
                    }
                    return true;
                }
                stack.push(w);
            }
        }
        false
    }

    /// Inserts edge (u, v) if independent; false means rejection (the edge is
    /// dependent on the accepted ones).
    fn try_insert(&mut self, u: usize, v: usize) -> bool {
        while self.pebbles[u] + self.pebbles[v] < self.b + 1 {
            let progressed = self.collect_one(u, v) || self.collect_one(v, u);
            if !progressed {
                return false;
            }
        }
        // With a <= b the threshold b+1 > a forces pebbles on both endpoints.
        assert!(self.pebbles[u] > 0, "endpoint lost its pebbles");
        self.pebbles[u] -= 1;
        self.out[u].push(v);
        true
    }

    /// All vertices reachable from {u, v} along directed edges.
    fn reach(&self, u: usize, v: usize) -> Vec<usize> {
        let n = self.pebbles.len();
        let mut seen = vec![false; n];
        let mut stack = vec![u, v];
        seen[u] = true;
        seen[v] = true;
        while let Some(x) = stack.pop() {
            for &w in &self.out[x] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        (0..n).filter(|&x| seen[x]).collect()
    }
}

/// Plays the (a, b) game over the selected edges of `g` in canonical order.
/// `filter = None` means all edges.
pub fn pebble_game_run(g: &Graph, a: usize, b: usize, filter: Option<&EdgeSubset>) -> PebbleRun {
    let mut game = PebbleGame::new(g.n(), a, b);
    let mut accepted = Vec::new();
    let mut first_violation = None;
    for (idx, &(u, v)) in g.edges().iter().enumerate() {
        if let Some(f) = filter {
            if !f.contains(idx) {
                continue;
            }
        }
        if game.try_insert(u, v) {
            accepted.push(idx);
        } else if first_violation.is_none() {
            first_violation = Some(game.reach(u, v));
        }
    }
    PebbleRun {
        rank: accepted.len(),
        accepted,
        first_violation,
    }
}
