//! Per-pair counters of listed forbidden subgraphs, maintained incrementally
//! under edits and pair blocking.
//!
//! Under the listing convention a P4 contributes 1 to each of its five
//! non-omitted pairs; the four listings of a C4 together contribute 3 to each
//! cycle edge and 4 to each diagonal. `total` is the sum over all non-blocked
//! pairs, so `total == 0` means no forbidden subgraph has an editable pair
//! left, which for an unblocked graph means it is quasi-threshold.

use std::ops::ControlFlow;

use crate::graph::{Graph, PairMatrix, VertexPair};
use crate::subgraph::for_each_near;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairCounters {
    counts: Vec<u32>,
    total: u64,
    saved: Vec<(VertexPair, u32)>,
}

impl PairCounters {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut c = PairCounters {
            counts: vec![0; n * (n - 1) / 2],
            total: 0,
            saved: Vec::new(),
        };
        let _ = crate::subgraph::for_each_global(g, None, |s| {
            for q in s.non_omitted_pairs() {
                c.counts[q.tri_index()] += 1;
            }
            c.total += 5;
            ControlFlow::Continue(())
        });
        c
    }

    #[inline]
    pub fn count(&self, p: VertexPair) -> u32 {
        self.counts[p.tri_index()]
    }

    #[inline]
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Zeroes the counter of `p` (it no longer participates in totals or
    /// branching) and remembers the value for the matching unblock.
    pub fn block(&mut self, p: VertexPair) {
        let idx = p.tri_index();
        let prev = self.counts[idx];
        self.saved.push((p, prev));
        self.counts[idx] = 0;
        self.total -= u64::from(prev);
    }

    /// Restores the most recently blocked pair; strict stack discipline.
    pub fn unblock(&mut self, p: VertexPair) {
        let (q, prev) = self.saved.pop().expect("unblock without matching block");
        assert_eq!(q, p, "unblock order must mirror block order");
        self.counts[p.tri_index()] = prev;
        self.total += u64::from(prev);
    }

    /// Updates counters for an edit of `p`. The graph must already reflect
    /// the new adjacency; it is briefly toggled back to enumerate the
    /// destroyed subgraphs and restored before returning.
    pub fn apply_edit(&mut self, g: &mut Graph, p: VertexPair, blocked: &PairMatrix) {
        g.toggle_edge(p);
        self.shift_near(g, p, blocked, -1);
        g.toggle_edge(p);
        self.shift_near(g, p, blocked, 1);
    }

    fn shift_near(&mut self, g: &Graph, p: VertexPair, blocked: &PairMatrix, delta: i64) {
        let _ = for_each_near(g, p, None, true, |s| {
            for q in s.non_omitted_pairs() {
                if blocked.get_pair(q) {
                    // keep the saved snapshot in sync so that the value put
                    // back on unblock matches the then-current graph
                    let slot = self
                        .saved
                        .iter_mut()
                        .rev()
                        .find(|(b, _)| *b == q)
                        .expect("blocked pair missing from save stack");
                    slot.1 = (i64::from(slot.1) + delta) as u32;
                } else {
                    let idx = q.tri_index();
                    self.counts[idx] = (i64::from(self.counts[idx]) + delta) as u32;
                    self.total = (self.total as i64 + delta) as u64;
                }
            }
            ControlFlow::Continue(())
        });
    }

    /// Rebuilds counters from scratch for the given graph and block stack and
    /// compares with the incremental state. Debug audit.
    pub fn matches_recompute(&self, g: &Graph, blocked: &PairMatrix) -> bool {
        let mut fresh = PairCounters::new(g);
        for &(p, _) in &self.saved {
            if !blocked.get_pair(p) {
                return false;
            }
            fresh.block(p);
        }
        fresh == *self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn graph_from(n: usize, edges: &[(usize, usize)]) -> Graph {
        let mut g = Graph::new(n).unwrap();
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    #[test]
    fn p4_counts() {
        let g = graph_from(4, &[(0, 1), (1, 2), (2, 3)]);
        let c = PairCounters::new(&g);
        assert_eq!(c.total(), 5);
        assert_eq!(c.count(VertexPair::new(0, 3)), 0);
        for q in [(0, 1), (1, 2), (2, 3), (0, 2), (1, 3)] {
            assert_eq!(c.count(VertexPair::new(q.0, q.1)), 1);
        }
    }

    #[test]
    fn c4_counts_three_on_edges_four_on_diagonals() {
        let g = graph_from(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]);
        let c = PairCounters::new(&g);
        assert_eq!(c.total(), 20);
        for e in [(0, 1), (1, 2), (2, 3), (0, 3)] {
            assert_eq!(c.count(VertexPair::new(e.0, e.1)), 3);
        }
        for d in [(0, 2), (1, 3)] {
            assert_eq!(c.count(VertexPair::new(d.0, d.1)), 4);
        }
    }

    #[test]
    fn quasi_threshold_totals_zero() {
        let g = graph_from(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(PairCounters::new(&g).total(), 0);
    }

    #[test]
    fn edit_drops_total() {
        let mut g = graph_from(4, &[(0, 1), (1, 2), (2, 3)]);
        let blocked = PairMatrix::new(4);
        let mut c = PairCounters::new(&g);
        let p = VertexPair::new(1, 2);
        g.toggle_edge(p);
        c.apply_edit(&mut g, p, &blocked);
        assert_eq!(c.total(), 0);
        assert!(c.matches_recompute(&g, &blocked));
    }

    #[test]
    fn block_unblock_roundtrip() {
        let g = graph_from(4, &[(0, 1), (1, 2), (2, 3)]);
        let mut c = PairCounters::new(&g);
        let before = c.clone();
        let p = VertexPair::new(0, 1);
        c.block(p);
        assert_eq!(c.count(p), 0);
        assert_eq!(c.total(), 4);
        c.unblock(p);
        assert_eq!(c, before);
    }

    #[test]
    fn random_toggle_block_sequences_match_recompute() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(4..8);
            let mut g = Graph::new(n).unwrap();
            for p in VertexPair::all_pairs(n) {
                if rng.gen_bool(0.5) {
                    g.add_edge(p.u(), p.v());
                }
            }
            let mut blocked = PairMatrix::new(n);
            let mut c = PairCounters::new(&g);
            let mut stack: Vec<VertexPair> = Vec::new();
            for _ in 0..30 {
                let choice = rng.gen_range(0..3);
                if choice == 0 {
                    let p = random_pair(&mut rng, n);
                    g.toggle_edge(p);
                    c.apply_edit(&mut g, p, &blocked);
                } else if choice == 1 {
                    let p = random_pair(&mut rng, n);
                    if !blocked.get_pair(p) {
                        blocked.set_pair(p, true);
                        c.block(p);
                        stack.push(p);
                    }
                } else if let Some(p) = stack.pop() {
                    c.unblock(p);
                    blocked.set_pair(p, false);
                }
                assert!(c.matches_recompute(&g, &blocked));
            }
        }
    }

    fn random_pair(rng: &mut impl rand::Rng, n: usize) -> VertexPair {
        loop {
            let u = rng.gen_range(0..n);
            let v = rng.gen_range(0..n);
            if u != v {
                return VertexPair::new(u, v);
            }
        }
    }
}
