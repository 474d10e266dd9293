//! Bit-matrix graph and node-pair-matrix storage.
//!
//! The adjacency matrix uses one bit per node pair, stored per row in 64-bit
//! words so that neighborhood combinations (`A[u,:] & !A[x,:]` etc.) reduce to
//! word-wise logic plus trailing-zero scans.

use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    Empty,
    #[error("graph with {0} nodes exceeds the bit-matrix size limit ({1})")]
    TooLarge(usize, usize),
}

/// Hard cap for the n^2-bit representation; larger inputs are rejected up
/// front instead of thrashing memory.
pub const MAX_NODES: usize = 16_384;

/// Unordered node pair, stored canonically with `u < v`.
#[derive(
    Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize, serde::Deserialize,
)]
pub struct VertexPair {
    u: NodeId,
    v: NodeId,
}

impl VertexPair {
    pub fn new(a: NodeId, b: NodeId) -> Self {
        assert_ne!(a, b, "node pair must consist of two distinct nodes");
        if a < b {
            VertexPair { u: a, v: b }
        } else {
            VertexPair { u: b, v: a }
        }
    }

    #[inline]
    pub fn u(&self) -> NodeId {
        self.u
    }

    #[inline]
    pub fn v(&self) -> NodeId {
        self.v
    }

    /// Dense index into a strict upper-triangle array.
    #[inline]
    pub fn tri_index(&self) -> usize {
        self.v * (self.v - 1) / 2 + self.u
    }

    pub fn all_pairs(n: usize) -> impl Iterator<Item = VertexPair> {
        (1..n).flat_map(move |v| (0..v).map(move |u| VertexPair { u, v }))
    }
}

#[derive(
    Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum EditKind {
    Insertion,
    Deletion,
}

/// A single applied edge modification.
#[derive(
    Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize, serde::Deserialize,
)]
pub struct Edit {
    pub pair: VertexPair,
    pub kind: EditKind,
}

/// Symmetric n x n bit matrix over node pairs with a zero diagonal.
///
/// Used both for blocked pairs and for the pair sets covered by packings.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairMatrix {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl PairMatrix {
    pub fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        PairMatrix {
            n,
            words_per_row,
            bits: vec![0; n * words_per_row],
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn row(&self, u: NodeId) -> &[u64] {
        &self.bits[u * self.words_per_row..(u + 1) * self.words_per_row]
    }

    #[inline]
    pub fn get(&self, u: NodeId, v: NodeId) -> bool {
        self.bits[u * self.words_per_row + v / 64] >> (v % 64) & 1 != 0
    }

    #[inline]
    pub fn get_pair(&self, p: VertexPair) -> bool {
        self.get(p.u, p.v)
    }

    pub fn set_pair(&mut self, p: VertexPair, value: bool) {
        for (a, b) in [(p.u, p.v), (p.v, p.u)] {
            let w = a * self.words_per_row + b / 64;
            let mask = 1u64 << (b % 64);
            if value {
                self.bits[w] |= mask;
            } else {
                self.bits[w] &= !mask;
            }
        }
    }

    pub fn clear_all(&mut self) {
        self.bits.fill(0);
    }

    pub fn count_pairs(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }
}

/// Undirected simple graph as a symmetric bit matrix with cached edge count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Graph {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        if n > MAX_NODES {
            return Err(GraphError::TooLarge(n, MAX_NODES));
        }
        let words_per_row = n.div_ceil(64);
        Ok(Graph {
            n,
            words_per_row,
            bits: vec![0; n * words_per_row],
            m: 0,
        })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn row(&self, u: NodeId) -> &[u64] {
        &self.bits[u * self.words_per_row..(u + 1) * self.words_per_row]
    }

    #[inline]
    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.bits[u * self.words_per_row + v / 64] >> (v % 64) & 1 != 0
    }

    #[inline]
    pub fn has_edge_pair(&self, p: VertexPair) -> bool {
        self.has_edge(p.u, p.v)
    }

    /// Flips the adjacency of `p` symmetrically and returns the edit performed.
    /// Applying the same pair twice restores the graph bit for bit.
    pub fn toggle_edge(&mut self, p: VertexPair) -> Edit {
        let kind = if self.has_edge(p.u, p.v) {
            self.m -= 1;
            EditKind::Deletion
        } else {
            self.m += 1;
            EditKind::Insertion
        };
        for (a, b) in [(p.u, p.v), (p.v, p.u)] {
            self.bits[a * self.words_per_row + b / 64] ^= 1u64 << (b % 64);
        }
        Edit { pair: p, kind }
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId) {
        let p = VertexPair::new(u, v);
        if !self.has_edge_pair(p) {
            self.toggle_edge(p);
        }
    }

    pub fn neighbors(&self, u: NodeId) -> MaskedScan<'_> {
        scan_row_masked(self.row(u), &[], &[])
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Recounts edges from the bit matrix; the cached `m` must always agree.
    pub fn recount_edges(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    /// Checks symmetry, zero diagonal, zero padding and the edge-count cache.
    pub fn check_invariants(&self) -> bool {
        for u in 0..self.n {
            if self.has_edge(u, u) {
                return false;
            }
            for v in 0..self.n {
                if self.has_edge(u, v) != self.has_edge(v, u) {
                    return false;
                }
            }
            // padding bits beyond n must stay zero
            let last = self.row(u)[self.words_per_row - 1];
            if self.n % 64 != 0 && last >> (self.n % 64) != 0 {
                return false;
            }
        }
        self.m == self.recount_edges()
    }

    /// Relabels nodes by a uniformly random permutation drawn from a seeded
    /// generator. Seed 0 is reserved for the identity mapping. Returns the
    /// permuted graph together with `mapping[old] = new`.
    pub fn permute_nodes(&self, seed: u64) -> (Graph, Vec<NodeId>) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;

        let mut mapping: Vec<NodeId> = (0..self.n).collect();
        if seed != 0 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            mapping.shuffle(&mut rng);
        }
        let mut g = Graph::new(self.n).expect("same size as a valid graph");
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if u < v {
                    g.add_edge(mapping[u], mapping[v]);
                }
            }
        }
        (g, mapping)
    }
}

/// Iterator over the set bits of `base & AND(and) & AND(!and_not)`,
/// in ascending index order.
pub struct MaskedScan<'a> {
    base: &'a [u64],
    and: &'a [&'a [u64]],
    and_not: &'a [&'a [u64]],
    word_index: usize,
    current: u64,
}

impl<'a> MaskedScan<'a> {
    #[inline]
    fn combined(&self, i: usize) -> u64 {
        let mut w = self.base[i];
        for r in self.and {
            w &= r[i];
        }
        for r in self.and_not {
            w &= !r[i];
        }
        w
    }
}

impl<'a> Iterator for MaskedScan<'a> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_index * 64 + bit);
            }
            self.word_index += 1;
            if self.word_index >= self.base.len() {
                return None;
            }
            self.current = self.combined(self.word_index);
        }
    }
}

/// Word-level scan over a row combined with AND / AND-NOT masks.
/// The base row's own diagonal bit is zero by the graph invariants, so the
/// scan never yields the row's base node.
pub fn scan_row_masked<'a>(
    base: &'a [u64],
    and: &'a [&'a [u64]],
    and_not: &'a [&'a [u64]],
) -> MaskedScan<'a> {
    debug_assert!(and.iter().chain(and_not).all(|r| r.len() == base.len()));
    let mut scan = MaskedScan {
        base,
        and,
        and_not,
        word_index: 0,
        current: 0,
    };
    if !base.is_empty() {
        scan.current = scan.combined(0);
    }
    scan
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn path_graph(n: usize) -> Graph {
        let mut g = Graph::new(n).unwrap();
        for i in 0..n - 1 {
            g.add_edge(i, i + 1);
        }
        g
    }

    #[test]
    fn new_graph_rejects_zero_nodes() {
        assert_eq!(Graph::new(0).unwrap_err(), GraphError::Empty);
        assert_eq!(Graph::new(1).unwrap().n(), 1);
        assert_eq!(Graph::new(4).unwrap().m(), 0);
    }

    #[test]
    fn toggle_is_involution() {
        let mut g = path_graph(4);
        let orig = g.clone();
        let p = VertexPair::new(0, 1);
        let e = g.toggle_edge(p);
        assert_eq!(e.kind, EditKind::Deletion);
        assert_eq!(g.m(), 2);
        let e2 = g.toggle_edge(p);
        assert_eq!(e2.kind, EditKind::Insertion);
        assert_eq!(g, orig);
    }

    #[test]
    fn toggle_on_non_edge_inserts() {
        let mut g = Graph::new(4).unwrap();
        let e = g.toggle_edge(VertexPair::new(0, 1));
        assert_eq!(e.kind, EditKind::Insertion);
        assert_eq!(g.m(), 1);
    }

    #[test]
    fn deleting_middle_edge_splits_path() {
        let mut g = path_graph(4);
        g.toggle_edge(VertexPair::new(1, 2));
        assert!(g.has_edge(0, 1));
        assert!(g.has_edge(2, 3));
        assert!(!g.has_edge(1, 2));
        assert_eq!(g.m(), 2);
    }

    #[test]
    fn scan_matches_naive_bit_loop() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 3, 63, 64, 65, 130, 200] {
            let mut g = Graph::new(n).unwrap();
            for v in 1..n {
                for u in 0..v {
                    if rng.gen_bool(0.3) {
                        g.add_edge(u, v);
                    }
                }
            }
            assert!(g.check_invariants());
            for u in 0..n.min(20) {
                let x = (u + 1) % n;
                let got: Vec<usize> =
                    scan_row_masked(g.row(u), &[], &[g.row(x)]).collect();
                let want: Vec<usize> = (0..n)
                    .filter(|&w| g.has_edge(u, w) && !g.has_edge(x, w))
                    .collect();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn scan_examples() {
        let g = path_graph(4);
        // neighbors of 1 that are not neighbors of 0
        let s: Vec<usize> = scan_row_masked(g.row(1), &[], &[g.row(0)]).collect();
        assert_eq!(s, vec![0, 2]);
        // plain neighbor scan
        let s: Vec<usize> = g.neighbors(1).collect();
        assert_eq!(s, vec![0, 2]);
        // common neighbors of the C4 diagonal 0-2
        let mut c4 = path_graph(4);
        c4.add_edge(0, 3);
        let s: Vec<usize> = scan_row_masked(c4.row(0), &[c4.row(2)], &[]).collect();
        assert_eq!(s, vec![1, 3]);
    }

    #[test]
    fn permutation_preserves_size_and_identity_seed() {
        let g = path_graph(5);
        let (pg, mapping) = g.permute_nodes(0);
        assert_eq!(mapping, vec![0, 1, 2, 3, 4]);
        assert_eq!(pg, g);
        let (pg, mapping) = g.permute_nodes(42);
        assert_eq!(pg.n(), 5);
        assert_eq!(pg.m(), 4);
        for u in 0..5 {
            for v in 0..5 {
                if u != v {
                    assert_eq!(g.has_edge(u, v), pg.has_edge(mapping[u], mapping[v]));
                }
            }
        }
    }

    #[test]
    fn pair_matrix_roundtrip() {
        let mut m = PairMatrix::new(10);
        let p = VertexPair::new(3, 7);
        assert!(!m.get_pair(p));
        m.set_pair(p, true);
        assert!(m.get(3, 7));
        assert!(m.get(7, 3));
        assert_eq!(m.count_pairs(), 1);
        m.set_pair(p, false);
        assert_eq!(m.count_pairs(), 0);
    }
}
