//! Listing of induced C4/P4 subgraphs, globally and around a node pair.
//!
//! A subgraph is an ordered tuple (u1,u2,u3,u4) where u1u2, u2u3, u3u4 are
//! edges and u1u3, u2u4 are non-edges. The tuple is a C4 exactly when u1u4 is
//! an edge, otherwise a P4. The pair {u1,u4} is the instance's omitted pair:
//! the endpoint pair of a P4, or one cycle edge of a C4. Every P4 is listed
//! once (canonical orientation u1 < u4) and every C4 four times, once per
//! omitted cycle edge.

use std::ops::ControlFlow;

use arrayvec::ArrayVec;

use crate::graph::{scan_row_masked, Graph, NodeId, PairMatrix, VertexPair};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Subgraph {
    pub nodes: [NodeId; 4],
}

impl Subgraph {
    /// Builds the canonical representation: of a tuple and its reverse, the
    /// one starting with the smaller node id. Reversal preserves the edge
    /// pattern and the omitted pair.
    pub fn new(u1: NodeId, u2: NodeId, u3: NodeId, u4: NodeId) -> Self {
        if u1 < u4 {
            Subgraph { nodes: [u1, u2, u3, u4] }
        } else {
            Subgraph { nodes: [u4, u3, u2, u1] }
        }
    }

    #[inline]
    pub fn omitted_pair(&self) -> VertexPair {
        VertexPair::new(self.nodes[0], self.nodes[3])
    }

    #[inline]
    pub fn is_c4(&self, g: &Graph) -> bool {
        g.has_edge(self.nodes[0], self.nodes[3])
    }

    /// The five pairs that carry counters and packing conflicts, in fixed
    /// order: the three path edges, then the two diagonals.
    #[inline]
    pub fn non_omitted_pairs(&self) -> [VertexPair; 5] {
        let [a, b, c, d] = self.nodes;
        [
            VertexPair::new(a, b),
            VertexPair::new(b, c),
            VertexPair::new(c, d),
            VertexPair::new(a, c),
            VertexPair::new(b, d),
        ]
    }

    pub fn all_pairs(&self) -> [VertexPair; 6] {
        let [a, b, c, d] = self.nodes;
        [
            VertexPair::new(a, b),
            VertexPair::new(b, c),
            VertexPair::new(c, d),
            VertexPair::new(a, c),
            VertexPair::new(b, d),
            VertexPair::new(a, d),
        ]
    }

    pub fn contains_pair(&self, p: VertexPair) -> bool {
        self.nodes.contains(&p.u()) && self.nodes.contains(&p.v())
    }

    /// Non-omitted pairs that are not blocked; the branching candidates.
    pub fn editable_pairs(&self, blocked: &PairMatrix) -> ArrayVec<VertexPair, 5> {
        self.non_omitted_pairs()
            .into_iter()
            .filter(|&q| !blocked.get_pair(q))
            .collect()
    }

    /// Checks the full tuple pattern against the current graph.
    pub fn is_induced(&self, g: &Graph) -> bool {
        let [a, b, c, d] = self.nodes;
        a != b
            && a != c
            && a != d
            && b != c
            && b != d
            && c != d
            && g.has_edge(a, b)
            && g.has_edge(b, c)
            && g.has_edge(c, d)
            && !g.has_edge(a, c)
            && !g.has_edge(b, d)
    }
}

/// Row masks for suppressing subgraphs whose non-omitted pairs hit `exclude`.
/// Best-effort during scanning; callers needing exactness re-check.
struct Excluder<'a> {
    m: Option<&'a PairMatrix>,
}

impl<'a> Excluder<'a> {
    #[inline]
    fn pair(&self, p: VertexPair) -> bool {
        self.m.map_or(false, |m| m.get_pair(p))
    }

    #[inline]
    fn push_rows(&self, u: NodeId, v: NodeId, out: &mut ArrayVec<&'a [u64], 4>) {
        if let Some(m) = self.m {
            out.push(m.row(u));
            out.push(m.row(v));
        }
    }
}

/// Visits every induced P4 once and every C4 four times, each C4 instance
/// with a distinct omitted cycle edge. Instances with a non-omitted pair in
/// `exclude` are suppressed where the row masks catch them.
pub fn for_each_global<F>(g: &Graph, exclude: Option<&PairMatrix>, mut f: F) -> ControlFlow<()>
where
    F: FnMut(Subgraph) -> ControlFlow<()>,
{
    let ex = Excluder { m: exclude };
    let mut right: Vec<NodeId> = Vec::new();
    // every directed central edge (u2,u3); the filter u1 < u4 keeps each P4
    // in one orientation and realizes the C4 four-listing
    for u2 in 0..g.n() {
        for u3 in g.neighbors(u2) {
            if ex.pair(VertexPair::new(u2, u3)) {
                continue;
            }
            right.clear();
            {
                let mut not_rows: ArrayVec<&[u64], 4> = ArrayVec::new();
                not_rows.push(g.row(u2));
                ex.push_rows(u2, u3, &mut not_rows);
                for u4 in scan_row_masked(g.row(u3), &[], &not_rows) {
                    if u4 != u2 {
                        right.push(u4);
                    }
                }
            }
            if right.is_empty() {
                continue;
            }
            let mut not_rows: ArrayVec<&[u64], 4> = ArrayVec::new();
            not_rows.push(g.row(u3));
            ex.push_rows(u2, u3, &mut not_rows);
            for u1 in scan_row_masked(g.row(u2), &[], &not_rows) {
                if u1 == u3 {
                    continue;
                }
                for &u4 in &right {
                    if u1 < u4 {
                        f(Subgraph { nodes: [u1, u2, u3, u4] })?;
                    }
                }
            }
        }
    }
    ControlFlow::Continue(())
}

/// Visits all listing instances whose node pairs include `p`.
///
/// Every C4 through `p` yields all four of its instances. A P4 through `p`
/// yields its single instance, except that for a non-edge `p` the position
/// where `p` is the P4's endpoint (omitted) pair is visited only when
/// `include_endpoint` is set. Counter maintenance and branch observation need
/// that position; branching candidate selection does not.
pub fn for_each_near<F>(
    g: &Graph,
    p: VertexPair,
    exclude: Option<&PairMatrix>,
    include_endpoint: bool,
    mut f: F,
) -> ControlFlow<()>
where
    F: FnMut(Subgraph) -> ControlFlow<()>,
{
    let ex = Excluder { m: exclude };
    let (a, b) = (p.u(), p.v());
    if g.has_edge(a, b) {
        // p as the central edge u2u3; one orientation, both end nodes free
        if !ex.pair(p) {
            let mut right: Vec<NodeId> = Vec::new();
            {
                let mut not_rows: ArrayVec<&[u64], 4> = ArrayVec::new();
                not_rows.push(g.row(a));
                ex.push_rows(a, b, &mut not_rows);
                for u4 in scan_row_masked(g.row(b), &[], &not_rows) {
                    if u4 != a {
                        right.push(u4);
                    }
                }
            }
            let mut not_rows: ArrayVec<&[u64], 4> = ArrayVec::new();
            not_rows.push(g.row(b));
            ex.push_rows(a, b, &mut not_rows);
            for u1 in scan_row_masked(g.row(a), &[], &not_rows) {
                if u1 == b {
                    continue;
                }
                for &u4 in &right {
                    f(Subgraph::new(u1, a, b, u4))?;
                }
            }
        }
        // p as the first edge u1u2, both orientations
        for (s, t) in [(a, b), (b, a)] {
            if ex.pair(p) {
                break;
            }
            let mut c_not: ArrayVec<&[u64], 4> = ArrayVec::new();
            c_not.push(g.row(s));
            ex.push_rows(s, t, &mut c_not);
            let cands: Vec<NodeId> = scan_row_masked(g.row(t), &[], &c_not)
                .filter(|&c| c != s)
                .collect();
            for c in cands {
                let mut d_not: ArrayVec<&[u64], 4> = ArrayVec::new();
                d_not.push(g.row(t));
                ex.push_rows(t, c, &mut d_not);
                for d in scan_row_masked(g.row(c), &[], &d_not) {
                    if d != t && d != s {
                        f(Subgraph::new(s, t, c, d))?;
                    }
                }
            }
        }
        // p as the C4 cycle edge u1u4, i.e. the instance omitting p itself
        let mut w_not: ArrayVec<&[u64], 2> = ArrayVec::new();
        w_not.push(g.row(b));
        let w_cands: Vec<NodeId> = scan_row_masked(g.row(a), &[], &w_not)
            .filter(|&w| w != b)
            .collect();
        for w in w_cands {
            let mut x_not: ArrayVec<&[u64], 4> = ArrayVec::new();
            x_not.push(g.row(a));
            ex.push_rows(a, w, &mut x_not);
            for x in scan_row_masked(g.row(b), &[g.row(w)], &x_not) {
                if x != a {
                    f(Subgraph::new(a, w, x, b))?;
                }
            }
        }
    } else {
        // p as a diagonal u1u3 (or u2u4), both orientations
        for (s, t) in [(a, b), (b, a)] {
            let x_cands: Vec<NodeId> =
                scan_row_masked(g.row(s), &[g.row(t)], &[]).collect();
            for x in x_cands {
                if ex.pair(VertexPair::new(s, x)) || ex.pair(VertexPair::new(x, t)) {
                    continue;
                }
                let mut y_not: ArrayVec<&[u64], 4> = ArrayVec::new();
                y_not.push(g.row(x));
                ex.push_rows(t, x, &mut y_not);
                for y in scan_row_masked(g.row(t), &[], &y_not) {
                    if y != x && y != s {
                        f(Subgraph::new(s, x, t, y))?;
                    }
                }
            }
        }
        // p as the P4 endpoint pair {u1,u4}; this instance omits p, so it is
        // only relevant to counter updates and dead-branch detection
        if include_endpoint {
            let w_cands: Vec<NodeId> = scan_row_masked(g.row(a), &[], &[g.row(b)])
                .filter(|&w| w != b)
                .collect();
            for w in w_cands {
                let mut x_not: ArrayVec<&[u64], 4> = ArrayVec::new();
                x_not.push(g.row(a));
                ex.push_rows(a, w, &mut x_not);
                for x in scan_row_masked(g.row(b), &[g.row(w)], &x_not) {
                    if x != a {
                        f(Subgraph::new(a, w, x, b))?;
                    }
                }
            }
        }
    }
    ControlFlow::Continue(())
}

pub fn list_global(g: &Graph, exclude: Option<&PairMatrix>) -> Vec<Subgraph> {
    let mut out = Vec::new();
    let _ = for_each_global(g, exclude, |s| {
        out.push(s);
        ControlFlow::Continue(())
    });
    out
}

pub fn list_near(
    g: &Graph,
    p: VertexPair,
    exclude: Option<&PairMatrix>,
    include_endpoint: bool,
) -> Vec<Subgraph> {
    let mut out = Vec::new();
    let _ = for_each_near(g, p, exclude, include_endpoint, |s| {
        out.push(s);
        ControlFlow::Continue(())
    });
    out
}

/// First subgraph in global listing order, if any.
pub fn first_global(g: &Graph) -> Option<Subgraph> {
    let mut found = None;
    let _ = for_each_global(g, None, |s| {
        found = Some(s);
        ControlFlow::Break(())
    });
    found
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

    fn path4() -> Graph {
        graph_from(4, &[(0, 1), (1, 2), (2, 3)])
    }

    fn cycle4() -> Graph {
        graph_from(4, &[(0, 1), (1, 2), (2, 3), (0, 3)])
    }

    #[test]
    fn path_listed_once_as_p4() {
        let g = path4();
        let subs = list_global(&g, None);
        assert_eq!(subs.len(), 1);
        let s = subs[0];
        assert_eq!(s.nodes, [0, 1, 2, 3]);
        assert!(!s.is_c4(&g));
        assert_eq!(s.omitted_pair(), VertexPair::new(0, 3));
    }

    #[test]
    fn cycle_listed_four_times_with_distinct_omitted_edges() {
        let g = cycle4();
        let subs = list_global(&g, None);
        assert_eq!(subs.len(), 4);
        let mut omitted: Vec<VertexPair> =
            subs.iter().map(|s| s.omitted_pair()).collect();
        omitted.sort();
        omitted.dedup();
        assert_eq!(omitted.len(), 4);
        for s in &subs {
            assert!(s.is_c4(&g));
            assert!(g.has_edge_pair(s.omitted_pair()));
        }
    }

    #[test]
    fn five_node_graph_contains_induced_c4() {
        // a=0 b=1 c=2 d=3 e=4; c adjacent to everything, a-b-d-e-a a cycle
        let g = graph_from(
            5,
            &[(1, 2), (2, 3), (0, 1), (0, 2), (2, 4), (3, 4), (1, 3), (0, 4)],
        );
        let subs = list_global(&g, None);
        assert!(!subs.is_empty());
        for s in &subs {
            assert!(s.is_induced(&g));
            assert!(s.is_c4(&g));
            let mut nodes = s.nodes;
            nodes.sort();
            assert_eq!(nodes, [0, 1, 3, 4]);
        }
        assert_eq!(subs.len(), 4);
    }

    #[test]
    fn quasi_threshold_graph_lists_nothing() {
        // a=0 b=1 c=2 d=3 e=4 f=5
        let g = graph_from(
            6,
            &[(3, 4), (4, 5), (0, 3), (0, 1), (1, 4), (0, 4), (1, 3), (2, 4)],
        );
        assert!(list_global(&g, None).is_empty());
        assert!(first_global(&g).is_none());
    }

    #[test]
    fn near_central_pair() {
        let g = path4();
        let subs = list_near(&g, VertexPair::new(1, 2), None, false);
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].nodes, [0, 1, 2, 3]);
    }

    #[test]
    fn near_endpoint_pair_omitted_unless_requested() {
        let g = path4();
        let p = VertexPair::new(0, 3);
        assert!(list_near(&g, p, None, false).is_empty());
        let with = list_near(&g, p, None, true);
        assert_eq!(with.len(), 1);
        assert_eq!(with[0].nodes, [0, 1, 2, 3]);
    }

    #[test]
    fn near_end_edge_found_by_extension() {
        let g = path4();
        let subs = list_near(&g, VertexPair::new(0, 1), None, false);
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].nodes, [0, 1, 2, 3]);
    }

    #[test]
    fn near_matches_global_on_every_pair() {
        for (n, edges) in [
            (4, vec![(0, 1), (1, 2), (2, 3)]),
            (4, vec![(0, 1), (1, 2), (2, 3), (0, 3)]),
            (
                5,
                vec![(1, 2), (2, 3), (0, 1), (0, 2), (2, 4), (3, 4), (1, 3), (0, 4)],
            ),
            (6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (1, 4)]),
        ] {
            let g = graph_from(n, &edges);
            let global = list_global(&g, None);
            for p in VertexPair::all_pairs(n) {
                let mut want: Vec<Subgraph> = global
                    .iter()
                    .copied()
                    .filter(|s| s.contains_pair(p))
                    .collect();
                let mut got = list_near(&g, p, None, true);
                want.sort();
                got.sort();
                assert_eq!(got, want, "pair {:?} on n={}", p, n);
            }
        }
    }

    #[test]
    fn editable_pairs_excludes_omitted_and_blocked() {
        let g = path4();
        let s = list_global(&g, None)[0];
        let mut blocked = PairMatrix::new(4);
        let pairs = s.editable_pairs(&blocked);
        assert_eq!(pairs.len(), 5);
        assert!(!pairs.contains(&VertexPair::new(0, 3)));
        blocked.set_pair(VertexPair::new(1, 2), true);
        assert_eq!(s.editable_pairs(&blocked).len(), 4);
    }

    #[test]
    fn c4_instance_editable_pairs() {
        let g = cycle4();
        for s in list_global(&g, None) {
            let pairs = s.editable_pairs(&PairMatrix::new(4));
            assert_eq!(pairs.len(), 5);
            assert!(!pairs.contains(&s.omitted_pair()));
        }
    }
}
