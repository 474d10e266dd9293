//! Branch selection: which forbidden subgraph to destroy next and in which
//! order to try its node pairs.

use std::ops::ControlFlow;

use crate::counters::PairCounters;
use crate::graph::{Graph, PairMatrix, VertexPair};
use crate::subgraph::{first_global, for_each_near, Subgraph};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BranchKind {
    First,
    Most,
    MostPruned,
}

/// Call-state tracking consequences of recent blocks and edits: subgraphs
/// down to one editable pair are forced, and a subgraph with none left kills
/// the whole branch.
#[derive(Clone, Debug, Default)]
pub struct BranchState {
    forced: Vec<Subgraph>,
    dead: bool,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BranchDecision {
    Solved,
    Prune,
    Pairs(Vec<VertexPair>),
}

impl BranchState {
    pub fn new() -> Self {
        BranchState::default()
    }

    #[inline]
    pub fn is_dead(&self) -> bool {
        self.dead
    }

    /// Registers the consequences of editing or blocking `p`. Must see every
    /// subgraph through `p` including P4-endpoint positions, otherwise a
    /// dead branch can go unnoticed.
    pub fn observe_pair(&mut self, g: &Graph, p: VertexPair, blocked: &PairMatrix) {
        if self.dead {
            return;
        }
        let _ = for_each_near(g, p, None, true, |s| {
            match s.editable_pairs(blocked).len() {
                0 => {
                    self.dead = true;
                    ControlFlow::Break(())
                }
                1 => {
                    self.forced.push(s);
                    ControlFlow::Continue(())
                }
                _ => ControlFlow::Continue(()),
            }
        });
    }

    /// Pops forced entries until one is still induced with exactly one
    /// editable pair. Entries whose constraint lapsed are dropped; one that
    /// tightened to zero pairs marks the branch dead.
    fn take_forced(&mut self, g: &Graph, blocked: &PairMatrix) -> Option<(Subgraph, VertexPair)> {
        while let Some(s) = self.forced.pop() {
            if !s.is_induced(g) {
                continue;
            }
            let pairs = s.editable_pairs(blocked);
            match pairs.len() {
                0 => {
                    self.dead = true;
                    return None;
                }
                1 => return Some((s, pairs[0])),
                _ => {}
            }
        }
        None
    }
}

pub fn select(
    g: &Graph,
    counters: &PairCounters,
    bs: &mut BranchState,
    blocked: &PairMatrix,
    kind: BranchKind,
    include_conversion: bool,
) -> BranchDecision {
    if bs.is_dead() {
        return BranchDecision::Prune;
    }
    if counters.total() == 0 {
        return BranchDecision::Solved;
    }
    if let Some((s, p)) = bs.take_forced(g, blocked) {
        let mut pairs = vec![p];
        maybe_push_omitted(&mut pairs, &s, blocked, include_conversion);
        return BranchDecision::Pairs(pairs);
    }
    if bs.is_dead() {
        return BranchDecision::Prune;
    }
    match kind {
        BranchKind::First => select_first(g, bs, blocked, include_conversion),
        BranchKind::Most | BranchKind::MostPruned => {
            select_most(g, counters, bs, blocked, include_conversion)
        }
    }
}

fn maybe_push_omitted(
    pairs: &mut Vec<VertexPair>,
    s: &Subgraph,
    blocked: &PairMatrix,
    include_conversion: bool,
) {
    if include_conversion {
        let o = s.omitted_pair();
        if !blocked.get_pair(o) {
            pairs.push(o);
        }
    }
}

fn select_first(
    g: &Graph,
    bs: &mut BranchState,
    blocked: &PairMatrix,
    include_conversion: bool,
) -> BranchDecision {
    // counters total > 0 guarantees a subgraph exists
    let s = first_global(g).expect("total > 0 implies a forbidden subgraph");
    let pairs = s.editable_pairs(blocked);
    if pairs.is_empty() {
        bs.dead = true;
        return BranchDecision::Prune;
    }
    let mut pairs: Vec<VertexPair> = pairs.into_iter().collect();
    maybe_push_omitted(&mut pairs, &s, blocked, include_conversion);
    BranchDecision::Pairs(pairs)
}

fn select_most(
    g: &Graph,
    counters: &PairCounters,
    bs: &mut BranchState,
    blocked: &PairMatrix,
    include_conversion: bool,
) -> BranchDecision {
    // pairs hit by the maximum number of subgraphs
    let mut max_count = 0;
    for p in VertexPair::all_pairs(g.n()) {
        max_count = max_count.max(counters.count(p));
    }
    debug_assert!(max_count > 0);
    let mut cands: Vec<Subgraph> = Vec::new();
    for p in VertexPair::all_pairs(g.n()) {
        if counters.count(p) == max_count {
            let _ = for_each_near(g, p, None, false, |s| {
                cands.push(s);
                ControlFlow::Continue(())
            });
        }
    }
    cands.sort();
    cands.dedup();

    let mut best: Option<(Vec<VertexPair>, Vec<u32>, Subgraph)> = None;
    for s in cands {
        let mut pairs: Vec<VertexPair> = s.editable_pairs(blocked).into_iter().collect();
        if pairs.is_empty() {
            bs.dead = true;
            return BranchDecision::Prune;
        }
        // descending counter, canonical pair order on ties
        pairs.sort_by(|a, b| {
            counters
                .count(*b)
                .cmp(&counters.count(*a))
                .then(a.cmp(b))
        });
        // count sequence without the final pair: blocking all earlier pairs
        // makes the last edit forced, so its weight carries no information
        let seq: Vec<u32> = pairs[..pairs.len() - 1]
            .iter()
            .map(|p| counters.count(*p))
            .collect();
        let better = match &best {
            None => true,
            Some((_, best_seq, best_s)) => match cmp_sequences(&seq, best_seq) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Equal => s < *best_s,
                std::cmp::Ordering::Less => false,
            },
        };
        if better {
            best = Some((pairs, seq, s));
        }
    }
    let (mut pairs, _, s) = best.expect("counter max pair lies in some subgraph");
    maybe_push_omitted(&mut pairs, &s, blocked, include_conversion);
    BranchDecision::Pairs(pairs)
}

/// Larger count wins at the first difference; on a common prefix the shorter
/// sequence wins.
fn cmp_sequences(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    // prefix-equal: shorter is better, so fewer elements ranks greater
    b.len().cmp(&a.len())
}
