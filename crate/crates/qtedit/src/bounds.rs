//! Packing-based admissible lower bounds.
//!
//! A packing is a set of listed forbidden subgraphs that pairwise share no
//! non-omitted, non-blocked pair. Destroying each member costs at least one
//! distinct edit, so the packing size bounds k_opt from below. Variants:
//! greedy one-pass, incremental update after an edit, local-search
//! improvement, and a min-degree construction over the full conflict
//! structure.

use std::ops::ControlFlow;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::counters::PairCounters;
use crate::graph::{Graph, PairMatrix, VertexPair};
use crate::subgraph::{for_each_global, for_each_near, list_global, Subgraph};

#[derive(Clone, Debug)]
pub struct Packing {
    members: Vec<Subgraph>,
    covered: PairMatrix,
}

impl Packing {
    pub fn new(n: usize) -> Self {
        Packing {
            members: Vec::new(),
            covered: PairMatrix::new(n),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subgraph] {
        &self.members
    }

    /// A subgraph fits if each of its non-omitted pairs is either blocked
    /// (shareable) or not yet used by a member. Stale covered bits on blocked
    /// pairs are irrelevant because blocked pairs are skipped here.
    pub fn can_add(&self, s: &Subgraph, blocked: &PairMatrix) -> bool {
        s.non_omitted_pairs()
            .into_iter()
            .all(|q| blocked.get_pair(q) || !self.covered.get_pair(q))
    }

    fn mark(&mut self, s: &Subgraph) {
        for q in s.non_omitted_pairs() {
            self.covered.set_pair(q, true);
        }
    }

    fn unmark(&mut self, s: &Subgraph) {
        for q in s.non_omitted_pairs() {
            self.covered.set_pair(q, false);
        }
    }

    pub fn add(&mut self, s: Subgraph) {
        self.mark(&s);
        self.members.push(s);
    }

    fn insert_at(&mut self, i: usize, s: Subgraph) {
        self.mark(&s);
        self.members.insert(i, s);
    }

    fn remove_at(&mut self, i: usize) -> Subgraph {
        let s = self.members.remove(i);
        self.unmark(&s);
        s
    }

    /// Greedy one-pass packing over the global listing; inclusion-maximal.
    pub fn basic_pack(g: &Graph, blocked: &PairMatrix) -> Packing {
        let mut p = Packing::new(g.n());
        let _ = for_each_global(g, None, |s| {
            if p.can_add(&s, blocked) {
                p.add(s);
            }
            ControlFlow::Continue(())
        });
        p
    }

    /// Repairs the packing after `edited` was toggled (the graph already
    /// reflects the edit): drop the member broken by the edit, or failing
    /// that the first member whose omitted pair was edited, then refill to
    /// maximality from subgraphs around the freed pairs and the edited pair.
    pub fn update_for_edit(&mut self, edited: VertexPair, g: &Graph, blocked: &PairMatrix) {
        let broken = self
            .members
            .iter()
            .position(|m| m.non_omitted_pairs().contains(&edited))
            .or_else(|| {
                self.members
                    .iter()
                    .position(|m| m.omitted_pair() == edited)
            });
        let mut seeds: Vec<VertexPair> = vec![edited];
        if let Some(i) = broken {
            let removed = self.remove_at(i);
            seeds.extend(removed.all_pairs());
        }
        for p in seeds {
            let _ = for_each_near(g, p, Some(&self.covered.clone()), true, |s| {
                if self.can_add(&s, blocked) {
                    self.add(s);
                }
                ControlFlow::Continue(())
            });
        }
    }

    /// Adds subgraphs through the freshly blocked pair `p`; the early-pruning
    /// bound update of the most-pruned strategy.
    pub fn extend_for_block(&mut self, p: VertexPair, g: &Graph, blocked: &PairMatrix) {
        let _ = for_each_near(g, p, None, true, |s| {
            if self.can_add(&s, blocked) {
                self.add(s);
            }
            ControlFlow::Continue(())
        });
    }

    /// Improves the packing by (1,2)-swaps with (1,1)-swap plateau walks.
    ///
    /// Per member: remove it, gather all subgraphs through its pairs, prefer
    /// any replacement that lets a second candidate in; otherwise swap in a
    /// single candidate, 70% of the time the one covering the fewest other
    /// subgraphs (by counter sum) and uniformly at random otherwise.
    /// Terminates after five consecutive rounds without a (1,2)-swap, after
    /// an unchanged round, or as soon as the packing is big enough to prune.
    pub fn local_search_improve(
        &mut self,
        g: &Graph,
        blocked: &PairMatrix,
        counters: &PairCounters,
        prune_at: usize,
        rng: &mut ChaCha8Rng,
    ) {
        let mut rounds_without_two_swap = 0;
        loop {
            if self.members.len() >= prune_at {
                return;
            }
            let mut changed = false;
            let mut two_swap = false;
            let mut i = 0;
            while i < self.members.len() {
                if self.members.len() >= prune_at {
                    return;
                }
                let m = self.remove_at(i);
                let mut cands: Vec<Subgraph> = Vec::new();
                for p in m.all_pairs() {
                    let _ = for_each_near(g, p, None, true, |s| {
                        cands.push(s);
                        ControlFlow::Continue(())
                    });
                }
                cands.sort();
                cands.dedup();
                let singles: Vec<usize> = (0..cands.len())
                    .filter(|&c| self.can_add(&cands[c], blocked))
                    .collect();
                if singles.is_empty() {
                    // cannot happen for a valid member, but stay safe
                    self.insert_at(i, m);
                    i += 1;
                    continue;
                }
                let mut grew = false;
                for &h1 in &singles {
                    self.add(cands[h1]);
                    let mut extras = 0;
                    for (c, cand) in cands.iter().enumerate() {
                        if c != h1 && self.can_add(cand, blocked) {
                            self.add(*cand);
                            extras += 1;
                        }
                    }
                    if extras > 0 {
                        grew = true;
                        break;
                    }
                    let s = self.members.pop().expect("just added");
                    self.unmark(&s);
                }
                if grew {
                    two_swap = true;
                    changed = true;
                    // replacements sit at the end of the member list; the
                    // element now at i is the next original member
                } else {
                    let pick = if singles.len() == 1 || rng.gen_bool(0.7) {
                        *singles
                            .iter()
                            .min_by_key(|&&c| approx_coverage(&cands[c], counters))
                            .expect("non-empty")
                    } else {
                        singles[rng.gen_range(0..singles.len())]
                    };
                    if cands[pick] != m {
                        changed = true;
                    }
                    self.insert_at(i, cands[pick]);
                    i += 1;
                }
            }
            if self.members.len() >= prune_at {
                return;
            }
            if two_swap {
                rounds_without_two_swap = 0;
            } else {
                rounds_without_two_swap += 1;
                if rounds_without_two_swap >= 5 {
                    return;
                }
            }
            if !changed {
                return;
            }
        }
    }

    /// Builds a packing from scratch by repeatedly taking the subgraph whose
    /// pairs lie in the fewest other subgraphs, via a bucket priority queue
    /// (keys only ever drop by one per conflict removal).
    pub fn min_degree_pack(g: &Graph, blocked: &PairMatrix) -> Packing {
        let subs = list_global(g, None);
        let mut packing = Packing::new(g.n());
        if subs.is_empty() {
            return packing;
        }
        let n = g.n();
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n * (n - 1) / 2];
        for (i, s) in subs.iter().enumerate() {
            for q in s.non_omitted_pairs() {
                if !blocked.get_pair(q) {
                    lists[q.tri_index()].push(i as u32);
                }
            }
        }
        let mut keys: Vec<usize> = subs
            .iter()
            .map(|s| {
                s.non_omitted_pairs()
                    .into_iter()
                    .filter(|q| !blocked.get_pair(*q))
                    .map(|q| lists[q.tri_index()].len())
                    .sum()
            })
            .collect();
        let mut alive = vec![true; subs.len()];
        let mut queue = BucketQueue::new(keys.iter().copied().max().unwrap_or(0));
        for (i, &k) in keys.iter().enumerate() {
            queue.push(i as u32, k);
        }
        let mut killed: Vec<u32> = Vec::new();
        while let Some(i) = queue.pop(|j| alive[j as usize], &keys) {
            let i = i as usize;
            alive[i] = false;
            packing.add(subs[i]);
            killed.clear();
            for q in subs[i].non_omitted_pairs() {
                if blocked.get_pair(q) {
                    continue;
                }
                for &j in &lists[q.tri_index()] {
                    if alive[j as usize] {
                        alive[j as usize] = false;
                        killed.push(j);
                    }
                }
            }
            for &j in killed.iter() {
                for r in subs[j as usize].non_omitted_pairs() {
                    if blocked.get_pair(r) {
                        continue;
                    }
                    for &l in &lists[r.tri_index()] {
                        if alive[l as usize] {
                            keys[l as usize] -= 1;
                            queue.push(l, keys[l as usize]);
                        }
                    }
                }
            }
        }
        packing
    }

    /// Disjointness plus induced-ness audit.
    pub fn check_valid(&self, g: &Graph, blocked: &PairMatrix) -> bool {
        let mut seen = PairMatrix::new(g.n());
        for m in &self.members {
            if !m.is_induced(g) {
                return false;
            }
            for q in m.non_omitted_pairs() {
                if blocked.get_pair(q) {
                    continue;
                }
                if seen.get_pair(q) || !self.covered.get_pair(q) {
                    return false;
                }
                seen.set_pair(q, true);
            }
        }
        true
    }

    /// Inclusion-maximality audit by full relisting.
    pub fn check_maximal(&self, g: &Graph, blocked: &PairMatrix) -> bool {
        let mut maximal = true;
        let _ = for_each_global(g, None, |s| {
            if self.can_add(&s, blocked) {
                maximal = false;
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        maximal
    }
}

/// Sum of the pair counters over a subgraph's non-omitted pairs; a cheap
/// stand-in for the number of subgraphs it conflicts with.
pub fn approx_coverage(s: &Subgraph, counters: &PairCounters) -> u64 {
    s.non_omitted_pairs()
        .into_iter()
        .map(|q| u64::from(counters.count(q)))
        .sum()
}

/// Monotone bucket queue: entries re-pushed on key decrease, stale entries
/// skipped at pop time. FIFO within a bucket.
struct BucketQueue {
    buckets: Vec<Vec<u32>>,
    heads: Vec<usize>,
    min_bucket: usize,
}

impl BucketQueue {
    fn new(max_key: usize) -> Self {
        BucketQueue {
            buckets: vec![Vec::new(); max_key + 1],
            heads: vec![0; max_key + 1],
            min_bucket: 0,
        }
    }

    fn push(&mut self, item: u32, key: usize) {
        self.buckets[key].push(item);
        if key < self.min_bucket {
            self.min_bucket = key;
        }
    }

    fn pop(&mut self, mut is_alive: impl FnMut(u32) -> bool, keys: &[usize]) -> Option<u32> {
        while self.min_bucket < self.buckets.len() {
            let b = self.min_bucket;
            while self.heads[b] < self.buckets[b].len() {
                let item = self.buckets[b][self.heads[b]];
                self.heads[b] += 1;
                if is_alive(item) && keys[item as usize] == b {
                    return Some(item);
                }
            }
            self.min_bucket += 1;
        }
        None
    }
}
