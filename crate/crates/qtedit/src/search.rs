//! Sequential branch-and-bound driver with iterative deepening over k.
//!
//! Unique enumeration rests on the blocking discipline: a branched pair is
//! blocked before its edit and stays blocked for all later siblings, so no
//! subtree can edit it again (no-undo) and no sibling subtree can produce a
//! permutation of an already-explored edit set (no-redundancy).

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bounds::Packing;
use crate::branching::{select, BranchDecision, BranchKind, BranchState};
use crate::counters::PairCounters;
use crate::graph::{Edit, EditKind, Graph, PairMatrix, VertexPair};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundKind {
    Basic,
    Update,
    LocalSearch,
    MinDegree,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub bound: BoundKind,
    pub branching: BranchKind,
    pub all_solutions: bool,
    pub max_k: Option<usize>,
    pub time_limit: Option<Duration>,
    pub seed: u64,
    pub threads: usize,
    /// Also branch on the omitted pair of the selected subgraph (converting
    /// a P4 into a C4 or vice versa). Off by default; destroying a forbidden
    /// subgraph always requires editing one of the other five pairs, so
    /// these branches only add work. Kept as a soundness cross-check.
    pub include_conversion: bool,
    /// Expensive per-call consistency checks; for small test instances only.
    pub audit: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            bound: BoundKind::LocalSearch,
            branching: BranchKind::MostPruned,
            all_solutions: false,
            max_k: None,
            time_limit: None,
            seed: 1,
            threads: 1,
            include_conversion: false,
            audit: false,
        }
    }
}

#[derive(Clone, Copy, Default, Debug)]
pub struct Stats {
    pub calls: u64,
    pub extra_bound_updates: u64,
    pub pruned: u64,
}

#[derive(Clone, Debug)]
pub struct KStats {
    pub k: usize,
    pub stats: Stats,
    pub wall: Duration,
    pub found: bool,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub k_opt: Option<usize>,
    /// Largest k proven infeasible, plus one; equals k_opt when solved.
    pub lower_bound: usize,
    pub solutions: Vec<Vec<Edit>>,
    pub per_k: Vec<KStats>,
    pub timed_out: bool,
}

/// Per-worker mutable search state. The graph, blocked matrix and counters
/// are updated in place along the recursion path and restored on the way up;
/// packings and branch states are call-state, copied per child.
pub(crate) struct SearchCore {
    pub bound: BoundKind,
    pub branching: BranchKind,
    pub all_solutions: bool,
    pub include_conversion: bool,
    pub audit: bool,
    pub g: Graph,
    pub blocked: PairMatrix,
    pub counters: PairCounters,
    pub edits: Vec<VertexPair>,
    pub rng: ChaCha8Rng,
    pub solutions: Vec<Vec<VertexPair>>,
    pub stats: Stats,
    pub deadline: Option<Instant>,
    pub timed_out: bool,
}

/// Hooks letting the parallel scheduler watch the recursion path and donate
/// unexplored siblings. The sequential implementation is a plain index walk.
pub(crate) trait PathTracker {
    fn on_call(&mut self, core: &mut SearchCore);
    fn should_stop(&self) -> bool;
    fn begin_level(
        &mut self,
        k: usize,
        pairs: &[VertexPair],
        packing: &Packing,
        branch: &BranchState,
    );
    /// Next sibling index at the current level; None when exhausted or when
    /// the level's remaining siblings were donated to other workers.
    fn next_index(&mut self) -> Option<usize>;
    /// True if the level is still owned, i.e. its blocks must be unwound.
    fn end_level(&mut self) -> bool;
}

#[derive(Default)]
pub(crate) struct SeqTracker {
    levels: Vec<(usize, usize)>,
}

impl PathTracker for SeqTracker {
    fn on_call(&mut self, _core: &mut SearchCore) {}

    fn should_stop(&self) -> bool {
        false
    }

    fn begin_level(
        &mut self,
        _k: usize,
        pairs: &[VertexPair],
        _packing: &Packing,
        _branch: &BranchState,
    ) {
        self.levels.push((pairs.len(), 0));
    }

    fn next_index(&mut self) -> Option<usize> {
        let (len, next) = self.levels.last_mut().expect("level underflow");
        if next < len {
            *next += 1;
            Some(*next - 1)
        } else {
            None
        }
    }

    fn end_level(&mut self) -> bool {
        self.levels.pop();
        true
    }
}

impl SearchCore {
    pub(crate) fn new(g: Graph, cfg: &SearchConfig, counters: PairCounters, seed: u64, deadline: Option<Instant>) -> Self {
        let n = g.n();
        SearchCore {
            bound: cfg.bound,
            branching: cfg.branching,
            all_solutions: cfg.all_solutions,
            include_conversion: cfg.include_conversion,
            audit: cfg.audit,
            g,
            blocked: PairMatrix::new(n),
            counters,
            edits: Vec::new(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            solutions: Vec::new(),
            stats: Stats::default(),
            deadline,
            timed_out: false,
        }
    }

    pub(crate) fn recurse<T: PathTracker>(
        &mut self,
        k: usize,
        mut packing: Packing,
        mut branch: BranchState,
        tracker: &mut T,
    ) -> bool {
        if tracker.should_stop() {
            return false;
        }
        if let Some(d) = self.deadline {
            if Instant::now() >= d {
                self.timed_out = true;
                return false;
            }
        }
        self.stats.calls += 1;
        tracker.on_call(self);

        let blocked_snapshot = if self.audit {
            Some(self.blocked.clone())
        } else {
            None
        };

        match self.bound {
            BoundKind::Basic => {
                packing = Packing::basic_pack(&self.g, &self.blocked);
            }
            BoundKind::Update => {}
            BoundKind::LocalSearch => {
                packing.local_search_improve(
                    &self.g,
                    &self.blocked,
                    &self.counters,
                    k + 1,
                    &mut self.rng,
                );
            }
            BoundKind::MinDegree => {
                if packing.len() <= k {
                    packing = Packing::min_degree_pack(&self.g, &self.blocked);
                }
            }
        }
        if self.audit {
            self.audit_state(&packing);
        }
        if packing.len() > k {
            self.stats.pruned += 1;
            self.check_restored(blocked_snapshot.as_ref());
            return false;
        }

        let decision = select(
            &self.g,
            &self.counters,
            &mut branch,
            &self.blocked,
            self.branching,
            self.include_conversion,
        );
        let pairs = match decision {
            BranchDecision::Solved => {
                let mut sol = self.edits.clone();
                sol.sort();
                self.solutions.push(sol);
                self.check_restored(blocked_snapshot.as_ref());
                return true;
            }
            BranchDecision::Prune => {
                self.stats.pruned += 1;
                self.check_restored(blocked_snapshot.as_ref());
                return false;
            }
            BranchDecision::Pairs(pairs) => pairs,
        };
        if k == 0 {
            self.check_restored(blocked_snapshot.as_ref());
            return false;
        }

        tracker.begin_level(k, &pairs, &packing, &branch);
        let mut found = false;
        let mut blocks_done = 0;
        while let Some(i) = tracker.next_index() {
            let q = pairs[i];
            let pre_count = self.counters.count(q);
            self.blocked.set_pair(q, true);
            self.counters.block(q);
            blocks_done = i + 1;
            self.g.toggle_edge(q);
            self.counters.apply_edit(&mut self.g, q, &self.blocked);
            self.edits.push(q);

            let mut child_packing = packing.clone();
            if !matches!(self.bound, BoundKind::Basic) {
                child_packing.update_for_edit(q, &self.g, &self.blocked);
            }
            let mut child_branch = branch.clone();
            child_branch.observe_pair(&self.g, q, &self.blocked);

            found |= self.recurse(k - 1, child_packing, child_branch, tracker);

            self.edits.pop();
            self.g.toggle_edge(q);
            self.counters.apply_edit(&mut self.g, q, &self.blocked);

            if found && !self.all_solutions {
                break;
            }
            if self.timed_out || tracker.should_stop() {
                break;
            }
            // q stays blocked for the remaining siblings
            branch.observe_pair(&self.g, q, &self.blocked);
            if branch.is_dead() {
                break;
            }
            if matches!(self.branching, BranchKind::MostPruned) {
                let remaining = pairs.len() - (i + 1);
                // a pair in a single subgraph cannot raise the bound, and
                // with one sibling left the update costs more than it saves
                if remaining >= 2 && pre_count > 1 {
                    self.stats.extra_bound_updates += 1;
                    packing.extend_for_block(q, &self.g, &self.blocked);
                    if packing.len() > k {
                        self.stats.pruned += 1;
                        break;
                    }
                }
            }
        }
        if tracker.end_level() {
            for j in (0..blocks_done).rev() {
                self.counters.unblock(pairs[j]);
                self.blocked.set_pair(pairs[j], false);
            }
            self.check_restored(blocked_snapshot.as_ref());
        }
        found
    }

    fn audit_state(&self, packing: &Packing) {
        assert!(
            self.counters.matches_recompute(&self.g, &self.blocked),
            "counter recompute mismatch"
        );
        assert!(
            packing.check_valid(&self.g, &self.blocked),
            "packing disjointness or induced-ness violated"
        );
        // the incremental variants refill only around edits, so blocking a
        // pair elsewhere can leave room they never look at; only the fresh
        // greedy packing promises inclusion-maximality at every node
        if matches!(self.bound, BoundKind::Basic) {
            assert!(
                packing.check_maximal(&self.g, &self.blocked),
                "packing not inclusion-maximal"
            );
        }
    }

    fn check_restored(&self, snapshot: Option<&PairMatrix>) {
        if let Some(snap) = snapshot {
            assert!(*snap == self.blocked, "blocked matrix not restored");
        }
    }
}

/// Initial lower bound and its packing: greedy pass plus one unrestricted
/// local-search improvement. Reused as the root call-state of every k.
pub(crate) fn root_bound(
    g: &Graph,
    counters: &PairCounters,
    seed: u64,
) -> Packing {
    let blocked = PairMatrix::new(g.n());
    let mut packing = Packing::basic_pack(g, &blocked);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    packing.local_search_improve(g, &blocked, counters, usize::MAX, &mut rng);
    packing
}

pub fn solve(g: &Graph, cfg: &SearchConfig) -> SearchResult {
    let counters = PairCounters::new(g);
    let root_packing = root_bound(g, &counters, cfg.seed);
    let k0 = root_packing.len();
    let deadline = cfg.time_limit.map(|t| Instant::now() + t);

    let mut result = SearchResult {
        k_opt: None,
        lower_bound: k0,
        solutions: Vec::new(),
        per_k: Vec::new(),
        timed_out: false,
    };

    let mut k = k0;
    loop {
        if let Some(mk) = cfg.max_k {
            if k > mk {
                break;
            }
        }
        if let Some(d) = deadline {
            if Instant::now() >= d {
                result.timed_out = true;
                break;
            }
        }
        let start = Instant::now();
        let seed_k = cfg.seed.wrapping_add(k as u64).wrapping_mul(0x9e3779b97f4a7c15);
        let outcome = if cfg.threads <= 1 {
            let mut core = SearchCore::new(g.clone(), cfg, counters.clone(), seed_k, deadline);
            let mut tracker = SeqTracker::default();
            let found = core.recurse(k, root_packing.clone(), BranchState::new(), &mut tracker);
            KOutcome {
                found,
                solutions: core.solutions,
                stats: core.stats,
                timed_out: core.timed_out,
            }
        } else {
            crate::parallel::run_parallel_k(g, k, cfg, &counters, &root_packing, seed_k, deadline)
        };
        result.per_k.push(KStats {
            k,
            stats: outcome.stats,
            wall: start.elapsed(),
            found: outcome.found,
        });
        if outcome.found {
            result.k_opt = Some(k);
            result.lower_bound = k;
            result.solutions = finalize_solutions(g, outcome.solutions);
            result.timed_out |= outcome.timed_out;
            break;
        }
        if outcome.timed_out {
            result.timed_out = true;
            break;
        }
        result.lower_bound = k + 1;
        k += 1;
    }
    result
}

/// Result of one search_k run, thread count independent.
pub(crate) struct KOutcome {
    pub found: bool,
    pub solutions: Vec<Vec<VertexPair>>,
    pub stats: Stats,
    pub timed_out: bool,
}

fn finalize_solutions(g: &Graph, mut raw: Vec<Vec<VertexPair>>) -> Vec<Vec<Edit>> {
    for sol in &mut raw {
        sol.sort();
    }
    raw.sort();
    raw.dedup();
    raw.into_iter()
        .map(|sol| {
            sol.into_iter()
                .map(|pair| Edit {
                    pair,
                    kind: if g.has_edge_pair(pair) {
                        EditKind::Deletion
                    } else {
                        EditKind::Insertion
                    },
                })
                .collect()
        })
        .collect()
}
