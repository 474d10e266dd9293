//! Work-stealing parallel search.
//!
//! Workers run the sequential recursion on self-contained work packages.
//! Each worker keeps an explicit copy of its recursion path plus a second
//! state snapshot tracking the topmost path level; when the global queue
//! runs low the worker donates the unexplored siblings of its top levels as
//! new packages, popping each donated level and advancing the top snapshot
//! by replaying that level's blocks and edit. A worker returning into a
//! donated level skips its remaining siblings and its unwind bookkeeping;
//! the bottom state is rebuilt from the next package anyway.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::{Arc, Condvar, Mutex};
use std::time::Instant;

use crate::bounds::Packing;
use crate::branching::BranchState;
use crate::counters::PairCounters;
use crate::graph::{Graph, PairMatrix, VertexPair};
use crate::search::{KOutcome, PathTracker, SearchConfig, SearchCore, Stats};

struct Package {
    k: usize,
    /// Pair to block and edit before recursing; None for the root package.
    pair: Option<VertexPair>,
    g: Graph,
    blocked: PairMatrix,
    counters: PairCounters,
    edits: Vec<VertexPair>,
    packing: Packing,
    branch: BranchState,
}

struct QueueState {
    queue: VecDeque<Package>,
    active: usize,
}

struct Shared {
    queue: Mutex<QueueState>,
    cv: Condvar,
    queue_len: AtomicUsize,
    stop: AtomicBool,
    found: AtomicBool,
    timed_out: AtomicBool,
    solutions: Mutex<Vec<Vec<VertexPair>>>,
    stats: Mutex<Stats>,
    threads: usize,
}

struct TopState {
    g: Graph,
    blocked: PairMatrix,
    counters: PairCounters,
    edits: Vec<VertexPair>,
}

struct PathElement {
    k: usize,
    pairs: Vec<VertexPair>,
    /// Next sibling index the owning worker would run.
    next: usize,
    /// How many of this level's blocks were replayed onto the top snapshot.
    applied: usize,
    packing: Packing,
    branch: BranchState,
}

struct ParTracker {
    shared: Arc<Shared>,
    /// Front = topmost (oldest) level of the current package's recursion.
    path: VecDeque<PathElement>,
    /// Levels consumed from the front by donation since the package started.
    consumed: usize,
    /// Current recursion depth in levels (begin minus end calls).
    depth: usize,
    top: TopState,
}

impl ParTracker {
    fn new(shared: Arc<Shared>, top: TopState) -> Self {
        ParTracker {
            shared,
            path: VecDeque::new(),
            consumed: 0,
            depth: 0,
            top,
        }
    }

    fn donate(&mut self) {
        let threads = self.shared.threads;
        if self.shared.queue_len.load(Ordering::Relaxed) >= threads {
            return;
        }
        let target = 2 * threads;
        let mut fresh: Vec<Package> = Vec::new();
        while self.shared.queue_len.load(Ordering::Relaxed) + fresh.len() < target {
            let Some(e) = self.path.front_mut() else { break };
            debug_assert!(e.next >= 1, "a path level always has a running child");
            // catch the top snapshot up to the worker's progress: blocks of
            // all started siblings, with their branch observations
            while e.applied < e.next {
                let q = e.pairs[e.applied];
                self.top.blocked.set_pair(q, true);
                self.top.counters.block(q);
                e.branch.observe_pair(&self.top.g, q, &self.top.blocked);
                e.applied += 1;
            }
            // donate every remaining sibling; partial donation would leave
            // the worker's own blocking sequence with holes
            let mut j = e.next;
            while j < e.pairs.len() && !e.branch.is_dead() {
                let q = e.pairs[j];
                fresh.push(Package {
                    k: e.k,
                    pair: Some(q),
                    g: self.top.g.clone(),
                    blocked: self.top.blocked.clone(),
                    counters: self.top.counters.clone(),
                    edits: self.top.edits.clone(),
                    packing: e.packing.clone(),
                    branch: e.branch.clone(),
                });
                self.top.blocked.set_pair(q, true);
                self.top.counters.block(q);
                e.branch.observe_pair(&self.top.g, q, &self.top.blocked);
                j += 1;
            }
            // dead branch: the leftover siblings cannot contain solutions
            // and are dropped, exactly as the sequential loop would do
            // roll the donation blocks back off the snapshot; the running
            // child below saw only the blocks of the started siblings
            for idx in (e.next..j).rev() {
                let q = e.pairs[idx];
                self.top.counters.unblock(q);
                self.top.blocked.set_pair(q, false);
            }
            // descend the snapshot into the running child
            let e = self.path.pop_front().expect("checked above");
            self.consumed += 1;
            let q = e.pairs[e.next - 1];
            self.top.g.toggle_edge(q);
            self.top
                .counters
                .apply_edit(&mut self.top.g, q, &self.top.blocked);
            self.top.edits.push(q);
        }
        if !fresh.is_empty() {
            let mut qs = self.shared.queue.lock().unwrap();
            for p in fresh {
                qs.queue.push_back(p);
            }
            self.shared
                .queue_len
                .store(qs.queue.len(), Ordering::Relaxed);
            self.shared.cv.notify_all();
        }
    }
}

impl PathTracker for ParTracker {
    fn on_call(&mut self, _core: &mut SearchCore) {
        self.donate();
    }

    fn should_stop(&self) -> bool {
        self.shared.stop.load(Ordering::Relaxed)
    }

    fn begin_level(
        &mut self,
        k: usize,
        pairs: &[VertexPair],
        packing: &Packing,
        branch: &BranchState,
    ) {
        self.depth += 1;
        self.path.push_back(PathElement {
            k,
            pairs: pairs.to_vec(),
            next: 0,
            applied: 0,
            packing: packing.clone(),
            branch: branch.clone(),
        });
    }

    fn next_index(&mut self) -> Option<usize> {
        if self.consumed > self.depth - 1 {
            // level was donated away
            return None;
        }
        let e = self.path.back_mut().expect("own level present");
        if e.next < e.pairs.len() {
            e.next += 1;
            Some(e.next - 1)
        } else {
            None
        }
    }

    fn end_level(&mut self) -> bool {
        self.depth -= 1;
        if self.consumed > self.depth {
            false
        } else {
            self.path.pop_back();
            true
        }
    }
}

pub(crate) fn run_parallel_k(
    g: &Graph,
    k: usize,
    cfg: &SearchConfig,
    counters: &PairCounters,
    root_packing: &Packing,
    seed_k: u64,
    deadline: Option<Instant>,
) -> KOutcome {
    let shared = Arc::new(Shared {
        queue: Mutex::new(QueueState {
            queue: VecDeque::new(),
            active: 0,
        }),
        cv: Condvar::new(),
        queue_len: AtomicUsize::new(0),
        stop: AtomicBool::new(false),
        found: AtomicBool::new(false),
        timed_out: AtomicBool::new(false),
        solutions: Mutex::new(Vec::new()),
        stats: Mutex::new(Stats::default()),
        threads: cfg.threads,
    });
    {
        let mut qs = shared.queue.lock().unwrap();
        qs.queue.push_back(Package {
            k,
            pair: None,
            g: g.clone(),
            blocked: PairMatrix::new(g.n()),
            counters: counters.clone(),
            edits: Vec::new(),
            packing: root_packing.clone(),
            branch: BranchState::new(),
        });
        shared.queue_len.store(1, Ordering::Relaxed);
    }
    std::thread::scope(|s| {
        for t in 0..cfg.threads {
            let shared = Arc::clone(&shared);
            let seed = seed_k.wrapping_add(t as u64);
            s.spawn(move || worker_loop(shared, cfg, g, seed, deadline));
        }
    });

    let mut solutions = std::mem::take(&mut *shared.solutions.lock().unwrap());
    if !cfg.all_solutions && solutions.len() > 1 {
        // several workers can race to a first solution; keep one
        solutions.sort();
        solutions.truncate(1);
    }
    let stats = *shared.stats.lock().unwrap();
    KOutcome {
        found: shared.found.load(Ordering::Relaxed),
        solutions,
        stats,
        timed_out: shared.timed_out.load(Ordering::Relaxed),
    }
}

fn worker_loop(
    shared: Arc<Shared>,
    cfg: &SearchConfig,
    g: &Graph,
    seed: u64,
    deadline: Option<Instant>,
) {
    let mut core = SearchCore::new(g.clone(), cfg, PairCounters::new(g), seed, deadline);
    loop {
        let pkg = {
            let mut qs = shared.queue.lock().unwrap();
            loop {
                if shared.stop.load(Ordering::Relaxed) {
                    break None;
                }
                if let Some(p) = qs.queue.pop_front() {
                    qs.active += 1;
                    shared.queue_len.store(qs.queue.len(), Ordering::Relaxed);
                    break Some(p);
                }
                if qs.active == 0 {
                    break None;
                }
                qs = shared.cv.wait(qs).unwrap();
            }
        };
        let Some(pkg) = pkg else {
            shared.cv.notify_all();
            break;
        };
        let found = execute_package(&mut core, pkg, &shared, cfg);
        if found {
            shared.found.store(true, Ordering::Relaxed);
            if !cfg.all_solutions {
                shared.stop.store(true, Ordering::Relaxed);
            }
        }
        {
            let mut qs = shared.queue.lock().unwrap();
            qs.active -= 1;
            if qs.active == 0 || shared.stop.load(Ordering::Relaxed) {
                shared.cv.notify_all();
            }
        }
    }
    // flush worker-local results
    if core.timed_out {
        shared.timed_out.store(true, Ordering::Relaxed);
    }
    shared
        .solutions
        .lock()
        .unwrap()
        .append(&mut core.solutions);
    let mut stats = shared.stats.lock().unwrap();
    stats.calls += core.stats.calls;
    stats.extra_bound_updates += core.stats.extra_bound_updates;
    stats.pruned += core.stats.pruned;
}

fn execute_package(
    core: &mut SearchCore,
    pkg: Package,
    shared: &Arc<Shared>,
    cfg: &SearchConfig,
) -> bool {
    core.g = pkg.g;
    core.blocked = pkg.blocked;
    core.counters = pkg.counters;
    core.edits = pkg.edits;
    let mut packing = pkg.packing;
    let mut branch = pkg.branch;
    let k = if let Some(q) = pkg.pair {
        core.blocked.set_pair(q, true);
        core.counters.block(q);
        core.g.toggle_edge(q);
        core.counters.apply_edit(&mut core.g, q, &core.blocked);
        core.edits.push(q);
        if !matches!(cfg.bound, crate::search::BoundKind::Basic) {
            packing.update_for_edit(q, &core.g, &core.blocked);
        }
        branch.observe_pair(&core.g, q, &core.blocked);
        pkg.k - 1
    } else {
        pkg.k
    };
    let top = TopState {
        g: core.g.clone(),
        blocked: core.blocked.clone(),
        counters: core.counters.clone(),
        edits: core.edits.clone(),
    };
    let mut tracker = ParTracker::new(Arc::clone(shared), top);
    core.recurse(k, packing, branch, &mut tracker)
}
