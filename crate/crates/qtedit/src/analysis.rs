//! Solution-space analysis: clusterings induced by edited graphs, common and
//! union edits, and the intersection of all clusterings.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::graph::{Edit, EditKind, Graph, NodeId};

/// Node partition; equality is up to block relabeling.
#[derive(Clone, Debug)]
pub struct Partition {
    block_of: Vec<usize>,
    count: usize,
}

impl Partition {
    pub fn new(block_of: Vec<usize>, count: usize) -> Self {
        debug_assert!(block_of.iter().all(|&b| b < count));
        Partition { block_of, count }
    }

    pub fn n(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_count(&self) -> usize {
        self.count
    }

    pub fn block(&self, v: NodeId) -> usize {
        self.block_of[v]
    }

    /// Relabels blocks by first appearance, giving a representative
    /// independent of incoming block ids.
    pub fn canonical(&self) -> Vec<usize> {
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut out = Vec::with_capacity(self.block_of.len());
        for &b in &self.block_of {
            let next = remap.len();
            out.push(*remap.entry(b).or_insert(next));
        }
        out
    }
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }
}

impl Eq for Partition {}

/// Connected components as a partition.
pub fn components(g: &Graph) -> Partition {
    let n = g.n();
    let mut block_of = vec![usize::MAX; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if block_of[start] != usize::MAX {
            continue;
        }
        block_of[start] = count;
        stack.push(start);
        while let Some(u) = stack.pop() {
            for v in g.neighbors(u) {
                if block_of[v] == usize::MAX {
                    block_of[v] = count;
                    stack.push(v);
                }
            }
        }
        count += 1;
    }
    Partition::new(block_of, count)
}

/// Coarsest partition refining both inputs: nodes share a block iff they
/// share one in both.
pub fn meet2(a: &Partition, b: &Partition) -> Partition {
    assert_eq!(a.n(), b.n(), "partitions over different node sets");
    let mut ids: HashMap<(usize, usize), usize> = HashMap::new();
    let mut block_of = Vec::with_capacity(a.n());
    for v in 0..a.n() {
        let key = (a.block(v), b.block(v));
        let next = ids.len();
        block_of.push(*ids.entry(key).or_insert(next));
    }
    let count = ids.len();
    Partition::new(block_of, count)
}

pub fn meet(parts: &[Partition]) -> Partition {
    let first = parts.first().expect("meet of an empty list");
    parts[1..].iter().fold(first.clone(), |acc, p| meet2(&acc, p))
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SolutionSummary {
    pub solution_count: usize,
    pub distinct_clusterings: usize,
    pub min_clusters: usize,
    pub max_clusters: usize,
    pub common_insertions: usize,
    pub common_deletions: usize,
    pub union_insertions: usize,
    pub union_deletions: usize,
    pub common_edit_clusters: usize,
    pub intersection_clusters: usize,
}

/// Aggregates the Table-4 style summary over all solutions. Maintained
/// streaming so huge solution sets never need to be stored here.
pub fn summarize(g: &Graph, solutions: &[Vec<Edit>]) -> SolutionSummary {
    assert!(!solutions.is_empty(), "summary of an empty solution list");
    let mut clusterings: HashSet<Vec<usize>> = HashSet::new();
    let mut min_clusters = usize::MAX;
    let mut max_clusters = 0;
    let mut common: Option<HashSet<Edit>> = None;
    let mut union: HashSet<Edit> = HashSet::new();
    let mut intersection: Option<Partition> = None;

    let mut scratch = g.clone();
    for sol in solutions {
        for e in sol {
            scratch.toggle_edge(e.pair);
        }
        let part = components(&scratch);
        for e in sol {
            scratch.toggle_edge(e.pair);
        }
        min_clusters = min_clusters.min(part.block_count());
        max_clusters = max_clusters.max(part.block_count());
        clusterings.insert(part.canonical());
        intersection = Some(match intersection {
            None => part,
            Some(acc) => meet2(&acc, &part),
        });
        let set: HashSet<Edit> = sol.iter().copied().collect();
        union.extend(set.iter().copied());
        common = Some(match common {
            None => set,
            Some(acc) => acc.intersection(&set).copied().collect(),
        });
    }

    let common = common.expect("non-empty");
    let intersection = intersection.expect("non-empty");
    let count_kind = |set: &HashSet<Edit>, kind: EditKind| {
        set.iter().filter(|e| e.kind == kind).count()
    };
    let mut common_graph = g.clone();
    for e in &common {
        common_graph.toggle_edge(e.pair);
    }
    SolutionSummary {
        solution_count: solutions.len(),
        distinct_clusterings: clusterings.len(),
        min_clusters,
        max_clusters,
        common_insertions: count_kind(&common, EditKind::Insertion),
        common_deletions: count_kind(&common, EditKind::Deletion),
        union_insertions: count_kind(&union, EditKind::Insertion),
        union_deletions: count_kind(&union, EditKind::Deletion),
        common_edit_clusters: components(&common_graph).block_count(),
        intersection_clusters: intersection.block_count(),
    }
}
