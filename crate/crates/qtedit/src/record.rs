//! Machine-readable run output: one JSON document per run.

use serde::{Deserialize, Serialize};

use crate::analysis::SolutionSummary;
use crate::graph::Edit;
use crate::search::{KStats, SearchResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ConfigEcho {
    pub format: String,
    pub bound: String,
    pub branching: String,
    pub all_solutions: bool,
    pub threads: usize,
    pub seed: u64,
    pub permutation_seed: u64,
    pub max_k: Option<usize>,
    pub time_limit_seconds: Option<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct KRecord {
    pub k: usize,
    pub calls: u64,
    pub extra_bound_updates: u64,
    pub pruned: u64,
    pub wall_seconds: f64,
    pub found: bool,
}

impl From<&KStats> for KRecord {
    fn from(s: &KStats) -> Self {
        KRecord {
            k: s.k,
            calls: s.stats.calls,
            extra_bound_updates: s.stats.extra_bound_updates,
            pruned: s.stats.pruned,
            wall_seconds: s.wall.as_secs_f64(),
            found: s.found,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunRecord {
    pub schema_version: u32,
    pub instance: String,
    pub config: ConfigEcho,
    pub k_opt: Option<usize>,
    /// Largest k proven infeasible plus one; equals k_opt when solved.
    pub lower_bound: usize,
    pub timed_out: bool,
    pub solution_count: usize,
    pub per_k: Vec<KRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solutions: Option<Vec<Vec<Edit>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<SolutionSummary>,
}

impl RunRecord {
    pub fn new(instance: String, config: ConfigEcho, result: &SearchResult) -> Self {
        RunRecord {
            schema_version: SCHEMA_VERSION,
            instance,
            config,
            k_opt: result.k_opt,
            lower_bound: result.lower_bound,
            timed_out: result.timed_out,
            solution_count: result.solutions.len(),
            per_k: result.per_k.iter().map(KRecord::from).collect(),
            solutions: None,
            analysis: None,
        }
    }
}
