//! Exact quasi-threshold edge editing.
//!
//! Quasi-threshold (trivially perfect) graphs are the graphs without an
//! induced P4 or C4. This crate finds a minimum set of edge insertions and
//! deletions turning a graph into one, optionally enumerating every optimal
//! solution exactly once, via branch and bound with packing lower bounds and
//! work-stealing parallelism.

pub mod analysis;
pub mod bounds;
pub mod branching;
pub mod counters;
pub mod graph;
pub mod instance;
mod parallel;
pub mod record;
pub mod search;
pub mod subgraph;

pub use branching::BranchKind;
pub use graph::{Edit, EditKind, Graph, PairMatrix, VertexPair};
pub use search::{solve, BoundKind, SearchConfig, SearchResult};
