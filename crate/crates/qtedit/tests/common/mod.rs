//! Brute-force reference implementations, deliberately written with none of
//! the library's machinery so the two can check each other.

// each test binary uses its own subset of these helpers
#![allow(dead_code)]

use qtedit::graph::{Graph, VertexPair};

/// Induced P4/C4 check over every ordered 4-tuple.
pub fn is_quasi_threshold(g: &Graph) -> bool {
    let n = g.n();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if a == b || a == c || a == d || b == c || b == d || c == d {
                        continue;
                    }
                    if g.has_edge(a, b)
                        && g.has_edge(b, c)
                        && g.has_edge(c, d)
                        && !g.has_edge(a, c)
                        && !g.has_edge(b, d)
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Every tuple (u1,u2,u3,u4) with the path-plus-non-edges pattern and
/// u1 < u4: each P4 once, each C4 four times. Sorted.
pub fn reference_listing(g: &Graph) -> Vec<[usize; 4]> {
    let n = g.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in a + 1..n {
                    if a == b || a == c || b == c || b == d || c == d {
                        continue;
                    }
                    if g.has_edge(a, b)
                        && g.has_edge(b, c)
                        && g.has_edge(c, d)
                        && !g.has_edge(a, c)
                        && !g.has_edge(b, d)
                    {
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// Exhaustive minimum edit search over all pair subsets of size at most
/// `max_k`. Returns the optimum and every optimal solution as a sorted set
/// of sorted pair lists, or None if nothing within the budget works.
pub fn brute_force_optimum(
    g: &Graph,
    max_k: usize,
) -> Option<(usize, Vec<Vec<VertexPair>>)> {
    let pairs: Vec<VertexPair> = VertexPair::all_pairs(g.n()).collect();
    let mut scratch = g.clone();
    for k in 0..=max_k.min(pairs.len()) {
        let mut solutions = Vec::new();
        let mut chosen = Vec::with_capacity(k);
        subsets(&pairs, 0, k, &mut chosen, &mut scratch, &mut solutions);
        if !solutions.is_empty() {
            solutions.sort();
            return Some((k, solutions));
        }
    }
    None
}

fn subsets(
    pairs: &[VertexPair],
    start: usize,
    remaining: usize,
    chosen: &mut Vec<VertexPair>,
    scratch: &mut Graph,
    solutions: &mut Vec<Vec<VertexPair>>,
) {
    if remaining == 0 {
        if is_quasi_threshold(scratch) {
            let mut sol = chosen.clone();
            sol.sort();
            solutions.push(sol);
        }
        return;
    }
    for i in start..pairs.len() {
        scratch.toggle_edge(pairs[i]);
        chosen.push(pairs[i]);
        subsets(pairs, i + 1, remaining - 1, chosen, scratch, solutions);
        chosen.pop();
        scratch.toggle_edge(pairs[i]);
    }
}

/// Seeded G(n, p) instance corpus shared by the oracle-style tests.
pub fn random_graph(seed: u64, n: usize, p: f64) -> Graph {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n).unwrap();
    for pair in VertexPair::all_pairs(n) {
        if rng.gen_bool(p) {
            g.add_edge(pair.u(), pair.v());
        }
    }
    g
}

pub fn corpus(count: usize) -> Vec<(u64, Graph)> {
    let mut out = Vec::with_capacity(count);
    let mut seed = 0u64;
    while out.len() < count {
        let n = 4 + (seed % 4) as usize; // 4..=7
        let p = [0.3, 0.5, 0.7][(seed / 4 % 3) as usize];
        out.push((seed, random_graph(seed, n, p)));
        seed += 1;
    }
    out
}
