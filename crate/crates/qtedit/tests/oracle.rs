mod common;

use common::{brute_force_optimum, corpus, is_quasi_threshold, random_graph, reference_listing};
use qtedit::counters::PairCounters;
use qtedit::graph::VertexPair;
use qtedit::subgraph::{list_global, list_near};
use qtedit::{solve, SearchConfig};

#[test]
fn listing_matches_reference_on_random_graphs() {
    for seed in 0..60u64 {
        let n = 4 + (seed % 7) as usize; // 4..=10
        let p = [0.2, 0.4, 0.6][(seed % 3) as usize];
        let g = random_graph(1000 + seed, n, p);
        let mut got: Vec<[usize; 4]> = list_global(&g, None).iter().map(|s| s.nodes).collect();
        got.sort();
        assert_eq!(got, reference_listing(&g), "seed {}", seed);
    }
}

#[test]
fn near_listing_is_the_global_listing_filtered_by_pair() {
    for seed in 0..30u64 {
        let n = 5 + (seed % 4) as usize;
        let g = random_graph(2000 + seed, n, 0.45);
        let global = list_global(&g, None);
        for p in VertexPair::all_pairs(n) {
            let mut expected: Vec<[usize; 4]> = global
                .iter()
                .filter(|s| s.contains_pair(p))
                .map(|s| s.nodes)
                .collect();
            expected.sort();
            let mut got: Vec<[usize; 4]> =
                list_near(&g, p, None, true).iter().map(|s| s.nodes).collect();
            got.sort();
            assert_eq!(got, expected, "seed {} pair {:?}", seed, p);
        }
    }
}

#[test]
fn counter_total_is_zero_exactly_on_quasi_threshold_graphs() {
    let mut zeros = 0;
    for seed in 0..120u64 {
        let n = 4 + (seed % 4) as usize;
        let g = random_graph(3000 + seed, n, 0.5);
        let total = PairCounters::new(&g).total();
        assert_eq!(total == 0, is_quasi_threshold(&g), "seed {}", seed);
        if total == 0 {
            zeros += 1;
        }
    }
    assert!(zeros > 0, "corpus should contain some already-QT graphs");
}

#[test]
fn solver_agrees_with_exhaustive_search_on_a_quick_sample() {
    // the full sweep over bounds, branchings and thread counts is part of
    // the acceptance suite; this is the fast default-config smoke version
    let cfg = SearchConfig {
        all_solutions: true,
        ..SearchConfig::default()
    };
    for (seed, g) in corpus(30) {
        let (k_ref, sols_ref) = brute_force_optimum(&g, 4).expect("n <= 7 needs <= 4 edits");
        let r = solve(&g, &cfg);
        assert_eq!(r.k_opt, Some(k_ref), "seed {}", seed);
        let mut got: Vec<Vec<VertexPair>> = r
            .solutions
            .iter()
            .map(|sol| sol.iter().map(|e| e.pair).collect())
            .collect();
        got.sort();
        assert_eq!(got, sols_ref, "seed {}", seed);
    }
}

#[test]
fn every_reported_solution_edits_the_graph_into_a_qt_graph() {
    let cfg = SearchConfig {
        all_solutions: true,
        ..SearchConfig::default()
    };
    for (seed, g) in corpus(40) {
        let r = solve(&g, &cfg);
        for sol in &r.solutions {
            let mut h = g.clone();
            for e in sol {
                let applied = h.toggle_edge(e.pair);
                assert_eq!(applied.kind, e.kind, "seed {}", seed);
            }
            assert!(is_quasi_threshold(&h), "seed {}", seed);
        }
    }
}

#[test]
fn node_relabeling_does_not_change_the_optimum() {
    let cfg = SearchConfig::default();
    for seed in 0..12u64 {
        let g = random_graph(4000 + seed, 8, 0.4);
        let base = solve(&g, &cfg).k_opt;
        for perm_seed in 1..4u64 {
            let (h, _) = g.permute_nodes(perm_seed);
            assert_eq!(solve(&h, &cfg).k_opt, base, "seed {} perm {}", seed, perm_seed);
        }
    }
}

#[test]
fn toggle_edge_is_an_involution() {
    for seed in 0..20u64 {
        let g = random_graph(5000 + seed, 9, 0.5);
        let mut h = g.clone();
        for p in VertexPair::all_pairs(9) {
            let first = h.toggle_edge(p);
            let second = h.toggle_edge(p);
            assert_ne!(first.kind, second.kind);
        }
        assert_eq!(g, h);
        assert!(h.check_invariants());
    }
}
