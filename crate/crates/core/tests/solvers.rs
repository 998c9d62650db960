mod common;

use common::{arb_bipartite, arb_graph, subset_dp_matching_number};
use edcs_core::matchers::{
    check_blossom_inequalities, max_matching_bipartite, max_matching_bruteforce, max_matching_general,
    FractionalMatching,
};
use edcs_core::{EdgeId, Graph, Matching};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn blossom_and_bruteforce_match_subset_dp(g in arb_graph(12)) {
        let expected = subset_dp_matching_number(&g);
        let blossom = max_matching_general(&g);
        prop_assert_eq!(blossom.len(), expected);
        prop_assert!(Matching::new(&g, blossom.edges().iter().copied()).is_ok());
        prop_assert_eq!(max_matching_bruteforce(&g).unwrap().len(), expected);
    }

    #[test]
    fn hopcroft_karp_matches_dp_and_koenig(g in arb_bipartite(7)) {
        let r = max_matching_bipartite(&g).unwrap();
        prop_assert_eq!(r.matching.len(), subset_dp_matching_number(&g));
        prop_assert_eq!(r.cover.len(), r.matching.len());
        prop_assert!(edcs_core::EdgeSubset::full(&g).is_vertex_cover(&r.cover));
    }

    #[test]
    fn degree_sum_is_twice_edges(g in arb_graph(14)) {
        let s: usize = (0..g.num_vertices()).map(|v| g.degree(v)).sum();
        prop_assert_eq!(s, 2 * g.num_edges());
    }

    #[test]
    fn matching_is_below_any_vertex_cover(g in arb_graph(10), pick in proptest::collection::vec(any::<bool>(), 10)) {
        let cover: Vec<usize> = (0..g.num_vertices()).filter(|&v| pick[v]).collect();
        if edcs_core::EdgeSubset::full(&g).is_vertex_cover(&cover) {
            prop_assert!(max_matching_general(&g).len() <= cover.len());
        }
    }

    #[test]
    fn adjacent_edges_are_not_a_matching(g in arb_graph(10)) {
        for v in 0..g.num_vertices() {
            let inc: Vec<EdgeId> = g.neighbors(v).map(|(_, e)| e).collect();
            if inc.len() >= 2 {
                prop_assert!(Matching::new(&g, inc).is_err());
            }
        }
    }

    #[test]
    fn convex_combinations_of_matchings_satisfy_blossom(
        g in arb_graph(9),
        seeds in proptest::collection::vec(any::<u64>(), 1..4),
    ) {
        // each component is a greedy matching over a shuffled edge order
        let m = g.num_edges();
        let mut w = vec![0.0; m];
        for s in &seeds {
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by_key(|&i| (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ s);
            let mut used = vec![false; g.num_vertices()];
            for i in order {
                let (u, v) = g.endpoints(EdgeId(i as u32));
                if !used[u] && !used[v] {
                    used[u] = true;
                    used[v] = true;
                    w[i] += 1.0 / seeds.len() as f64;
                }
            }
        }
        let x = FractionalMatching::new(&g, w.iter().map(|v| v.min(1.0)).collect()).unwrap();
        let rep = check_blossom_inequalities(&x, 7, 1e-9).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep.violations);
    }
}

#[test]
fn fixed_instances() {
    let petersen = Graph::new(
        10,
        [
            (0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            (5, 7), (7, 9), (6, 9), (6, 8), (5, 8),
        ],
    )
    .unwrap();
    assert_eq!(subset_dp_matching_number(&petersen), 5);
    assert_eq!(max_matching_general(&petersen).len(), 5);
    let k5 = Graph::new(5, (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j)))).unwrap();
    assert_eq!(max_matching_general(&k5).len(), 2);
}
