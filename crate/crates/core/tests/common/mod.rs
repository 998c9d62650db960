#![allow(dead_code)]

use edcs_core::Graph;
use proptest::prelude::*;

/// Maximum matching size by memoised recursion over vertex subsets.
/// Independent of every library solver; use only for `n ≤ 16`.
pub fn subset_dp_matching_number(g: &Graph) -> usize {
    let n = g.num_vertices();
    assert!(n <= 16);
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).fold(0u32, |m, (w, _)| m | 1 << w))
        .collect();
    let mut memo = vec![u8::MAX; 1 << n];
    fn go(mask: u32, adj: &[u32], memo: &mut [u8]) -> u8 {
        if mask == 0 {
            return 0;
        }
        if memo[mask as usize] != u8::MAX {
            return memo[mask as usize];
        }
        let v = mask.trailing_zeros();
        let rest = mask & !(1 << v);
        let mut best = go(rest, adj, memo);
        let mut cand = adj[v as usize] & rest;
        while cand != 0 {
            let w = cand.trailing_zeros();
            cand &= cand - 1;
            best = best.max(1 + go(rest & !(1 << w), adj, memo));
        }
        memo[mask as usize] = best;
        best
    }
    go(((1u64 << n) - 1) as u32, &adj, &mut memo) as usize
}

/// Random simple graph on `2..=max_n` vertices.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..(n * (n - 1) / 2).min(40)).prop_map(move |raw| {
            let mut edges: Vec<(usize, usize)> = raw
                .into_iter()
                .filter(|(u, v)| u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            edges.sort_unstable();
            edges.dedup();
            Graph::new(n, edges).unwrap()
        })
    })
}

/// Random bipartite graph with left side `0..l`.
pub fn arb_bipartite(max_side: usize) -> impl Strategy<Value = Graph> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(l, r)| {
        proptest::collection::vec((0..l, 0..r), 0..(l * r).min(40)).prop_map(move |raw| {
            let mut edges: Vec<(usize, usize)> = raw.into_iter().map(|(u, v)| (u, l + v)).collect();
            edges.sort_unstable();
            edges.dedup();
            let left: Vec<usize> = (0..l).collect();
            Graph::bipartite(l + r, &left, edges).unwrap()
        })
    })
}
