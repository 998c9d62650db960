//! Exact maximum-cardinality matching solvers, an exhaustive oracle, and
//! fractional matchings with odd-set (blossom) inequality checking.
//!
//! All solvers are deterministic: where an algorithm is free to choose, it
//! scans vertices in increasing id order and incident edges in increasing
//! edge-id order, so the same graph always yields the same matching.

use thiserror::Error;

use crate::graph::{EdgeSubset, Graph, Matching};

mod bipartite;
mod blossom;
mod bruteforce;
mod fractional;

pub use bipartite::{max_matching_bipartite, BipartiteMatching};
pub use blossom::max_matching_general;
pub use bruteforce::{max_matching_bruteforce, max_matching_bruteforce_capped, DEFAULT_BRUTEFORCE_CAP};
pub use fractional::{
    check_blossom_inequalities, fractional_size, BlossomCheckReport, FractionalError, FractionalMatching,
    OddSetViolation, DEFAULT_S_MAX, MAX_S_MAX,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatchError {
    #[error("graph carries no bipartition labels")]
    NotBipartite,
    #[error("{edges} edges exceeds the exhaustive-search cap of {cap}")]
    TooManyEdges { edges: usize, cap: usize },
}

/// Maximum matching of `g`, using Hopcroft-Karp when the graph carries a
/// bipartition and the blossom algorithm otherwise.
pub fn maximum_matching(g: &Graph) -> Matching {
    if g.is_bipartite_labeled() {
        max_matching_bipartite(g)
            .expect("labeled graph is bipartite")
            .matching
    } else {
        max_matching_general(g)
    }
}

/// Maximum matching restricted to the edges of `subset`, expressed in the
/// parent graph's edge ids.
pub fn maximum_matching_in(subset: &EdgeSubset<'_>) -> Matching {
    let (sub, back) = subset.graph().spanning_subgraph(subset);
    maximum_matching(&sub).lift(&back)
}

/// Size of a maximum matching of `g`.
pub fn matching_number(g: &Graph) -> usize {
    maximum_matching(g).len()
}
