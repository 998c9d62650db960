//! An EDCS-based protocol for maximum matching in the k-party
//! one-way robust communication model, together with exact matching
//! solvers, the tight instance families, and executable versions of the
//! fractional-matching constructions used to analyse the protocol.

pub mod edcs;
pub mod graph;
pub mod instances;
pub mod matchers;
pub mod oracles;
pub mod protocol;
pub mod rng;

pub use graph::{EdgeId, EdgeSubset, Graph, GraphError, Matching, Side};
