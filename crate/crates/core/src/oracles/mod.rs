//! Executable versions of the analysis objects: the peeling fractional
//! matching `x`, the randomized `ŷ`/`y` construction, and an exhaustive
//! check of the `|M| + ½ μ(G - V(M))` bound.

use thiserror::Error;

use crate::edcs::underfull_edges;
use crate::graph::{EdgeId, EdgeSubset, Graph};
use crate::protocol::Transcript;

mod augment;
mod peeling;
mod yhat;

pub use augment::{verify_augment_bound, AugmentBound, AUGMENT_EDGE_CAP};
pub use peeling::{build_x, PeelingTrace, PeelingViolation};
pub use yhat::{
    enumerate_expected_yhat_loads, expected_yhat_load, expected_yhat_load_exact, overflow_probability, sample_y,
    yhat_values, Scalar, YSample, MAX_ENUMERATED_MATCHING,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} = {size} exceeds the exhaustive-search cap {cap}")]
    TooLarge { what: &'static str, size: usize, cap: usize },
}

/// The edge sets the analysis conditions on, recovered from a transcript.
#[derive(Clone, Debug)]
pub struct AnalysisSets<'g> {
    pub h: EdgeSubset<'g>,
    /// Underfull edges of all of `E_r \ H`, not only the forwarded ones.
    pub u: EdgeSubset<'g>,
    /// `E_r = E \ E_s`.
    pub e_r: EdgeSubset<'g>,
    /// The last party's own edges.
    pub e_b: EdgeSubset<'g>,
    /// Edges the last party can use.
    pub accessible: EdgeSubset<'g>,
}

impl<'g> AnalysisSets<'g> {
    pub fn from_transcript(g: &'g Graph, t: &Transcript) -> Self {
        let ids = |v: &[EdgeId]| EdgeSubset::from_ids(g, v.iter().copied()).expect("transcript edges exist");
        let h = ids(&t.h);
        let e_r = EdgeSubset::full(g).difference(&ids(&t.sample));
        let u = underfull_edges(&e_r.difference(&h), &h, t.params.underfull_threshold()).expect("disjoint from H");
        Self {
            e_b: t.party_edges(g, t.k - 1),
            accessible: t.accessible(g),
            h,
            u,
            e_r,
        }
    }
}
