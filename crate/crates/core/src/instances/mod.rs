//! Instance families: the layered tight examples with an adversarial `H`,
//! and seeded random graphs for benchmarking.

use serde::{Deserialize, Serialize};
use thiserror::Error;

mod layered;
mod random;

pub use layered::{adversarial_h, gen_four_layer, gen_three_layer, LayeredInstance, LayeredSpec};
pub use random::{gen_random, RandomFamily};

#[derive(Debug, Error, PartialEq)]
pub enum InstanceError {
    #[error("group size must be at least 1")]
    EmptyGroups,
    #[error("beta must be a positive even number, got {0}")]
    OddBeta(u64),
    #[error("beta/2 = {half} exceeds the group size {m}")]
    BetaTooLarge { half: u64, m: usize },
    #[error("beta = {beta} exceeds |V|/(12k) = {limit:.3}")]
    BetaExceedsPartyBound { beta: u64, limit: f64 },
    #[error("density {0} outside [0, 1]")]
    BadDensity(f64),
}

/// JSON sidecar written next to an edge-list file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceMeta {
    Layered(LayeredSpec),
    Random {
        family: RandomFamily,
        n: usize,
        density: f64,
        seed: u64,
    },
}
