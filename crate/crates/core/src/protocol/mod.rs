//! The `k`-party one-way robust communication model and the EDCS protocol.
//!
//! Edges are assigned uniformly at random to parties `0..k`. Party 0 keeps
//! each of its edges as a sample with probability `ε/(1 - p)`, builds a
//! subgraph `H` of bounded edge-degree from the sample, and sends `H` plus
//! its underfull non-sampled edges to party 1. Every middle party appends its
//! own underfull edges. The last party outputs a maximum matching of its own
//! edges together with the received message.
//!
//! One edge counts as one word. Bytes are reported as 8 per edge (two `u32`
//! vertex ids).

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::edcs::{build_bounded_subgraph, underfull_edges, EdcsError, EdcsParams};
use crate::graph::{EdgeId, EdgeSubset, Graph, Matching};
use crate::matchers::{matching_number, maximum_matching_in};
use crate::rng::{stream, stream_rng};

mod concentration;
mod partition;

pub use concentration::{concentration_slack, ConcentrationSummary, SelfBoundingCheck, SelfBoundingFunction};
pub use partition::{partition_edges, EdgePartition};

pub const BYTES_PER_EDGE: u64 = 8;

#[derive(Debug, Error, PartialEq)]
pub enum ProtocolError {
    #[error(transparent)]
    Params(#[from] EdcsError),
    #[error("need at least two parties, got {0}")]
    TooFewParties(usize),
    #[error("two-party run requested with k = {0}")]
    NotTwoParty(usize),
    #[error("p must lie in (0, 1/2], got {0}")]
    BadP(f64),
    #[error("injected H names edge {0}, which is not in the graph")]
    UnknownInjectedEdge(EdgeId),
}

/// When party 0 gives up on sparsifying and forwards all of its edges.
///
/// The rule sees only the party's local edge count and `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum FallbackRule {
    Never,
    /// Fires when the local edge count is at most the given value.
    Threshold { edges: u64 },
    /// Fires when the local edge count is at most `c·n·log₂ n`.
    NLogN { coefficient: f64 },
}

impl Default for FallbackRule {
    fn default() -> Self {
        FallbackRule::NLogN { coefficient: 4.0 }
    }
}

impl FallbackRule {
    pub fn threshold(&self, n: usize) -> Option<u64> {
        match *self {
            FallbackRule::Never => None,
            FallbackRule::Threshold { edges } => Some(edges),
            FallbackRule::NLogN { coefficient } => {
                let n = n as f64;
                let log = if n > 1.0 { n.log2() } else { 0.0 };
                Some((coefficient * n * log).floor() as u64)
            }
        }
    }

    pub fn fires(&self, local_edges: usize, n: usize) -> bool {
        self.threshold(n).is_some_and(|t| local_edges as u64 <= t)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub k: usize,
    pub params: EdcsParams,
    /// Overrides the default `p = 1/k`.
    pub p: Option<f64>,
    pub fallback: FallbackRule,
    /// Replaces the constructed `H`; underfull edges are then computed
    /// against it.
    pub injected_h: Option<Vec<EdgeId>>,
    pub seed: u64,
}

impl ProtocolConfig {
    pub fn new(k: usize, params: EdcsParams, seed: u64) -> Self {
        Self {
            k,
            params,
            p: None,
            fallback: FallbackRule::default(),
            injected_h: None,
            seed,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn effective_p(&self) -> f64 {
        self.p.unwrap_or(1.0 / self.k as f64)
    }

    /// Per-edge sampling rate for party 0: `ε/(1 - p)`.
    pub fn sample_rate(&self) -> f64 {
        self.params.epsilon / (1.0 - self.effective_p())
    }

    pub fn validate(&self, g: &Graph) -> Result<(), ProtocolError> {
        if self.k < 2 {
            return Err(ProtocolError::TooFewParties(self.k));
        }
        let p = self.effective_p();
        if !(p > 0.0 && p <= 0.5) {
            return Err(ProtocolError::BadP(p));
        }
        self.params.validate()?;
        if let Some(h) = &self.injected_h {
            if let Some(&e) = h.iter().find(|e| !g.contains_edge(**e)) {
                return Err(ProtocolError::UnknownInjectedEdge(e));
            }
        }
        Ok(())
    }
}

/// Size of the message sent from party `from` to party `from + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageSize {
    pub from: usize,
    pub edges: u64,
    pub bytes: u64,
}

/// Full record of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub seed: u64,
    pub k: usize,
    pub p: f64,
    pub params: EdcsParams,
    pub num_vertices: usize,
    pub num_edges: usize,
    /// Party index per edge id.
    pub partition: Vec<u32>,
    pub sample: Vec<EdgeId>,
    pub h: Vec<EdgeId>,
    /// Edges each party adds to the message besides `H`: its underfull
    /// edges, or all of its edges when the fallback fired. The last entry
    /// is always empty.
    pub contributions: Vec<Vec<EdgeId>>,
    pub message_sizes: Vec<MessageSize>,
    pub output: Matching,
    pub output_size: usize,
    pub mu: usize,
    pub ratio: f64,
    pub fallback_used: bool,
    pub injected_h: bool,
    /// Steps of the local fixing process, absent when `H` was injected or
    /// the fallback fired.
    pub build_steps: Option<u64>,
}

impl Transcript {
    /// Edges available to the last party: its own plus the final message.
    pub fn accessible<'g>(&self, g: &'g Graph) -> EdgeSubset<'g> {
        let last = (self.k - 1) as u32;
        let mut acc = EdgeSubset::from_predicate(g, |e| self.partition[e.index()] == last);
        for e in self.h.iter().chain(self.contributions.iter().flatten()) {
            acc.insert(*e);
        }
        acc
    }

    pub fn party_edges<'g>(&self, g: &'g Graph, party: usize) -> EdgeSubset<'g> {
        EdgeSubset::from_predicate(g, |e| self.partition[e.index()] as usize == party)
    }

    pub fn underfull_total(&self) -> usize {
        self.contributions.iter().map(Vec::len).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommunicationCost {
    pub max_words: u64,
    pub max_bytes: u64,
    pub per_hop: Vec<MessageSize>,
}

/// The model's cost `max_i |m_i|`, with one edge per word.
pub fn communication_cost(t: &Transcript) -> CommunicationCost {
    let max_words = t.message_sizes.iter().map(|m| m.edges).max().unwrap_or(0);
    CommunicationCost {
        max_words,
        max_bytes: max_words * BYTES_PER_EDGE,
        per_hop: t.message_sizes.clone(),
    }
}

/// Runs the protocol repeatedly on one graph, computing `μ(G)` once.
pub struct ProtocolRunner<'g> {
    graph: &'g Graph,
    mu: usize,
}

impl<'g> ProtocolRunner<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self {
            graph,
            mu: matching_number(graph),
        }
    }

    /// Reuses a known `μ(G)`.
    pub fn with_mu(graph: &'g Graph, mu: usize) -> Self {
        Self { graph, mu }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn run(&self, cfg: &ProtocolConfig) -> Result<Transcript, ProtocolError> {
        let g = self.graph;
        cfg.validate(g)?;
        let k = cfg.k;
        let partition = partition_edges(g, k, cfg.seed);
        let parties: Vec<EdgeSubset<'g>> = (0..k).map(|i| partition.party_edges(i)).collect();
        let fallback_used = cfg.fallback.fires(parties[0].len(), g.num_vertices());

        let mut sample = EdgeSubset::empty(g);
        let mut h = EdgeSubset::empty(g);
        let mut contributions: Vec<EdgeSubset<'g>> = Vec::with_capacity(k);
        let mut build_steps = None;
        if fallback_used {
            contributions.extend(parties[..k - 1].iter().cloned());
        } else {
            let rate = cfg.sample_rate();
            let mut rng = stream_rng(cfg.seed, stream::SAMPLE);
            for e in parties[0].iter() {
                if rng.random_bool(rate) {
                    sample.insert(e);
                }
            }
            match &cfg.injected_h {
                Some(ids) => {
                    h = EdgeSubset::from_ids(g, ids.iter().copied()).expect("validated above");
                }
                None => {
                    let mut rng = stream_rng(cfg.seed, stream::CONSTRUCTION);
                    let built = build_bounded_subgraph(&sample, &cfg.params, &mut rng);
                    build_steps = Some(built.steps);
                    h = built.edges;
                }
            }
            let threshold = cfg.params.underfull_threshold();
            let first = parties[0].difference(&sample).difference(&h);
            contributions.push(underfull_edges(&first, &h, threshold)?);
            for part in &parties[1..k - 1] {
                contributions.push(underfull_edges(&part.difference(&h), &h, threshold)?);
            }
        }
        contributions.push(EdgeSubset::empty(g));

        let mut message_sizes = Vec::with_capacity(k - 1);
        let mut words = h.len() as u64;
        for (from, c) in contributions[..k - 1].iter().enumerate() {
            words += c.len() as u64;
            message_sizes.push(MessageSize {
                from,
                edges: words,
                bytes: words * BYTES_PER_EDGE,
            });
        }

        let mut accessible = parties[k - 1].union(&h);
        for c in &contributions {
            accessible = accessible.union(c);
        }
        let output = maximum_matching_in(&accessible);
        assert!(output.is_within(&accessible), "output uses an inaccessible edge");
        let output_size = output.len();
        let ratio = if self.mu == 0 { 1.0 } else { output_size as f64 / self.mu as f64 };

        Ok(Transcript {
            seed: cfg.seed,
            k,
            p: cfg.effective_p(),
            params: cfg.params,
            num_vertices: g.num_vertices(),
            num_edges: g.num_edges(),
            partition: partition.owners().to_vec(),
            sample: sample.ids(),
            h: h.ids(),
            contributions: contributions.iter().map(EdgeSubset::ids).collect(),
            message_sizes,
            output,
            output_size,
            mu: self.mu,
            ratio,
            fallback_used,
            injected_h: cfg.injected_h.is_some(),
            build_steps,
        })
    }
}

pub fn run_two_party(g: &Graph, cfg: &ProtocolConfig) -> Result<Transcript, ProtocolError> {
    if cfg.k != 2 {
        return Err(ProtocolError::NotTwoParty(cfg.k));
    }
    ProtocolRunner::new(g).run(cfg)
}

pub fn run_k_party(g: &Graph, cfg: &ProtocolConfig) -> Result<Transcript, ProtocolError> {
    ProtocolRunner::new(g).run(cfg)
}
