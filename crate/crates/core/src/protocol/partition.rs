use rand::Rng;

use crate::graph::{EdgeId, EdgeSubset, Graph};
use crate::rng::{stream, stream_rng};

/// Uniform i.i.d. assignment of every edge to one of `k` parties.
#[derive(Clone, Debug)]
pub struct EdgePartition<'g> {
    graph: &'g Graph,
    owner: Vec<u32>,
    k: usize,
    seed: u64,
}

/// Draws one party per edge, in edge-id order, from the partition stream of
/// `seed`.
pub fn partition_edges(g: &Graph, k: usize, seed: u64) -> EdgePartition<'_> {
    assert!(k >= 1, "need at least one party");
    let mut rng = stream_rng(seed, stream::PARTITION);
    let owner = (0..g.num_edges()).map(|_| rng.random_range(0..k as u32)).collect();
    EdgePartition { graph: g, owner, k, seed }
}

impl<'g> EdgePartition<'g> {
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn owner(&self, e: EdgeId) -> usize {
        self.owner[e.index()] as usize
    }

    /// Party index per edge id.
    pub fn owners(&self) -> &[u32] {
        &self.owner
    }

    pub fn party_edges(&self, party: usize) -> EdgeSubset<'g> {
        EdgeSubset::from_predicate(self.graph, |e| self.owner(e) == party)
    }

    pub fn party_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &p in &self.owner {
            sizes[p as usize] += 1;
        }
        sizes
    }
}
