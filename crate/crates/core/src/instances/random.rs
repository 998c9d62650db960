use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::rng::stream_rng;

use super::InstanceError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RandomFamily {
    /// Erdős–Rényi `G(n, p)`.
    Gnp,
    /// `G(n/2, n/2, p)` with left side `0..⌈n/2⌉`.
    BipartiteGnp,
    /// A uniformly random perfect matching on `2⌊n/2⌋` vertices plus
    /// `G(n, p)` noise.
    PlantedMatching,
}

/// Seeded random instance. `density` is the edge probability.
pub fn gen_random(family: RandomFamily, n: usize, density: f64, seed: u64) -> Result<Graph, InstanceError> {
    if !(0.0..=1.0).contains(&density) {
        return Err(InstanceError::BadDensity(density));
    }
    let mut rng = stream_rng(seed, 0);
    let graph = match family {
        RandomFamily::Gnp => Graph::new(n, gnp_pairs(n, density, &mut rng)),
        RandomFamily::BipartiteGnp => {
            let left = n.div_ceil(2);
            let right = n - left;
            let edges = skip_sample((left * right) as u64, density, &mut rng)
                .into_iter()
                .map(|k| ((k / right as u64) as usize, left + (k % right as u64) as usize));
            let left_ids: Vec<usize> = (0..left).collect();
            Graph::bipartite(n, &left_ids, edges)
        }
        RandomFamily::PlantedMatching => {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let mut edges: Vec<(usize, usize)> = perm.chunks_exact(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect();
            edges.extend(gnp_pairs(n, density, &mut rng));
            edges.sort_unstable();
            edges.dedup();
            Graph::new(n, edges)
        }
    };
    Ok(graph.expect("generated edges are simple"))
}

// Pairs (i, j), i < j, each present independently with probability p.
fn gnp_pairs<R: Rng>(n: usize, p: f64, rng: &mut R) -> Vec<(usize, usize)> {
    let total = (n as u64) * (n as u64).saturating_sub(1) / 2;
    skip_sample(total, p, rng)
        .into_iter()
        .map(|k| unrank_pair(k, n))
        .collect()
}

// Indices in 0..total kept independently with probability p, drawn by
// geometric gap skipping so sparse graphs cost O(edges).
fn skip_sample<R: Rng>(total: u64, p: f64, rng: &mut R) -> Vec<u64> {
    if p <= 0.0 || total == 0 {
        return Vec::new();
    }
    if p >= 1.0 {
        return (0..total).collect();
    }
    let log_q = (1.0 - p).ln();
    let mut out = Vec::new();
    let mut k: u64 = 0;
    loop {
        let r: f64 = rng.random();
        let gap = ((1.0 - r).ln() / log_q).floor();
        if gap >= (total - k) as f64 {
            break;
        }
        k += gap as u64;
        out.push(k);
        k += 1;
        if k >= total {
            break;
        }
    }
    out
}

// Row-major rank over pairs (i, j) with i < j: row i holds n - 1 - i pairs.
fn unrank_pair(mut k: u64, n: usize) -> (usize, usize) {
    let mut i = 0usize;
    loop {
        let row = (n - 1 - i) as u64;
        if k < row {
            return (i, i + 1 + k as usize);
        }
        k -= row;
        i += 1;
    }
}
