use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, EdgeSubset, Graph};

use super::InstanceError;

/// Layout of a layered bipartite instance.
///
/// Left groups `A_1..A_g` occupy vertices `0..g·m` in order and right groups
/// `B_1..B_g` follow at `g·m..2g·m`. Each `G[A_i, B_i]` is a perfect matching
/// `M_i` and each `G[A_j, B_{j+1}]` is a complete bipartite block `K_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredSpec {
    pub groups: usize,
    pub m: usize,
    /// 1-based `i` with `G[A_i, B_i]` a perfect matching.
    pub matchings: Vec<usize>,
    /// 1-based `(i, j)` with `G[A_i, B_j]` complete.
    pub complete: Vec<(usize, usize)>,
}

impl LayeredSpec {
    pub fn new(groups: usize, m: usize) -> Self {
        Self {
            groups,
            m,
            matchings: (1..=groups).collect(),
            complete: (1..groups).map(|j| (j, j + 1)).collect(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        2 * self.groups * self.m
    }

    /// Vertices of `A_i` (1-based).
    pub fn a(&self, i: usize) -> Range<usize> {
        assert!((1..=self.groups).contains(&i));
        (i - 1) * self.m..i * self.m
    }

    /// Vertices of `B_i` (1-based).
    pub fn b(&self, i: usize) -> Range<usize> {
        assert!((1..=self.groups).contains(&i));
        let off = self.groups * self.m;
        off + (i - 1) * self.m..off + i * self.m
    }

    pub fn left(&self) -> Range<usize> {
        0..self.groups * self.m
    }

    /// Edge ids of the perfect matching `M_i`.
    pub fn matching_edges(&self, g: &Graph, i: usize) -> Vec<EdgeId> {
        self.a(i)
            .zip(self.b(i))
            .map(|(u, v)| g.edge_id(u, v).expect("layer matching edge"))
            .collect()
    }

    /// Edge ids of the complete block `G[A_j, B_{j+1}]`.
    pub fn block_edges(&self, g: &Graph, j: usize) -> Vec<EdgeId> {
        self.a(j)
            .flat_map(|u| self.b(j + 1).map(move |v| (u, v)))
            .map(|(u, v)| g.edge_id(u, v).expect("complete block edge"))
            .collect()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for &i in &self.matchings {
            edges.extend(self.a(i).zip(self.b(i)));
        }
        for &(i, j) in &self.complete {
            for u in self.a(i) {
                edges.extend(self.b(j).map(|v| (u, v)));
            }
        }
        edges
    }
}

#[derive(Clone, Debug)]
pub struct LayeredInstance {
    pub graph: Graph,
    pub spec: LayeredSpec,
}

fn layered(groups: usize, m: usize) -> Result<LayeredInstance, InstanceError> {
    if m == 0 {
        return Err(InstanceError::EmptyGroups);
    }
    let spec = LayeredSpec::new(groups, m);
    let left: Vec<usize> = spec.left().collect();
    let graph = Graph::bipartite(spec.num_vertices(), &left, spec.edges()).expect("layered construction is simple and bipartite");
    Ok(LayeredInstance { graph, spec })
}

/// Three groups per side: `M_1, M_2, M_3` perfect matchings, `K_1 = A_1×B_2`
/// and `K_2 = A_2×B_3` complete. `3m + 2m²` edges, perfect matching of size `3m`.
pub fn gen_three_layer(m: usize) -> Result<LayeredInstance, InstanceError> {
    layered(3, m)
}

/// Four groups per side with `K_1, K_2, K_3` complete. `4m + 3m²` edges.
pub fn gen_four_layer(m: usize) -> Result<LayeredInstance, InstanceError> {
    layered(4, m)
}

/// A `(β/2)`-regular subgraph of every complete block, built from the
/// circulant `(A_j[i], B_{j+1}[(i + s) mod m])` for `s < β/2`.
///
/// Every `H`-edge then has edge-degree exactly `β`. When `parties` is given
/// for a three-group instance, `β ≤ |V|/(12k)` is enforced as well.
pub fn adversarial_h<'g>(
    g: &'g Graph,
    spec: &LayeredSpec,
    beta: u64,
    parties: Option<usize>,
) -> Result<EdgeSubset<'g>, InstanceError> {
    if beta == 0 || beta % 2 == 1 {
        return Err(InstanceError::OddBeta(beta));
    }
    let half = beta / 2;
    if half > spec.m as u64 {
        return Err(InstanceError::BetaTooLarge { half, m: spec.m });
    }
    if let (3, Some(k)) = (spec.groups, parties) {
        let limit = spec.num_vertices() as f64 / (12.0 * k as f64);
        if beta as f64 > limit {
            return Err(InstanceError::BetaExceedsPartyBound { beta, limit });
        }
    }
    let mut h = EdgeSubset::empty(g);
    for &(i, j) in &spec.complete {
        let (a, b) = (spec.a(i), spec.b(j));
        for r in 0..spec.m {
            for s in 0..half as usize {
                let u = a.start + r;
                let v = b.start + (r + s) % spec.m;
                h.insert(g.edge_id(u, v).expect("block edge"));
            }
        }
    }
    Ok(h)
}
