use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, Matching};

/// Default largest odd-set size examined by [`check_blossom_inequalities`].
pub const DEFAULT_S_MAX: usize = 7;
/// Largest supported odd-set size; enumeration is exponential in it.
pub const MAX_S_MAX: usize = 9;

// Absolute slack on floating-point comparisons of set weights.
const FLOAT_SLACK: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum FractionalError {
    #[error("expected {expected} edge weights, got {got}")]
    Length { expected: usize, got: usize },
    #[error("weight {weight} of edge {edge} is outside [0, 1]")]
    OutOfRange { edge: EdgeId, weight: f64 },
    #[error("odd-set size limit {0} outside [3, {MAX_S_MAX}]")]
    SetSizeLimit(usize),
}

/// Edge weights in `[0, 1]` over a parent graph, with cached vertex loads.
#[derive(Clone, Debug)]
pub struct FractionalMatching<'g> {
    graph: &'g Graph,
    weights: Vec<f64>,
    loads: Vec<f64>,
}

impl<'g> FractionalMatching<'g> {
    pub fn new(graph: &'g Graph, weights: Vec<f64>) -> Result<Self, FractionalError> {
        if weights.len() != graph.num_edges() {
            return Err(FractionalError::Length {
                expected: graph.num_edges(),
                got: weights.len(),
            });
        }
        if let Some((i, &w)) = weights
            .iter()
            .enumerate()
            .find(|(_, &w)| !(0.0..=1.0).contains(&w))
        {
            return Err(FractionalError::OutOfRange {
                edge: EdgeId(i as u32),
                weight: w,
            });
        }
        let loads = compute_loads(graph, &weights);
        Ok(Self { graph, weights, loads })
    }

    pub fn zero(graph: &'g Graph) -> Self {
        Self {
            graph,
            weights: vec![0.0; graph.num_edges()],
            loads: vec![0.0; graph.num_vertices()],
        }
    }

    /// Indicator vector of an integral matching.
    pub fn from_matching(graph: &'g Graph, m: &Matching) -> Self {
        let mut w = vec![0.0; graph.num_edges()];
        for &e in m.edges() {
            w[e.index()] = 1.0;
        }
        Self::new(graph, w).expect("indicator weights are in range")
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    #[inline]
    pub fn weight(&self, e: EdgeId) -> f64 {
        self.weights[e.index()]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Cached `x_v`, the total weight on edges at `v`.
    #[inline]
    pub fn load(&self, v: usize) -> f64 {
        self.loads[v]
    }

    pub fn loads(&self) -> &[f64] {
        &self.loads
    }

    /// Loads recomputed from scratch; used to audit the cache.
    pub fn recompute_loads(&self) -> Vec<f64> {
        compute_loads(self.graph, &self.weights)
    }

    pub fn max_load(&self) -> f64 {
        self.loads.iter().copied().fold(0.0, f64::max)
    }

    pub fn support(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(i, _)| EdgeId(i as u32))
    }

    pub fn size(&self) -> f64 {
        fractional_size(self)
    }
}

fn compute_loads(graph: &Graph, weights: &[f64]) -> Vec<f64> {
    let mut loads = vec![0.0; graph.num_vertices()];
    for (i, &w) in weights.iter().enumerate() {
        let (u, v) = graph.endpoints(EdgeId(i as u32));
        loads[u] += w;
        loads[v] += w;
    }
    loads
}

/// `Σ_e x_e`.
pub fn fractional_size(x: &FractionalMatching<'_>) -> f64 {
    x.weights.iter().sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OddSetViolation {
    pub vertices: Vec<usize>,
    pub weight: f64,
    /// `weight - floor(|S| / 2)`.
    pub excess: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlossomCheckReport {
    pub s_max: usize,
    pub tolerance: f64,
    pub sets_examined: u64,
    /// Whether the load-slack pruning rule was active (all loads ≤ 1).
    pub pruned: bool,
    pub violations: Vec<OddSetViolation>,
}

impl BlossomCheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Reports every odd vertex set `S` with `3 ≤ |S| ≤ s_max` and
/// `Σ_{e ∈ G[S]} x_e > ⌊|S|/2⌋ + tolerance`, among sets that are connected
/// in the support of `x`.
///
/// Restricting to connected sets loses nothing when every load is at most
/// one. Split a disconnected violator into its support components: an even
/// component `T` carries at most `|T|/2` (each edge of `G[T]` spends weight
/// at two vertices of `T`), and since `|S|` is odd exactly the odd
/// components share the remaining budget, so one odd component must itself
/// exceed its bound by more than `tolerance`.
///
/// Sets are grown by exclusive-neighbourhood extension from their smallest
/// vertex, so each connected set is visited once. When all loads are at
/// most one, a set `S` has weight `(Σ_{v∈S} x_v - x(δ(S))) / 2`, hence no
/// superset of `S` can violate once `Σ_{v∈S} (1 - x_v) ≥ 1 - 2·tolerance`,
/// and such branches are cut.
pub fn check_blossom_inequalities(
    x: &FractionalMatching<'_>,
    s_max: usize,
    tolerance: f64,
) -> Result<BlossomCheckReport, FractionalError> {
    if !(3..=MAX_S_MAX).contains(&s_max) {
        return Err(FractionalError::SetSizeLimit(s_max));
    }
    let g = x.graph;
    let n = g.num_vertices();
    let mut support: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in x.support() {
        let (u, v) = g.endpoints(e);
        let w = x.weight(e);
        support[u].push((v, w));
        support[v].push((u, w));
    }
    let prune = x.loads.iter().all(|&l| l <= 1.0 + FLOAT_SLACK);
    let mut search = SetSearch {
        support: &support,
        loads: &x.loads,
        s_max,
        tolerance,
        prune,
        in_set: vec![false; n],
        // counts how many set members a vertex is adjacent to (or is)
        near: vec![0; n],
        set: Vec::with_capacity(s_max),
        examined: 0,
        violations: Vec::new(),
    };
    for v in 0..n {
        if support[v].is_empty() {
            continue;
        }
        search.enter(v);
        let ext: Vec<usize> = support[v].iter().map(|&(w, _)| w).filter(|&w| w > v).collect();
        search.extend(v, ext, 0.0, 1.0 - x.loads[v]);
        search.leave(v);
    }
    let mut violations = search.violations;
    violations.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    Ok(BlossomCheckReport {
        s_max,
        tolerance,
        sets_examined: search.examined,
        pruned: prune,
        violations,
    })
}

struct SetSearch<'a> {
    support: &'a [Vec<(usize, f64)>],
    loads: &'a [f64],
    s_max: usize,
    tolerance: f64,
    prune: bool,
    in_set: Vec<bool>,
    near: Vec<u32>,
    set: Vec<usize>,
    examined: u64,
    violations: Vec<OddSetViolation>,
}

impl SetSearch<'_> {
    fn enter(&mut self, v: usize) {
        self.in_set[v] = true;
        self.set.push(v);
        self.near[v] += 1;
        for &(w, _) in &self.support[v] {
            self.near[w] += 1;
        }
    }

    fn leave(&mut self, v: usize) {
        self.in_set[v] = false;
        self.set.pop();
        self.near[v] -= 1;
        for &(w, _) in &self.support[v] {
            self.near[w] -= 1;
        }
    }

    fn extend(&mut self, root: usize, mut ext: Vec<usize>, weight: f64, slack: f64) {
        self.examined += 1;
        let size = self.set.len();
        if size >= 3 && size % 2 == 1 {
            let bound = (size / 2) as f64;
            if weight > bound + self.tolerance + FLOAT_SLACK {
                let mut vertices = self.set.clone();
                vertices.sort_unstable();
                self.violations.push(OddSetViolation {
                    vertices,
                    weight,
                    excess: weight - bound,
                });
            }
        }
        if size == self.s_max {
            return;
        }
        if self.prune && slack >= 1.0 - 2.0 * self.tolerance - FLOAT_SLACK {
            return;
        }
        while let Some(w) = ext.pop() {
            let gain: f64 = self.support[w]
                .iter()
                .filter(|&&(u, _)| self.in_set[u])
                .map(|&(_, x)| x)
                .sum();
            // exclusive neighbours of w: not in the set and not adjacent to it
            let mut next = ext.clone();
            next.extend(
                self.support[w]
                    .iter()
                    .map(|&(u, _)| u)
                    .filter(|&u| u > root && self.near[u] == 0),
            );
            self.enter(w);
            self.extend(root, next, weight + gain, slack + (1.0 - self.loads[w]));
            self.leave(w);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn rejects_out_of_range_weights() {
        let g = triangle();
        assert!(matches!(
            FractionalMatching::new(&g, vec![0.5, 1.5, 0.0]),
            Err(FractionalError::OutOfRange { .. })
        ));
        assert!(matches!(
            FractionalMatching::new(&g, vec![0.5]),
            Err(FractionalError::Length { .. })
        ));
    }

    #[test]
    fn sizes() {
        let g = triangle();
        assert_eq!(FractionalMatching::zero(&g).size(), 0.0);
        let m = Matching::new(&g, [EdgeId(1)]).unwrap();
        assert_eq!(FractionalMatching::from_matching(&g, &m).size(), 1.0);
    }

    #[test]
    fn half_triangle_violates_with_excess_half() {
        let g = triangle();
        let x = FractionalMatching::new(&g, vec![0.5; 3]).unwrap();
        let r = check_blossom_inequalities(&x, 3, 0.0).unwrap();
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].vertices, vec![0, 1, 2]);
        assert!((r.violations[0].excess - 0.5).abs() < 1e-12);
        // tolerance above the excess silences it
        assert!(check_blossom_inequalities(&x, 3, 0.6).unwrap().passed());
    }

    #[test]
    fn integral_matching_never_violates() {
        let g = Graph::new(7, (0..7).map(|i| (i, (i + 1) % 7))).unwrap();
        let m = Matching::new(&g, [EdgeId(0), EdgeId(3), EdgeId(5)]).unwrap();
        let x = FractionalMatching::from_matching(&g, &m);
        for s in [3, 5, 7] {
            assert!(check_blossom_inequalities(&x, s, 0.0).unwrap().passed());
        }
    }

    #[test]
    fn set_size_limit_validated() {
        let g = triangle();
        let x = FractionalMatching::zero(&g);
        assert_eq!(
            check_blossom_inequalities(&x, 2, 0.0).unwrap_err(),
            FractionalError::SetSizeLimit(2)
        );
        assert_eq!(
            check_blossom_inequalities(&x, 10, 0.0).unwrap_err(),
            FractionalError::SetSizeLimit(10)
        );
    }

    #[test]
    fn enumerates_each_connected_set_once() {
        // K4 has 4 connected 3-sets; with pruning off (loads 1.5) every
        // one of them is examined exactly once.
        let g = Graph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let x = FractionalMatching::new(&g, vec![0.5; 6]).unwrap();
        let r = check_blossom_inequalities(&x, 3, 0.0).unwrap();
        assert!(!r.pruned);
        // 4 singletons + 6 pairs + 4 triples
        assert_eq!(r.sets_examined, 14);
        assert_eq!(r.violations.len(), 4);
    }
}
