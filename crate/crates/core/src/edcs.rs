//! Bounded edge-degree subgraphs and underfull-edge detection.
//!
//! For a subgraph `H`, the edge-degree of `(u, v)` is `d_H(u) + d_H(v)`.
//! `H` has bounded edge-degree `β` when every edge of `H` has edge-degree at
//! most `β`; an edge outside `H` is `(H, β, λ)`-underfull when its edge-degree
//! is strictly below `(1 - λ)β`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, EdgeSubset};

#[derive(Debug, Error, PartialEq)]
pub enum EdcsError {
    #[error("invalid EDCS parameters: {0}")]
    InvalidParams(String),
    #[error("candidate edge {0} already belongs to H")]
    Overlap(EdgeId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamMode {
    /// Parameters satisfy the preconditions of the `(2/3 - ε)` guarantee.
    Theory,
    /// Desk-scale parameters; guarantees are heuristic.
    Practical,
}

/// The `(ε, λ, β)` bundle shared by the protocol and the oracles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdcsParams {
    pub epsilon: f64,
    pub lambda: f64,
    pub beta: u64,
    pub mode: ParamMode,
}

impl EdcsParams {
    /// Requires `λ ≤ ε/384` and `β ≥ 50 λ⁻² ln(1/λ)`.
    pub fn theory(epsilon: f64, lambda: f64, beta: u64) -> Result<Self, EdcsError> {
        check_epsilon(epsilon)?;
        if !(lambda > 0.0 && lambda <= epsilon / 384.0) {
            return Err(EdcsError::InvalidParams(format!(
                "theory mode needs 0 < lambda <= epsilon/384 = {}, got {lambda}",
                epsilon / 384.0
            )));
        }
        let min_beta = 50.0 * lambda.powi(-2) * (1.0 / lambda).ln();
        if (beta as f64) < min_beta {
            return Err(EdcsError::InvalidParams(format!(
                "theory mode needs beta >= 50 lambda^-2 ln(1/lambda) = {min_beta:.0}, got {beta}"
            )));
        }
        Ok(Self {
            epsilon,
            lambda,
            beta,
            mode: ParamMode::Theory,
        })
    }

    /// Sanity checks only: `λ ∈ (0, 1)` and `β ≥ 4`.
    pub fn practical(epsilon: f64, lambda: f64, beta: u64) -> Result<Self, EdcsError> {
        check_epsilon(epsilon)?;
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(EdcsError::InvalidParams(format!("lambda must lie in (0, 1), got {lambda}")));
        }
        if beta < 4 {
            return Err(EdcsError::InvalidParams(format!("beta must be at least 4, got {beta}")));
        }
        Ok(Self {
            epsilon,
            lambda,
            beta,
            mode: ParamMode::Practical,
        })
    }

    /// Re-runs the validation for the recorded mode.
    pub fn validate(&self) -> Result<(), EdcsError> {
        match self.mode {
            ParamMode::Theory => Self::theory(self.epsilon, self.lambda, self.beta).map(|_| ()),
            ParamMode::Practical => Self::practical(self.epsilon, self.lambda, self.beta).map(|_| ()),
        }
    }

    pub fn is_heuristic(&self) -> bool {
        self.mode == ParamMode::Practical
    }

    /// The `(H, β, λ)` underfull rule: edge-degree `< (1 - λ)β`.
    pub fn underfull_threshold(&self) -> UnderfullThreshold {
        UnderfullThreshold::lambda(self.beta, self.lambda)
    }

    /// Number of peeling rounds: `max(1, ⌊λβ⌋)`.
    pub fn default_rounds(&self) -> usize {
        ((self.lambda * self.beta as f64).floor() as usize).max(1)
    }
}

fn check_epsilon(epsilon: f64) -> Result<(), EdcsError> {
    if epsilon > 0.0 && epsilon <= 0.5 {
        Ok(())
    } else {
        Err(EdcsError::InvalidParams(format!("epsilon must lie in (0, 1/2], got {epsilon}")))
    }
}

/// Underfull test on integer edge-degrees, resolved exactly.
///
/// Stores the largest edge-degree that still counts as underfull, so the
/// real-valued threshold `(1 - λ)β` is compared without rounding drift.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnderfullThreshold {
    max_degree: Option<u64>,
}

impl UnderfullThreshold {
    /// Edge-degree strictly below `(1 - λ)β`, with `λ` taken as the exact
    /// binary value of the float.
    pub fn lambda(beta: u64, lambda: f64) -> Self {
        let lam = BigRational::from_float(lambda).expect("finite lambda");
        let bound = (BigRational::one() - lam) * BigRational::from_integer(BigInt::from(beta));
        // largest integer strictly below `bound` is ceil(bound) - 1
        let top = bound.ceil().to_integer() - BigInt::one();
        let max_degree = if top < BigInt::zero() { None } else { top.to_u64() };
        Self { max_degree }
    }

    /// Edge-degree strictly below `value` (e.g. `β - 1`).
    pub fn below(value: u64) -> Self {
        Self {
            max_degree: value.checked_sub(1),
        }
    }

    #[inline]
    pub fn is_underfull(&self, edge_degree: u64) -> bool {
        self.max_degree.is_some_and(|m| edge_degree <= m)
    }

    pub fn max_degree(&self) -> Option<u64> {
        self.max_degree
    }

    fn min(self, other: Self) -> Self {
        Self {
            max_degree: match (self.max_degree, other.max_degree) {
                (Some(a), Some(b)) => Some(a.min(b)),
                _ => None,
            },
        }
    }
}

/// A subgraph of bounded edge-degree `beta`.
#[derive(Clone, Debug)]
pub struct BoundedSubgraph<'g> {
    pub edges: EdgeSubset<'g>,
    pub beta: u64,
    pub max_edge_degree: u64,
    /// Insertions plus deletions performed by the fixing process.
    pub steps: u64,
}

/// Local fixing: starting from `H = ∅`, sweep the sample in a seeded random
/// order, deleting `H`-edges whose edge-degree exceeds `β` and inserting
/// sample edges that are underfull, until a full sweep changes nothing.
///
/// Insertions are limited to edge-degree at most `β - 2` so an inserted edge
/// never starts out overfull. With that limit the potential
/// `Σ_{e ∈ H} (2β - 1 - deg_H(e))` rises by at least one per step and stays
/// below `n·β²` (every degree is at most `β - 1`), so the loop ends after at
/// most `n·β²` steps. When `λβ ≥ 1` the limit is implied by the underfull
/// rule and the result has no `(H, β, λ)`-underfull sample edge left.
pub fn build_bounded_subgraph<'g, R: Rng + ?Sized>(
    sample: &EdgeSubset<'g>,
    params: &EdcsParams,
    rng: &mut R,
) -> BoundedSubgraph<'g> {
    let g = sample.graph();
    let beta = params.beta;
    let insert_rule = params
        .underfull_threshold()
        .min(UnderfullThreshold::below(beta.saturating_sub(1)));

    let mut order = sample.ids();
    order.shuffle(rng);
    let mut deg = vec![0u64; g.num_vertices()];
    let mut h = EdgeSubset::empty(g);
    let mut steps = 0u64;
    loop {
        let mut changed = false;
        for &e in &order {
            let (u, v) = g.endpoints(e);
            let d = deg[u] + deg[v];
            if h.contains(e) {
                if d > beta {
                    h.remove(e);
                    deg[u] -= 1;
                    deg[v] -= 1;
                    steps += 1;
                    changed = true;
                }
            } else if insert_rule.is_underfull(d) {
                h.insert(e);
                deg[u] += 1;
                deg[v] += 1;
                steps += 1;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let max_edge_degree = h
        .iter()
        .map(|e| {
            let (u, v) = g.endpoints(e);
            deg[u] + deg[v]
        })
        .max()
        .unwrap_or(0);
    BoundedSubgraph {
        edges: h,
        beta,
        max_edge_degree,
        steps,
    }
}

/// Candidate edges whose `H`-edge-degree is underfull under `threshold`.
pub fn underfull_edges<'g>(
    candidates: &EdgeSubset<'g>,
    h: &EdgeSubset<'g>,
    threshold: UnderfullThreshold,
) -> Result<EdgeSubset<'g>, EdcsError> {
    if let Some(e) = candidates.iter().find(|&e| h.contains(e)) {
        return Err(EdcsError::Overlap(e));
    }
    let g = candidates.graph();
    let deg = h.degrees();
    Ok(EdgeSubset::from_predicate(g, |e| {
        candidates.contains(e) && {
            let (u, v) = g.endpoints(e);
            threshold.is_underfull((deg[u] + deg[v]) as u64)
        }
    }))
}

/// True iff every edge of `h` has edge-degree at most `beta`.
pub fn verify_bounded_degree(h: &EdgeSubset<'_>, beta: u64) -> bool {
    let g = h.graph();
    let deg = h.degrees();
    h.iter().all(|e| {
        let (u, v) = g.endpoints(e);
        (deg[u] + deg[v]) as u64 <= beta
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))).unwrap()
    }

    // Underfull test straight from the definition, on floats.
    fn definition_scan<'g>(cands: &EdgeSubset<'g>, h: &EdgeSubset<'g>, beta: u64, lambda: f64) -> Vec<EdgeId> {
        let g = cands.graph();
        cands
            .iter()
            .filter(|&e| {
                let (u, v) = g.endpoints(e);
                let d = h.degree(u) + h.degree(v);
                (d as f64) < (1.0 - lambda) * beta as f64
            })
            .collect()
    }

    #[test]
    fn param_validation() {
        assert!(EdcsParams::practical(0.1, 0.25, 4).is_ok());
        assert!(EdcsParams::practical(0.1, 0.25, 3).is_err());
        assert!(EdcsParams::practical(0.1, 1.0, 8).is_err());
        assert!(EdcsParams::practical(0.6, 0.5, 8).is_err());
        assert!(EdcsParams::practical(0.0, 0.5, 8).is_err());
        // theory needs lambda <= eps/384 and a huge beta
        assert!(EdcsParams::theory(0.5, 0.1, 1 << 40).is_err());
        let lam: f64 = 0.5 / 384.0;
        let need = (50.0 * lam.powi(-2) * (1.0 / lam).ln()).ceil() as u64;
        assert!(EdcsParams::theory(0.5, lam, need).is_ok());
        assert!(EdcsParams::theory(0.5, lam, need - 1).is_err());
    }

    #[test]
    fn threshold_is_exact() {
        // (1 - 0.25) * 4 = 3 exactly: degrees 0..=2 are underfull
        let t = UnderfullThreshold::lambda(4, 0.25);
        assert_eq!(t.max_degree(), Some(2));
        // (1 - 0.1) * 10 = 9 up to float error in 0.1; 0.1 as a double is
        // slightly above 1/10, so the bound is slightly below 9
        assert_eq!(UnderfullThreshold::lambda(10, 0.1).max_degree(), Some(8));
        assert_eq!(UnderfullThreshold::lambda(10, 0.05).max_degree(), Some(9));
        assert_eq!(UnderfullThreshold::below(9).max_degree(), Some(8));
        assert_eq!(UnderfullThreshold::below(0).max_degree(), None);
        assert!(!UnderfullThreshold::below(0).is_underfull(0));
    }

    #[test]
    fn empty_sample_gives_empty_h() {
        let g = complete(4);
        let p = EdcsParams::practical(0.1, 0.25, 4).unwrap();
        let h = build_bounded_subgraph(&EdgeSubset::empty(&g), &p, &mut ChaCha8Rng::seed_from_u64(1));
        assert!(h.edges.is_empty());
        assert_eq!(h.steps, 0);
    }

    #[test]
    fn single_edge_is_taken() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        let p = EdcsParams::practical(0.1, 0.25, 4).unwrap();
        let h = build_bounded_subgraph(&EdgeSubset::full(&g), &p, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(h.edges.ids(), vec![EdgeId(0)]);
        assert_eq!(h.max_edge_degree, 2);
    }

    #[test]
    fn k5_is_locally_optimal() {
        let g = complete(5);
        let p = EdcsParams::practical(0.1, 0.25, 4).unwrap();
        for seed in 0..20 {
            let sample = EdgeSubset::full(&g);
            let h = build_bounded_subgraph(&sample, &p, &mut ChaCha8Rng::seed_from_u64(seed));
            assert!(verify_bounded_degree(&h.edges, 4));
            let rest = sample.difference(&h.edges);
            assert!(definition_scan(&rest, &h.edges, 4, 0.25).is_empty());
            assert!(underfull_edges(&rest, &h.edges, p.underfull_threshold()).unwrap().is_empty());
            assert!(h.steps <= 5 * 16);
        }
    }

    #[test]
    fn underfull_with_empty_h_takes_everything() {
        let g = complete(4);
        let h = EdgeSubset::empty(&g);
        let all = EdgeSubset::full(&g);
        let u = underfull_edges(&all, &h, UnderfullThreshold::below(10)).unwrap();
        assert_eq!(u, all);
    }

    #[test]
    fn underfull_rejects_overlap() {
        let g = complete(3);
        let h = EdgeSubset::from_ids(&g, [EdgeId(1)]).unwrap();
        let c = EdgeSubset::full(&g);
        assert_eq!(
            underfull_edges(&c, &h, UnderfullThreshold::below(3)).unwrap_err(),
            EdcsError::Overlap(EdgeId(1))
        );
    }

    #[test]
    fn star_edge_degree() {
        let beta = 6;
        let g = Graph::new(beta + 1, (1..=beta).map(|i| (0, i))).unwrap();
        let h = EdgeSubset::full(&g);
        // centre degree beta makes every edge-degree beta + 1
        assert!(!verify_bounded_degree(&h, beta as u64));
        assert!(verify_bounded_degree(&h, beta as u64 + 1));
        assert!(verify_bounded_degree(&EdgeSubset::empty(&g), 0));
    }
}
