use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::edcs::{build_bounded_subgraph, underfull_edges, EdcsParams};
use crate::graph::{EdgeId, EdgeSubset, Graph};
use crate::matchers::maximum_matching_in;
use crate::rng::{stream, stream_rng};

/// `sqrt(2 μ ln n)`: the lower-tail deviation with probability at most `1/n`.
pub fn concentration_slack(mu: usize, n: usize) -> f64 {
    (2.0 * mu as f64 * (n.max(1) as f64).ln()).sqrt()
}

/// Lower-tail statistics of output sizes over repeated runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationSummary {
    pub runs: usize,
    pub mean: f64,
    pub mu: usize,
    pub n: usize,
    pub slack: f64,
    pub low_runs: usize,
    pub low_fraction: f64,
    /// Allowed fraction `2/n`.
    pub allowed: f64,
}

impl ConcentrationSummary {
    /// Counts runs with output at most `mean - sqrt(2 μ ln n)`.
    pub fn from_sizes(sizes: &[usize], mu: usize, n: usize) -> Self {
        let runs = sizes.len();
        let mean = sizes.iter().sum::<usize>() as f64 / runs.max(1) as f64;
        let slack = concentration_slack(mu, n);
        let low_runs = sizes.iter().filter(|&&s| s as f64 <= mean - slack).count();
        Self {
            runs,
            mean,
            mu,
            n,
            slack,
            low_runs,
            low_fraction: low_runs as f64 / runs.max(1) as f64,
            allowed: 2.0 / n.max(1) as f64,
        }
    }

    pub fn passed(&self) -> bool {
        self.low_fraction <= self.allowed
    }
}

/// `f(x) = μ(base ∪ {e_i : x_i = 1})`, with `f_i` setting `x_i = 0`.
///
/// Conditioning on the sample fixes `H` and the underfull set `U`; `base`
/// is `H ∪ U` and the coordinates are the remaining non-sampled edges.
#[derive(Clone, Debug)]
pub struct SelfBoundingFunction<'g> {
    base: EdgeSubset<'g>,
    coords: Vec<EdgeId>,
    bob_probability: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfBoundingCheck {
    pub value: usize,
    /// `(coordinate, f(x) - f_i(x^(i)))` for each probed coordinate.
    pub drops: Vec<(usize, i64)>,
    /// `Σ_i (f(x) - f_i(x^(i)))` over every coordinate.
    pub total_drop: i64,
}

impl SelfBoundingCheck {
    pub fn passed(&self) -> bool {
        let probed: i64 = self.drops.iter().map(|d| d.1).sum();
        self.drops.iter().all(|&(_, d)| (0..=1).contains(&d))
            && probed <= self.value as i64
            && self.total_drop <= self.value as i64
    }
}

impl<'g> SelfBoundingFunction<'g> {
    pub fn new(base: EdgeSubset<'g>, coords: Vec<EdgeId>, bob_probability: f64) -> Self {
        assert!(coords.iter().all(|&e| !base.contains(e)), "coordinates overlap the base set");
        Self {
            base,
            coords,
            bob_probability,
        }
    }

    /// Conditions a two-party run on its sample. Each edge is sampled with
    /// probability `p·ε/(1 - p)`; a non-sampled edge then belongs to the
    /// last party with probability `(1 - p)/(1 - p·ε/(1 - p))`.
    pub fn conditioned(g: &'g Graph, params: &EdcsParams, p: f64, seed: u64) -> Self {
        let rate = p * params.epsilon / (1.0 - p);
        let mut rng = stream_rng(seed, stream::SAMPLE);
        let sampled = EdgeSubset::from_predicate(g, |_| rng.random_bool(rate));
        let h = build_bounded_subgraph(&sampled, params, &mut stream_rng(seed, stream::CONSTRUCTION)).edges;
        let rest = EdgeSubset::full(g).difference(&sampled);
        let u = underfull_edges(&rest, &h, params.underfull_threshold()).expect("H lies inside the sample");
        let coords = rest.difference(&u).ids();
        Self::new(h.union(&u), coords, (1.0 - p) / (1.0 - rate))
    }

    pub fn num_coords(&self) -> usize {
        self.coords.len()
    }

    pub fn base(&self) -> &EdgeSubset<'g> {
        &self.base
    }

    pub fn bob_probability(&self) -> f64 {
        self.bob_probability
    }

    pub fn sample_assignment<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<bool> {
        self.coords.iter().map(|_| rng.random_bool(self.bob_probability)).collect()
    }

    fn edges_of(&self, x: &[bool]) -> EdgeSubset<'g> {
        assert_eq!(x.len(), self.coords.len());
        let mut s = self.base.clone();
        for (&e, &on) in self.coords.iter().zip(x) {
            if on {
                s.insert(e);
            }
        }
        s
    }

    pub fn eval(&self, x: &[bool]) -> usize {
        maximum_matching_in(&self.edges_of(x)).len()
    }

    /// `f_i(x^(i))`.
    pub fn eval_dropped(&self, x: &[bool], i: usize) -> usize {
        let mut s = self.edges_of(x);
        s.remove(self.coords[i]);
        maximum_matching_in(&s).len()
    }

    /// Probes `count` distinct random coordinates. The total drop is exact:
    /// dropping a coordinate outside one fixed maximum matching leaves that
    /// matching intact, so only the matching's coordinates are recomputed.
    pub fn check<R: Rng + ?Sized>(&self, x: &[bool], count: usize, rng: &mut R) -> SelfBoundingCheck {
        let edges = self.edges_of(x);
        let m = maximum_matching_in(&edges);
        let value = m.len();
        let drop = |i: usize| value as i64 - self.eval_dropped(x, i) as i64;
        let drops = sample(rng, self.coords.len(), count.min(self.coords.len()))
            .into_iter()
            .map(|i| (i, drop(i)))
            .collect();
        let total_drop = (0..self.coords.len())
            .filter(|&i| x[i] && m.contains(self.coords[i]))
            .map(drop)
            .sum();
        SelfBoundingCheck {
            value,
            drops,
            total_drop,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slack_formula() {
        let s = concentration_slack(2000, 4000);
        assert!((s - (4000f64 * 4000f64.ln()).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn summary_counts_low_runs() {
        let mut sizes = vec![100; 99];
        sizes.push(0);
        let s = ConcentrationSummary::from_sizes(&sizes, 100, 10);
        assert_eq!(s.low_runs, 1);
        assert!(s.passed()); // 0.01 <= 0.2
        let s = ConcentrationSummary::from_sizes(&sizes, 100, 1000);
        assert!(!s.passed());
    }

    #[test]
    fn path_function_is_self_bounding() {
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let base = EdgeSubset::from_ids(&g, [EdgeId(2)]).unwrap();
        let coords = vec![EdgeId(0), EdgeId(1), EdgeId(3), EdgeId(4)];
        let f = SelfBoundingFunction::new(base, coords, 0.5);
        let x = [true, true, true, true];
        assert_eq!(f.eval(&x), 3);
        let check = f.check(&x, 4, &mut stream_rng(0, 0));
        assert!(check.passed());
        assert_eq!(check.total_drop, 2);
        assert_eq!(f.eval_dropped(&x, 0), 2);
        assert_eq!(f.eval_dropped(&x, 1), 3);
    }
}
