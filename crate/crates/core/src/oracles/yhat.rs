use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::graph::{EdgeId, EdgeSubset, Graph};
use crate::matchers::FractionalMatching;

use super::{OracleError, PeelingTrace};

/// Largest `|M*|` accepted by [`enumerate_expected_yhat_loads`].
pub const MAX_ENUMERATED_MATCHING: usize = 16;

/// Arithmetic shared by the floating-point sampler and the exact enumerator.
pub trait Scalar:
    Clone + PartialOrd + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn ratio(num: u64, den: u64) -> Self;
}

impl Scalar for f64 {
    fn ratio(num: u64, den: u64) -> Self {
        num as f64 / den as f64
    }
}

impl Scalar for BigRational {
    fn ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Number of `M*` edges adjacent to `e ∉ M*`, i.e. endpoints covered by `M*`.
fn star_adjacency(g: &Graph, covered: &[bool], e: EdgeId) -> u32 {
    let (u, v) = g.endpoints(e);
    covered[u] as u32 + covered[v] as u32
}

fn covered_vertices(g: &Graph, edges: impl Iterator<Item = EdgeId>) -> Vec<bool> {
    let mut c = vec![false; g.num_vertices()];
    for e in edges {
        let (u, v) = g.endpoints(e);
        c[u] = true;
        c[v] = true;
    }
    c
}

/// `ŷ_e` for every edge, given membership of each edge in `M'`:
/// 1 on `M'`, `x_e` on `M* \ M'`, 0 next to `M'`, else `(1-p)·x_e/p_e` with
/// `p_e = (1-p)^(adjacent M* edges)`.
pub fn yhat_values<T: Scalar>(trace: &PeelingTrace<'_>, in_prime: &[bool], p: &T) -> Vec<T> {
    let g = trace.graph();
    let star_cov = covered_vertices(g, trace.m_star.edges().iter().copied());
    let prime_cov = covered_vertices(g, g.edge_ids().filter(|e| in_prime[e.index()]));
    let q = T::one() - p.clone();
    let t = trace.t as u64;
    g.edge_ids()
        .map(|e| {
            let x = T::ratio(trace.counts[e.index()] as u64, t);
            if in_prime[e.index()] {
                T::one()
            } else if trace.m_star.contains(e) {
                x
            } else {
                let (u, v) = g.endpoints(e);
                if prime_cov[u] || prime_cov[v] || x.is_zero() {
                    T::zero()
                } else {
                    let mut p_e = T::one();
                    for _ in 0..star_adjacency(g, &star_cov, e) {
                        p_e = p_e * q.clone();
                    }
                    q.clone() * x / p_e
                }
            }
        })
        .collect()
}

fn loads<T: Scalar>(g: &Graph, w: &[T]) -> Vec<T> {
    let mut l = vec![T::zero(); g.num_vertices()];
    for e in g.edge_ids() {
        let (u, v) = g.endpoints(e);
        l[u] = l[u].clone() + w[e.index()].clone();
        l[v] = l[v].clone() + w[e.index()].clone();
    }
    l
}

/// One draw of `M'` with the resulting `ŷ` and `y`.
#[derive(Clone, Debug)]
pub struct YSample<'g> {
    pub m_prime: Vec<EdgeId>,
    /// `p_e` per edge; 1 on `M*` edges, where it is unused.
    pub p_e: Vec<f64>,
    pub yhat: Vec<f64>,
    pub yhat_loads: Vec<f64>,
    pub y: FractionalMatching<'g>,
    /// Edges with `ŷ_e > 0` zeroed because an endpoint overflowed.
    pub zeroed: Vec<EdgeId>,
    pub p: f64,
    pub epsilon: f64,
}

impl<'g> YSample<'g> {
    pub fn from_m_prime(trace: &PeelingTrace<'g>, m_prime: &[EdgeId], p: f64, epsilon: f64) -> Self {
        let g = trace.graph();
        let mut in_prime = vec![false; g.num_edges()];
        for &e in m_prime {
            assert!(trace.m_star.contains(e), "M' must lie inside M*");
            in_prime[e.index()] = true;
        }
        let yhat = yhat_values(trace, &in_prime, &p);
        let yhat_loads = loads(g, &yhat);
        let star_cov = covered_vertices(g, trace.m_star.edges().iter().copied());
        let p_e = g
            .edge_ids()
            .map(|e| {
                if trace.m_star.contains(e) {
                    1.0
                } else {
                    (1.0 - p).powi(star_adjacency(g, &star_cov, e) as i32)
                }
            })
            .collect();
        let scale = 1.0 + epsilon;
        let mut zeroed = Vec::new();
        let w = g
            .edge_ids()
            .map(|e| {
                let (u, v) = g.endpoints(e);
                if yhat_loads[u] / scale > 1.0 || yhat_loads[v] / scale > 1.0 {
                    if yhat[e.index()] > 0.0 {
                        zeroed.push(e);
                    }
                    0.0
                } else {
                    yhat[e.index()] / scale
                }
            })
            .collect();
        let y = FractionalMatching::new(g, w).expect("y_e <= y_u / (1 + eps) <= 1");
        let mut m_prime = m_prime.to_vec();
        m_prime.sort_unstable();
        Self {
            m_prime,
            p_e,
            yhat,
            yhat_loads,
            y,
            zeroed,
            p,
            epsilon,
        }
    }

    /// `Σ_e y_e`.
    pub fn size(&self) -> f64 {
        self.y.size()
    }
}

/// Draws `M'`: each `M_in` edge with probability `p`, each edge of
/// `M_out ∩ E_B` with probability `1 - ε`, in edge-id order.
pub fn sample_y<'g, R: Rng + ?Sized>(
    trace: &PeelingTrace<'g>,
    e_b: &EdgeSubset<'g>,
    p: f64,
    epsilon: f64,
    rng: &mut R,
) -> YSample<'g> {
    let m_prime: Vec<EdgeId> = trace
        .m_star
        .edges()
        .iter()
        .copied()
        .filter(|&e| {
            if trace.m_in.contains(e) {
                rng.random_bool(p)
            } else if e_b.contains(e) {
                rng.random_bool(1.0 - epsilon)
            } else {
                false
            }
        })
        .collect();
    YSample::from_m_prime(trace, &m_prime, p, epsilon)
}

/// Closed form `p·χ_{M*}(v) + (1 - p)·x_v`.
pub fn expected_yhat_load(trace: &PeelingTrace<'_>, p: f64, v: usize) -> f64 {
    let covered = trace.m_star.edges().iter().any(|&e| {
        let (a, b) = trace.graph().endpoints(e);
        a == v || b == v
    });
    let x_v = trace.load_count(v) as f64 / trace.t as f64;
    p * covered as u8 as f64 + (1.0 - p) * x_v
}

/// [`expected_yhat_load`] in exact arithmetic.
pub fn expected_yhat_load_exact(trace: &PeelingTrace<'_>, p: &BigRational, v: usize) -> BigRational {
    let covered = trace.m_star.edges().iter().any(|&e| {
        let (a, b) = trace.graph().endpoints(e);
        a == v || b == v
    });
    let chi = if covered { p.clone() } else { BigRational::zero() };
    chi + (BigRational::one() - p) * BigRational::ratio(trace.load_count(v), trace.t as u64)
}

/// `E[ŷ_v]` for every vertex, summing over all `2^|M*|` outcomes of `M'`
/// with each `M*` edge included independently with probability `p`.
pub fn enumerate_expected_yhat_loads(trace: &PeelingTrace<'_>, p: &BigRational) -> Result<Vec<BigRational>, OracleError> {
    let g = trace.graph();
    let star = trace.m_star.edges();
    if star.len() > MAX_ENUMERATED_MATCHING {
        return Err(OracleError::TooLarge {
            what: "|M*|",
            size: star.len(),
            cap: MAX_ENUMERATED_MATCHING,
        });
    }
    let q = BigRational::one() - p;
    let mut expected = vec![BigRational::zero(); g.num_vertices()];
    let mut in_prime = vec![false; g.num_edges()];
    for mask in 0u32..(1 << star.len()) {
        let mut weight = BigRational::one();
        for (i, &e) in star.iter().enumerate() {
            let on = mask >> i & 1 == 1;
            in_prime[e.index()] = on;
            weight *= if on { p.clone() } else { q.clone() };
        }
        let yhat = yhat_values(trace, &in_prime, p);
        for (acc, l) in expected.iter_mut().zip(loads(g, &yhat)) {
            *acc += weight.clone() * l;
        }
    }
    Ok(expected)
}

/// Per-vertex frequency of `ŷ_v > 1 + ε` over `trials` draws of `M'`, each
/// `M*` edge included with probability `p`.
pub fn overflow_probability<R: Rng + ?Sized>(
    trace: &PeelingTrace<'_>,
    p: f64,
    epsilon: f64,
    trials: usize,
    rng: &mut R,
) -> Vec<f64> {
    assert!(trials >= 1);
    let g = trace.graph();
    let mut hits = vec![0usize; g.num_vertices()];
    let mut in_prime = vec![false; g.num_edges()];
    for _ in 0..trials {
        for &e in trace.m_star.edges() {
            in_prime[e.index()] = rng.random_bool(p);
        }
        let l = loads(g, &yhat_values(trace, &in_prime, &p));
        for (h, &lv) in hits.iter_mut().zip(&l) {
            if lv > 1.0 + epsilon {
                *h += 1;
            }
        }
    }
    hits.into_iter().map(|h| h as f64 / trials as f64).collect()
}
