use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, EdgeSubset, Graph, Matching};
use crate::matchers::{maximum_matching_in, FractionalMatching};

#[derive(Debug, Error, PartialEq, Eq, Clone, Serialize, Deserialize)]
pub enum PeelingViolation {
    #[error("rounds {i} and {j} share edge {edge} outside M_in")]
    SharedOutsideIn { i: usize, j: usize, edge: EdgeId },
    #[error("edge {edge} outside M_in has weight {count}/t")]
    HeavyOutsideIn { edge: EdgeId, count: u32 },
    #[error("vertex {vertex} has load {sum}/{t}")]
    Overloaded { vertex: usize, sum: u64, t: usize },
    #[error("round {round} is not a matching")]
    NotAMatching { round: usize },
}

/// The averaged peeling matchings `x_e = |{i : e ∈ M_i}| / t`.
///
/// Weights are kept as integer counts over `t` so invariants are checked
/// exactly.
#[derive(Clone, Debug)]
pub struct PeelingTrace<'g> {
    graph: &'g Graph,
    pub t: usize,
    pub rounds: Vec<Matching>,
    /// `|H_i|` and `|U_i|` before round `i`.
    pub h_sizes: Vec<usize>,
    pub u_sizes: Vec<usize>,
    pub counts: Vec<u32>,
    pub m_star: Matching,
    pub m_in: EdgeSubset<'g>,
    pub m_out: EdgeSubset<'g>,
}

/// Peels `t` maximum matchings off `H ∪ U`, removing each round's edges
/// outside `M_in = M* ∩ (H ∪ U)`, where `M*` is the solver's maximum
/// matching of `e_r`.
pub fn build_x<'g>(h: &EdgeSubset<'g>, u: &EdgeSubset<'g>, e_r: &EdgeSubset<'g>, t: usize) -> PeelingTrace<'g> {
    assert!(t >= 1, "need at least one round");
    let g = h.graph();
    let m_star = maximum_matching_in(e_r);
    let star = m_star.as_subset(g);
    let m_in = star.intersection(&h.union(u));
    let m_out = star.difference(&m_in);

    let (mut hi, mut ui) = (h.clone(), u.clone());
    let mut counts = vec![0u32; g.num_edges()];
    let mut rounds = Vec::with_capacity(t);
    let (mut h_sizes, mut u_sizes) = (Vec::with_capacity(t), Vec::with_capacity(t));
    for _ in 0..t {
        h_sizes.push(hi.len());
        u_sizes.push(ui.len());
        let mi = maximum_matching_in(&hi.union(&ui));
        for &e in mi.edges() {
            counts[e.index()] += 1;
            if !m_in.contains(e) {
                hi.remove(e);
                ui.remove(e);
            }
        }
        rounds.push(mi);
    }
    PeelingTrace {
        graph: g,
        t,
        rounds,
        h_sizes,
        u_sizes,
        counts,
        m_star,
        m_in,
        m_out,
    }
}

impl<'g> PeelingTrace<'g> {
    /// A trace with given counts and no recorded rounds, for driving the
    /// `ŷ` construction directly.
    pub fn from_counts(graph: &'g Graph, m_star: Matching, m_in: &[EdgeId], counts: Vec<u32>, t: usize) -> Self {
        assert_eq!(counts.len(), graph.num_edges());
        assert!(t >= 1);
        let m_in = EdgeSubset::from_ids(graph, m_in.iter().copied()).expect("M_in edges exist");
        let star = m_star.as_subset(graph);
        assert!(m_in.is_subset(&star), "M_in must lie inside M*");
        let m_out = star.difference(&m_in);
        Self {
            graph,
            t,
            rounds: Vec::new(),
            h_sizes: Vec::new(),
            u_sizes: Vec::new(),
            counts,
            m_star,
            m_in,
            m_out,
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn x_value(&self, e: EdgeId) -> f64 {
        self.counts[e.index()] as f64 / self.t as f64
    }

    pub fn x(&self) -> FractionalMatching<'g> {
        let w = self.counts.iter().map(|&c| c as f64 / self.t as f64).collect();
        FractionalMatching::new(self.graph, w).expect("counts never exceed t")
    }

    /// `Σ_e x_e`.
    pub fn size(&self) -> f64 {
        self.counts.iter().map(|&c| c as u64).sum::<u64>() as f64 / self.t as f64
    }

    /// `t · x_v`.
    pub fn load_count(&self, v: usize) -> u64 {
        self.graph.neighbors(v).map(|(_, e)| self.counts[e.index()] as u64).sum()
    }

    pub fn check_invariants(&self) -> Result<(), PeelingViolation> {
        let g = self.graph;
        for (r, m) in self.rounds.iter().enumerate() {
            if Matching::new(g, m.edges().iter().copied()).is_err() {
                return Err(PeelingViolation::NotAMatching { round: r });
            }
        }
        for i in 0..self.rounds.len() {
            for j in i + 1..self.rounds.len() {
                if let Some(&edge) = self.rounds[i]
                    .edges()
                    .iter()
                    .find(|&&e| self.rounds[j].contains(e) && !self.m_in.contains(e))
                {
                    return Err(PeelingViolation::SharedOutsideIn { i, j, edge });
                }
            }
        }
        for e in g.edge_ids() {
            let count = self.counts[e.index()];
            if !self.m_in.contains(e) && count > 1 {
                return Err(PeelingViolation::HeavyOutsideIn { edge: e, count });
            }
        }
        for v in 0..g.num_vertices() {
            let sum = self.load_count(v);
            if sum > self.t as u64 {
                return Err(PeelingViolation::Overloaded { vertex: v, sum, t: self.t });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_matching_stays_put() {
        let g = Graph::new(8, [(0, 1), (2, 3), (4, 5), (6, 7)]).unwrap();
        let all = EdgeSubset::full(&g);
        let trace = build_x(&EdgeSubset::empty(&g), &all, &all, 5);
        trace.check_invariants().unwrap();
        assert_eq!(trace.size(), 4.0);
        assert!(trace.counts.iter().all(|&c| c == 5));
        assert_eq!(trace.m_in.len(), 4);
    }

    #[test]
    fn removed_edges_do_not_return() {
        // a 4-cycle with M* = {01, 23} in E_r and H = {12, 03}
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let h = EdgeSubset::from_ids(&g, [g.edge_id(1, 2).unwrap(), g.edge_id(0, 3).unwrap()]).unwrap();
        let e_r = EdgeSubset::full(&g).difference(&h);
        let u = EdgeSubset::empty(&g);
        let trace = build_x(&h, &u, &e_r, 3);
        trace.check_invariants().unwrap();
        assert!(trace.m_in.is_empty());
        assert_eq!(trace.rounds[0].len(), 2);
        assert!(trace.rounds[1].is_empty());
        assert_eq!(trace.h_sizes, vec![2, 0, 0]);
        assert!((trace.size() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn violations_are_reported() {
        let g = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
        let m = Matching::new(&g, [EdgeId(0)]).unwrap();
        let trace = PeelingTrace::from_counts(&g, m.clone(), &[], vec![2, 0], 2);
        assert_eq!(
            trace.check_invariants(),
            Err(PeelingViolation::HeavyOutsideIn { edge: EdgeId(0), count: 2 })
        );
        let trace = PeelingTrace::from_counts(&g, m, &[EdgeId(0)], vec![2, 1], 2);
        assert_eq!(
            trace.check_invariants(),
            Err(PeelingViolation::Overloaded { vertex: 1, sum: 3, t: 2 })
        );
    }
}
