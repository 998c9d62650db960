use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, EdgeSubset, Graph, Matching};
use crate::matchers::{matching_number, maximum_matching};

use super::OracleError;

/// Largest `|H ∪ U|` accepted by [`verify_augment_bound`].
pub const AUGMENT_EDGE_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AugmentBound {
    /// `max_M |M| + ½ μ(G - V(M))`.
    pub max_value: f64,
    pub witness: Matching,
    pub mu: usize,
    pub bound: f64,
    pub within_bound: bool,
    pub nodes: u64,
}

struct Search<'a> {
    g: &'a Graph,
    edges: Vec<EdgeId>,
    mu: usize,
    used: Vec<bool>,
    chosen: Vec<EdgeId>,
    // values are doubled to stay integral: 2|M| + μ(G - V(M))
    best: usize,
    best_set: Vec<EdgeId>,
    nodes: u64,
}

impl Search<'_> {
    fn doubled_value(&self, m: &[EdgeId]) -> usize {
        let mut removed = Vec::with_capacity(2 * m.len());
        for &e in m {
            let (u, v) = self.g.endpoints(e);
            removed.push(u);
            removed.push(v);
        }
        2 * m.len() + matching_number(&self.g.remove_vertices(&removed).graph)
    }

    fn consider(&mut self, m: Vec<EdgeId>) {
        let v = self.doubled_value(&m);
        if v > self.best {
            self.best = v;
            self.best_set = m;
        }
    }

    fn free(&self, e: EdgeId) -> bool {
        let (u, v) = self.g.endpoints(e);
        !self.used[u] && !self.used[v]
    }

    fn dfs(&mut self, idx: usize) {
        self.nodes += 1;
        // Any completion M' ⊇ M has |M'| + μ(G - V(M')) ≤ μ(G), so its doubled
        // value is at most μ(G) + |M'|.
        let usable = self.edges[idx..].iter().filter(|&&e| self.free(e)).count();
        let free_vertices = self.used.iter().filter(|u| !**u).count();
        let extra = usable.min(free_vertices / 2);
        if self.mu + self.chosen.len() + extra <= self.best {
            return;
        }
        if idx == self.edges.len() {
            self.consider(self.chosen.clone());
            return;
        }
        let e = self.edges[idx];
        if self.free(e) {
            let (u, v) = self.g.endpoints(e);
            self.used[u] = true;
            self.used[v] = true;
            self.chosen.push(e);
            self.dfs(idx + 1);
            self.chosen.pop();
            self.used[u] = false;
            self.used[v] = false;
        }
        self.dfs(idx + 1);
    }
}

/// Exhaustive maximum of `|M| + ½ μ(G - V(M))` over matchings `M ⊆ H ∪ U`.
///
/// Branch and bound over edges, `U` first. The incumbent starts from a
/// greedy matching taking `U` edges first; that ordering only speeds up the
/// search and is never assumed optimal.
pub fn verify_augment_bound(
    g: &Graph,
    h: &EdgeSubset<'_>,
    u: &EdgeSubset<'_>,
    bound: f64,
) -> Result<AugmentBound, OracleError> {
    let hu = h.union(u);
    if hu.len() > AUGMENT_EDGE_CAP {
        return Err(OracleError::TooLarge {
            what: "|H ∪ U|",
            size: hu.len(),
            cap: AUGMENT_EDGE_CAP,
        });
    }
    let mut edges: Vec<EdgeId> = u.iter().collect();
    edges.extend(h.iter().filter(|&e| !u.contains(e)));
    let mu = maximum_matching(g).len();
    let mut s = Search {
        g,
        edges,
        mu,
        used: vec![false; g.num_vertices()],
        chosen: Vec::new(),
        best: 0,
        best_set: Vec::new(),
        nodes: 0,
    };
    let mut greedy = Vec::new();
    for i in 0..s.edges.len() {
        let e = s.edges[i];
        if s.free(e) {
            let (a, b) = g.endpoints(e);
            s.used[a] = true;
            s.used[b] = true;
            greedy.push(e);
        }
    }
    s.used.iter_mut().for_each(|x| *x = false);
    s.consider(greedy);
    s.consider(Vec::new());
    s.dfs(0);
    let max_value = s.best as f64 / 2.0;
    Ok(AugmentBound {
        max_value,
        witness: Matching::new(g, s.best_set).expect("search only builds matchings"),
        mu,
        bound,
        within_bound: max_value <= bound,
        nodes: s.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whole_perfect_matching() {
        let g = Graph::new(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
        let all = EdgeSubset::full(&g);
        let r = verify_augment_bound(&g, &EdgeSubset::empty(&g), &all, 3.0).unwrap();
        assert_eq!(r.max_value, 3.0);
        assert_eq!(r.witness.len(), 3);
        assert!(r.within_bound);
    }

    #[test]
    fn empty_h_and_u_gives_half_mu() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        let none = EdgeSubset::empty(&g);
        let r = verify_augment_bound(&g, &none, &none, 1.0).unwrap();
        assert_eq!(r.max_value, 1.0);
        assert!(r.witness.is_empty());
    }

    #[test]
    fn middle_edge_of_p4_is_a_trap() {
        // M = {12} scores 1 + 0; M = {} scores 0 + 1; taking 01 scores 1 + ½
        let g = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let h = EdgeSubset::from_ids(&g, [EdgeId(1)]).unwrap();
        let u = EdgeSubset::from_ids(&g, [EdgeId(0)]).unwrap();
        let r = verify_augment_bound(&g, &h, &u, 2.0).unwrap();
        assert_eq!(r.max_value, 1.5);
    }

    #[test]
    fn cap_enforced() {
        let g = Graph::new(12, (0..12).flat_map(|i| (i + 1..12).map(move |j| (i, j)))).unwrap();
        let all = EdgeSubset::full(&g);
        assert!(matches!(
            verify_augment_bound(&g, &all, &EdgeSubset::empty(&g), 6.0),
            Err(OracleError::TooLarge { size: 66, .. })
        ));
    }
}
