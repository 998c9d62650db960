use crate::graph::{EdgeId, Graph, Matching};

use super::MatchError;

/// Default edge cap for [`max_matching_bruteforce`].
pub const DEFAULT_BRUTEFORCE_CAP: usize = 40;

/// Exhaustive maximum matching with the default cap of 40 edges.
pub fn max_matching_bruteforce(g: &Graph) -> Result<Matching, MatchError> {
    max_matching_bruteforce_capped(g, DEFAULT_BRUTEFORCE_CAP)
}

/// Branch and bound over edge inclusion, in edge-id order.
///
/// The incumbent starts as the greedy maximal matching. A node is pruned
/// when its size plus `min(usable edges left, usable free vertices / 2)`
/// cannot beat the incumbent. Shares no code with the other solvers so it
/// can serve as their oracle.
pub fn max_matching_bruteforce_capped(g: &Graph, cap: usize) -> Result<Matching, MatchError> {
    let m = g.num_edges();
    if m > cap {
        return Err(MatchError::TooManyEdges { edges: m, cap });
    }
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut used = vec![false; g.num_vertices()];
    let mut best: Vec<usize> = Vec::new();
    for (i, &(u, v)) in edges.iter().enumerate() {
        if !used[u] && !used[v] {
            used[u] = true;
            used[v] = true;
            best.push(i);
        }
    }
    used.fill(false);
    let mut state = State {
        edges: &edges,
        used,
        current: Vec::new(),
        best,
        scratch: vec![false; g.num_vertices()],
    };
    state.branch(0);
    Ok(Matching::new(g, state.best.iter().map(|&i| EdgeId(i as u32))).expect("search keeps vertex-disjointness"))
}

struct State<'a> {
    edges: &'a [(usize, usize)],
    used: Vec<bool>,
    current: Vec<usize>,
    best: Vec<usize>,
    scratch: Vec<bool>,
}

impl State<'_> {
    fn upper_bound(&mut self, from: usize) -> usize {
        let mut usable = 0;
        let mut free = 0;
        for &(u, v) in &self.edges[from..] {
            if self.used[u] || self.used[v] {
                continue;
            }
            usable += 1;
            for w in [u, v] {
                if !self.scratch[w] {
                    self.scratch[w] = true;
                    free += 1;
                }
            }
        }
        for &(u, v) in &self.edges[from..] {
            self.scratch[u] = false;
            self.scratch[v] = false;
        }
        usable.min(free / 2)
    }

    fn branch(&mut self, idx: usize) {
        if self.current.len() > self.best.len() {
            self.best.clone_from(&self.current);
        }
        if idx == self.edges.len() || self.current.len() + self.upper_bound(idx) <= self.best.len() {
            return;
        }
        let (u, v) = self.edges[idx];
        if !self.used[u] && !self.used[v] {
            self.used[u] = true;
            self.used[v] = true;
            self.current.push(idx);
            self.branch(idx + 1);
            self.current.pop();
            self.used[u] = false;
            self.used[v] = false;
        }
        self.branch(idx + 1);
    }
}
