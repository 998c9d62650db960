use std::collections::VecDeque;

use crate::graph::{Graph, Matching};

const NONE: usize = usize::MAX;

/// Edmonds' blossom algorithm for maximum-cardinality matching in a general
/// graph.
///
/// Starts from the greedy matching in edge-id order, then runs one
/// alternating-tree search from every free vertex in increasing id order.
/// A vertex whose search fails can never be augmented later, so one search
/// per vertex suffices. Per-search state is reset only on the vertices the
/// search touched, which keeps sparse instances close to linear per search.
pub fn max_matching_general(g: &Graph) -> Matching {
    let n = g.num_vertices();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).map(|(w, _)| w).collect()).collect();
    let mut mate = vec![NONE; n];
    for (u, v) in g.edges() {
        if mate[u] == NONE && mate[v] == NONE {
            mate[u] = v;
            mate[v] = u;
        }
    }

    let mut search = Search::new(n);
    for root in 0..n {
        if mate[root] != NONE || adj[root].is_empty() {
            continue;
        }
        if let Some(end) = search.find_augmenting_path(&adj, &mate, root) {
            search.augment(&mut mate, end);
        }
        search.reset();
    }

    let mate: Vec<Option<usize>> = mate.iter().map(|&w| (w != NONE).then_some(w)).collect();
    Matching::from_mates(g, &mate)
}

struct Search {
    parent: Vec<usize>,
    base: Vec<usize>,
    outer: Vec<bool>,
    in_blossom: Vec<bool>,
    on_path: Vec<bool>,
    touched: Vec<usize>,
    is_touched: Vec<bool>,
    marks: Vec<usize>,
    queue: VecDeque<usize>,
}

impl Search {
    fn new(n: usize) -> Self {
        Self {
            parent: vec![NONE; n],
            base: (0..n).collect(),
            outer: vec![false; n],
            in_blossom: vec![false; n],
            on_path: vec![false; n],
            touched: Vec::new(),
            is_touched: vec![false; n],
            marks: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    fn touch(&mut self, v: usize) {
        if !self.is_touched[v] {
            self.is_touched[v] = true;
            self.touched.push(v);
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.parent[v] = NONE;
            self.base[v] = v;
            self.outer[v] = false;
            self.is_touched[v] = false;
        }
        self.touched.clear();
        self.queue.clear();
    }

    fn find_augmenting_path(&mut self, adj: &[Vec<usize>], mate: &[usize], root: usize) -> Option<usize> {
        self.touch(root);
        self.outer[root] = true;
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in &adj[v] {
                if self.base[v] == self.base[to] || mate[v] == to {
                    continue;
                }
                let to_outer = to == root || (mate[to] != NONE && self.parent[mate[to]] != NONE);
                if to_outer {
                    self.contract(mate, v, to);
                } else if self.parent[to] == NONE {
                    self.touch(to);
                    self.parent[to] = v;
                    let next = mate[to];
                    if next == NONE {
                        return Some(to);
                    }
                    self.touch(next);
                    self.outer[next] = true;
                    self.queue.push_back(next);
                }
            }
        }
        None
    }

    fn contract(&mut self, mate: &[usize], v: usize, to: usize) {
        let b = self.lca(mate, v, to);
        self.mark_path(mate, v, b, to);
        self.mark_path(mate, to, b, v);
        for i in 0..self.touched.len() {
            let w = self.touched[i];
            if self.in_blossom[self.base[w]] {
                self.base[w] = b;
                if !self.outer[w] {
                    self.outer[w] = true;
                    self.queue.push_back(w);
                }
            }
        }
        for &m in &self.marks {
            self.in_blossom[m] = false;
        }
        self.marks.clear();
    }

    fn lca(&mut self, mate: &[usize], a: usize, b: usize) -> usize {
        let mut path = Vec::new();
        let mut a = a;
        loop {
            a = self.base[a];
            self.on_path[a] = true;
            path.push(a);
            if mate[a] == NONE {
                break;
            }
            a = self.parent[mate[a]];
        }
        let mut b = self.base[b];
        while !self.on_path[b] {
            b = self.base[self.parent[mate[b]]];
        }
        for p in path {
            self.on_path[p] = false;
        }
        b
    }

    fn mark_path(&mut self, mate: &[usize], mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            for x in [self.base[v], self.base[mate[v]]] {
                if !self.in_blossom[x] {
                    self.in_blossom[x] = true;
                    self.marks.push(x);
                }
            }
            self.parent[v] = child;
            child = mate[v];
            v = self.parent[mate[v]];
        }
    }

    fn augment(&self, mate: &mut [usize], end: usize) {
        let mut v = end;
        while v != NONE {
            let pv = self.parent[v];
            let next = mate[pv];
            mate[v] = pv;
            mate[pv] = v;
            v = next;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn triangle_and_odd_cycle() {
        assert_eq!(max_matching_general(&cycle(3)).len(), 1);
        assert_eq!(max_matching_general(&cycle(9)).len(), 4);
        assert_eq!(max_matching_general(&cycle(10)).len(), 5);
    }

    #[test]
    fn empty_and_isolated() {
        assert!(max_matching_general(&Graph::empty(0)).is_empty());
        assert!(max_matching_general(&Graph::empty(5)).is_empty());
    }

    #[test]
    fn blossom_contraction_needed() {
        // pentagon 0..4 with stems 0-5 and 2-6; greedy picks 0-1, 2-3 and
        // the augmenting path 5-0-4-3-2-6 runs through the odd cycle.
        let g = Graph::new(
            7,
            [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (2, 6)],
        )
        .unwrap();
        assert_eq!(max_matching_general(&g).len(), 3);
    }

    #[test]
    fn petersen_has_perfect_matching() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let g = Graph::new(10, outer.chain(spokes).chain(inner)).unwrap();
        assert_eq!(max_matching_general(&g).len(), 5);
    }

    #[test]
    fn deterministic() {
        let g = cycle(12);
        assert_eq!(max_matching_general(&g), max_matching_general(&g));
    }
}
