use std::collections::VecDeque;

use crate::graph::{Graph, Matching, Side};

use super::MatchError;

const NONE: usize = usize::MAX;
const INF: u32 = u32::MAX;

/// A maximum bipartite matching with a König vertex cover of equal size.
#[derive(Clone, Debug)]
pub struct BipartiteMatching {
    pub matching: Matching,
    /// Sorted minimum vertex cover; `cover.len() == matching.len()`.
    pub cover: Vec<usize>,
}

/// Hopcroft-Karp on a graph carrying bipartition labels.
pub fn max_matching_bipartite(g: &Graph) -> Result<BipartiteMatching, MatchError> {
    let sides = g.sides().ok_or(MatchError::NotBipartite)?;
    let n = g.num_vertices();
    let left: Vec<usize> = (0..n).filter(|&v| sides[v] == Side::Left).collect();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).map(|(w, _)| w).collect()).collect();

    let mut mate = vec![NONE; n];
    let mut dist = vec![INF; n];
    let mut it = vec![0usize; n];
    let mut stack: Vec<(usize, usize)> = Vec::new();

    loop {
        // layered BFS from the free left vertices
        let mut queue = VecDeque::new();
        for &u in &left {
            if mate[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = INF;
            }
        }
        let mut reachable_free = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = mate[v];
                if w == NONE {
                    reachable_free = true;
                } else if dist[w] == INF {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !reachable_free {
            break;
        }

        for &u in &left {
            it[u] = 0;
        }
        for &root in &left {
            if mate[root] != NONE {
                continue;
            }
            // iterative DFS along the layers; stack holds (left vertex, right vertex used to leave it)
            stack.clear();
            stack.push((root, NONE));
            while let Some(&(u, _)) = stack.last() {
                if it[u] == adj[u].len() {
                    dist[u] = INF;
                    stack.pop();
                    continue;
                }
                let v = adj[u][it[u]];
                it[u] += 1;
                let w = mate[v];
                if w == NONE {
                    stack.last_mut().unwrap().1 = v;
                    for &(a, b) in stack.iter() {
                        mate[a] = b;
                        mate[b] = a;
                    }
                    for &(a, _) in stack.iter() {
                        dist[a] = INF;
                    }
                    break;
                } else if dist[w] != INF && dist[w] == dist[u] + 1 {
                    stack.last_mut().unwrap().1 = v;
                    stack.push((w, NONE));
                }
            }
        }
    }

    let mate_opt: Vec<Option<usize>> = mate.iter().map(|&w| (w != NONE).then_some(w)).collect();
    let matching = Matching::from_mates(g, &mate_opt);
    let cover = konig_cover(&adj, sides, &left, &mate);
    debug_assert_eq!(cover.len(), matching.len());
    Ok(BipartiteMatching { matching, cover })
}

// Alternating reachability from the free left vertices: cover is
// (L \ Z) ∪ (R ∩ Z).
fn konig_cover(adj: &[Vec<usize>], sides: &[Side], left: &[usize], mate: &[usize]) -> Vec<usize> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut queue: VecDeque<usize> = left.iter().copied().filter(|&u| mate[u] == NONE).collect();
    for &u in &queue {
        seen[u] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if seen[v] || mate[u] == v {
                continue;
            }
            seen[v] = true;
            let w = mate[v];
            if w != NONE && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    (0..n)
        .filter(|&v| match sides[v] {
            Side::Left => !seen[v] && !adj[v].is_empty(),
            Side::Right => seen[v],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeSubset;

    fn complete_bipartite(a: usize, b: usize) -> Graph {
        let left: Vec<usize> = (0..a).collect();
        let edges = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j)));
        Graph::bipartite(a + b, &left, edges).unwrap()
    }

    #[test]
    fn empty_graph() {
        let g = Graph::bipartite(4, &[0, 1], []).unwrap();
        let r = max_matching_bipartite(&g).unwrap();
        assert!(r.matching.is_empty());
        assert!(r.cover.is_empty());
    }

    #[test]
    fn complete_k44_is_perfect() {
        let g = complete_bipartite(4, 4);
        let r = max_matching_bipartite(&g).unwrap();
        assert_eq!(r.matching.len(), 4);
        assert_eq!(r.cover.len(), 4);
        assert!(EdgeSubset::full(&g).is_vertex_cover(&r.cover));
    }

    #[test]
    fn unbalanced_star_cover_is_center() {
        let g = complete_bipartite(1, 5);
        let r = max_matching_bipartite(&g).unwrap();
        assert_eq!(r.matching.len(), 1);
        assert_eq!(r.cover, vec![0]);
    }

    #[test]
    fn rejects_unlabeled() {
        let g = Graph::new(2, [(0, 1)]).unwrap();
        assert_eq!(max_matching_bipartite(&g).unwrap_err(), MatchError::NotBipartite);
    }

    #[test]
    fn needs_augmenting_path() {
        // greedy would take 0-3 and leave 1 stranded
        let g = Graph::bipartite(6, &[0, 1, 2], [(0, 3), (0, 4), (1, 3), (2, 4), (2, 5)]).unwrap();
        let r = max_matching_bipartite(&g).unwrap();
        assert_eq!(r.matching.len(), 3);
        assert!(EdgeSubset::full(&g).is_vertex_cover(&r.cover));
    }
}
