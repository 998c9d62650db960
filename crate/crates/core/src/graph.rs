//! Immutable simple graphs, edge subsets, and matchings.
//!
//! Edges are stored once in canonical `(min, max)` orientation and sorted
//! lexicographically; an [`EdgeId`] is the position of an edge in that
//! canonical list. Because of the ordering, the edges incident to a vertex
//! appear in the adjacency list in increasing edge-id order, which is also
//! increasing neighbour order.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod io;

/// Position of an edge in the canonical edge list of its [`Graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Side of a vertex in a bipartite instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({u}, {v}) has an endpoint outside [0, {n})")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("parallel edge ({u}, {v}); graphs are edge sets")]
    ParallelEdge { u: usize, v: usize },
    #[error("edge ({u}, {v}) does not cross the bipartition")]
    NotBipartite { u: usize, v: usize },
    #[error("bipartition lists vertex {0} which is out of range")]
    BadBipartition(usize),
    #[error("edge id {0} is not an edge of the graph")]
    UnknownEdge(EdgeId),
    #[error("edges {0} and {1} share vertex {2}")]
    NotAMatching(EdgeId, EdgeId, usize),
}

/// An immutable simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(u32, u32)>,
    // (neighbour, edge) pairs, sorted by edge id
    adj: Vec<Vec<(u32, EdgeId)>>,
    sides: Option<Vec<Side>>,
}

impl Graph {
    /// Builds a graph from an edge list. Edges may be given in any
    /// orientation and order; self-loops and parallel edges are rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut canon = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            canon.push((u.min(v) as u32, u.max(v) as u32));
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::ParallelEdge {
                u: w[0].0 as usize,
                v: w[0].1 as usize,
            });
        }
        Ok(Self::from_canonical(n, canon, None))
    }

    /// Builds a bipartite graph; `left` lists the left-side vertices and
    /// every edge must join a left vertex to a right vertex.
    pub fn bipartite<I>(n: usize, left: &[usize], edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let g = Self::new(n, edges)?;
        g.with_bipartition(left)
    }

    /// Attaches bipartition labels to an existing graph.
    pub fn with_bipartition(mut self, left: &[usize]) -> Result<Self, GraphError> {
        let mut sides = vec![Side::Right; self.n];
        for &v in left {
            if v >= self.n {
                return Err(GraphError::BadBipartition(v));
            }
            sides[v] = Side::Left;
        }
        for &(u, v) in &self.edges {
            if sides[u as usize] == sides[v as usize] {
                return Err(GraphError::NotBipartite {
                    u: u as usize,
                    v: v as usize,
                });
            }
        }
        self.sides = Some(sides);
        Ok(self)
    }

    // `edges` must be sorted, canonical and duplicate free.
    fn from_canonical(n: usize, edges: Vec<(u32, u32)>, sides: Option<Vec<Side>>) -> Self {
        let mut deg = vec![0usize; n];
        for &(u, v) in &edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut adj: Vec<Vec<(u32, EdgeId)>> = deg.iter().map(|&d| Vec::with_capacity(d)).collect();
        for (i, &(u, v)) in edges.iter().enumerate() {
            let e = EdgeId(i as u32);
            adj[u as usize].push((v, e));
            adj[v as usize].push((u, e));
        }
        Self {
            n,
            edges,
            adj,
            sides,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, Vec::new(), None)
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Endpoints `(u, v)` with `u < v`.
    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (usize, usize) {
        let (u, v) = self.edges[e.index()];
        (u as usize, v as usize)
    }

    pub fn edge_ids(&self) -> impl ExactSizeIterator<Item = EdgeId> {
        (0..self.edges.len() as u32).map(EdgeId)
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.edges.iter().map(|&(u, v)| (u as usize, v as usize))
    }

    /// `(neighbour, edge)` pairs incident to `v`, in edge-id order.
    pub fn neighbors(&self, v: usize) -> impl ExactSizeIterator<Item = (usize, EdgeId)> + '_ {
        self.adj[v].iter().map(|&(w, e)| (w as usize, e))
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<EdgeId> {
        if u >= self.n || v >= self.n || u == v {
            return None;
        }
        let (a, b) = (u.min(v), u.max(v));
        self.edges
            .binary_search(&(a as u32, b as u32))
            .ok()
            .map(|i| EdgeId(i as u32))
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        e.index() < self.edges.len()
    }

    pub fn sides(&self) -> Option<&[Side]> {
        self.sides.as_deref()
    }

    pub fn is_bipartite_labeled(&self) -> bool {
        self.sides.is_some()
    }

    /// Left-side vertices, if the graph carries a bipartition.
    pub fn left_vertices(&self) -> Option<Vec<usize>> {
        self.sides.as_ref().map(|s| {
            s.iter()
                .enumerate()
                .filter(|(_, &side)| side == Side::Left)
                .map(|(v, _)| v)
                .collect()
        })
    }

    /// The spanning subgraph on the same vertex set containing only the
    /// edges of `subset`, together with the map from its edge ids back to
    /// ids of `self`. Bipartition labels are kept.
    pub fn spanning_subgraph(&self, subset: &EdgeSubset<'_>) -> (Graph, Vec<EdgeId>) {
        let ids: Vec<EdgeId> = subset.iter().collect();
        let edges = ids.iter().map(|&e| self.edges[e.index()]).collect();
        (Self::from_canonical(self.n, edges, self.sides.clone()), ids)
    }

    /// Induced subgraph on `V \ removed`, with vertices renumbered compactly
    /// in increasing order of their old ids.
    pub fn remove_vertices(&self, removed: &[usize]) -> VertexRemoval {
        let mut gone = vec![false; self.n];
        for &v in removed {
            if v < self.n {
                gone[v] = true;
            }
        }
        let mut old_to_new = vec![None; self.n];
        let mut new_to_old = Vec::with_capacity(self.n);
        for v in 0..self.n {
            if !gone[v] {
                old_to_new[v] = Some(new_to_old.len());
                new_to_old.push(v);
            }
        }
        // relabeling is monotone, so the surviving edges stay sorted
        let edges: Vec<(u32, u32)> = self
            .edges
            .iter()
            .filter_map(|&(u, v)| {
                let nu = old_to_new[u as usize]?;
                let nv = old_to_new[v as usize]?;
                Some((nu as u32, nv as u32))
            })
            .collect();
        let sides = self
            .sides
            .as_ref()
            .map(|s| new_to_old.iter().map(|&v| s[v]).collect());
        VertexRemoval {
            graph: Self::from_canonical(new_to_old.len(), edges, sides),
            old_to_new,
            new_to_old,
        }
    }
}

/// Result of [`Graph::remove_vertices`].
#[derive(Clone, Debug)]
pub struct VertexRemoval {
    pub graph: Graph,
    pub old_to_new: Vec<Option<usize>>,
    pub new_to_old: Vec<usize>,
}

/// A subset of the edges of a parent graph.
#[derive(Clone, Debug)]
pub struct EdgeSubset<'g> {
    graph: &'g Graph,
    member: Vec<bool>,
    len: usize,
}

impl PartialEq for EdgeSubset<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.graph, other.graph) && self.member == other.member
    }
}

impl Eq for EdgeSubset<'_> {}

impl<'g> EdgeSubset<'g> {
    pub fn empty(graph: &'g Graph) -> Self {
        Self {
            graph,
            member: vec![false; graph.num_edges()],
            len: 0,
        }
    }

    pub fn full(graph: &'g Graph) -> Self {
        Self {
            graph,
            member: vec![true; graph.num_edges()],
            len: graph.num_edges(),
        }
    }

    pub fn from_ids<I>(graph: &'g Graph, ids: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = EdgeId>,
    {
        let mut s = Self::empty(graph);
        for e in ids {
            if !graph.contains_edge(e) {
                return Err(GraphError::UnknownEdge(e));
            }
            s.insert(e);
        }
        Ok(s)
    }

    pub fn from_predicate(graph: &'g Graph, mut keep: impl FnMut(EdgeId) -> bool) -> Self {
        let member: Vec<bool> = graph.edge_ids().map(&mut keep).collect();
        let len = member.iter().filter(|&&b| b).count();
        Self { graph, member, len }
    }

    #[inline]
    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, e: EdgeId) -> bool {
        self.member.get(e.index()).copied().unwrap_or(false)
    }

    /// Returns `true` if `e` was not already present.
    pub fn insert(&mut self, e: EdgeId) -> bool {
        let slot = &mut self.member[e.index()];
        let fresh = !*slot;
        *slot = true;
        self.len += fresh as usize;
        fresh
    }

    /// Returns `true` if `e` was present.
    pub fn remove(&mut self, e: EdgeId) -> bool {
        let slot = &mut self.member[e.index()];
        let was = *slot;
        *slot = false;
        self.len -= was as usize;
        was
    }

    /// Member ids in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.member
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| EdgeId(i as u32))
    }

    pub fn ids(&self) -> Vec<EdgeId> {
        self.iter().collect()
    }

    /// Number of member edges incident to `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.graph
            .adj[v]
            .iter()
            .filter(|&&(_, e)| self.member[e.index()])
            .count()
    }

    /// Degrees of all vertices in one pass over the members.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.graph.num_vertices()];
        for e in self.iter() {
            let (u, v) = self.graph.endpoints(e);
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, EdgeId)> + '_ {
        self.graph
            .neighbors(v)
            .filter(move |&(_, e)| self.member[e.index()])
    }

    fn same_parent(&self, other: &Self) {
        assert!(
            std::ptr::eq(self.graph, other.graph),
            "edge subsets of different graphs"
        );
    }

    pub fn union(&self, other: &Self) -> Self {
        self.same_parent(other);
        Self::from_predicate(self.graph, |e| self.contains(e) || other.contains(e))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.same_parent(other);
        Self::from_predicate(self.graph, |e| self.contains(e) && other.contains(e))
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.same_parent(other);
        Self::from_predicate(self.graph, |e| self.contains(e) && !other.contains(e))
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.same_parent(other);
        self.iter().all(|e| !other.contains(e))
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.same_parent(other);
        self.iter().all(|e| other.contains(e))
    }

    /// True iff every member edge has at least one endpoint in `cover`.
    pub fn is_vertex_cover(&self, cover: &[usize]) -> bool {
        let mut inside = vec![false; self.graph.num_vertices()];
        for &v in cover {
            if v < inside.len() {
                inside[v] = true;
            }
        }
        self.iter().all(|e| {
            let (u, v) = self.graph.endpoints(e);
            inside[u] || inside[v]
        })
    }
}

/// A set of pairwise vertex-disjoint edges of some graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching {
    edges: Vec<EdgeId>,
}

impl Matching {
    /// Validates vertex-disjointness against `graph`.
    pub fn new(graph: &Graph, edges: impl IntoIterator<Item = EdgeId>) -> Result<Self, GraphError> {
        let mut owner: Vec<Option<EdgeId>> = vec![None; graph.num_vertices()];
        let mut ids: Vec<EdgeId> = Vec::new();
        for e in edges {
            if !graph.contains_edge(e) {
                return Err(GraphError::UnknownEdge(e));
            }
            let (u, v) = graph.endpoints(e);
            for w in [u, v] {
                if let Some(f) = owner[w] {
                    return Err(GraphError::NotAMatching(f, e, w));
                }
                owner[w] = Some(e);
            }
            ids.push(e);
        }
        ids.sort_unstable();
        Ok(Self { edges: ids })
    }

    /// Builds a matching from a mate array (`mate[v] = Some(w)` iff `vw`
    /// is matched). Panics if the array is inconsistent with the graph.
    pub(crate) fn from_mates(graph: &Graph, mate: &[Option<usize>]) -> Self {
        let mut edges: Vec<EdgeId> = mate
            .iter()
            .enumerate()
            .filter_map(|(v, &w)| {
                let w = w?;
                (v < w).then(|| graph.edge_id(v, w).expect("mate pair is not an edge"))
            })
            .collect();
        edges.sort_unstable();
        debug_assert!(Self::new(graph, edges.iter().copied()).is_ok());
        Self { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// Matched vertices, sorted.
    pub fn vertices(&self, graph: &Graph) -> Vec<usize> {
        let mut vs: Vec<usize> = self
            .edges
            .iter()
            .flat_map(|&e| {
                let (u, v) = graph.endpoints(e);
                [u, v]
            })
            .collect();
        vs.sort_unstable();
        vs
    }

    /// `mate[v]` for every vertex of `graph`.
    pub fn mates(&self, graph: &Graph) -> Vec<Option<usize>> {
        let mut mate = vec![None; graph.num_vertices()];
        for &e in &self.edges {
            let (u, v) = graph.endpoints(e);
            mate[u] = Some(v);
            mate[v] = Some(u);
        }
        mate
    }

    /// Re-expresses a matching of a subgraph in terms of parent edge ids.
    pub fn lift(&self, parent_ids: &[EdgeId]) -> Matching {
        let mut edges: Vec<EdgeId> = self.edges.iter().map(|e| parent_ids[e.index()]).collect();
        edges.sort_unstable();
        Matching { edges }
    }

    pub fn as_subset<'g>(&self, graph: &'g Graph) -> EdgeSubset<'g> {
        EdgeSubset::from_ids(graph, self.edges.iter().copied())
            .expect("matching edges belong to the graph")
    }

    pub fn is_within(&self, subset: &EdgeSubset<'_>) -> bool {
        self.edges.iter().all(|&e| subset.contains(e))
    }
}
