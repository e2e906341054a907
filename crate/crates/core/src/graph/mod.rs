//! Simple undirected graphs over dense vertex ids and the structural
//! algorithms the game, solver and characterizations are built on.

mod build;
mod enumerate;
pub mod io;
mod search;
mod theta;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use build::{
    bowtie, build_theta, clique_pair, complete, complete_bipartite, cycle, cycles_sharing_vertex,
    grid_from_coords, path, rectangular_grid, star,
};
pub use enumerate::{canonical_code, enumerate_connected_graphs, is_isomorphic, MAX_ENUMERATION_ORDER};
pub use search::{
    bipartition, circumference, components_after_removal, cut_vertices, girth, hamiltonian_cycle,
    hamiltonian_path_between, has_hamiltonian_path, Limits,
};
pub use theta::{find_theta_n322, ThetaCertificate};

/// Largest vertex count a [`Graph`] can hold; vertex sets are 64-bit masks.
pub const MAX_VERTICES: usize = 64;

pub type Coord = (i32, i32);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has {0} vertices, at most {MAX_VERTICES} are supported")]
    TooManyVertices(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(usize, usize),
    #[error("duplicate grid coordinate ({0}, {1})")]
    DuplicateCoord(i32, i32),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is empty")]
    Empty,
    #[error("invalid theta parameters ({p}, {q}, {r}): {rule}")]
    InvalidTheta {
        p: usize,
        q: usize,
        r: usize,
        rule: &'static str,
    },
    #[error("{op} refused: graph has {n} vertices, search ceiling is {limit}")]
    CeilingExceeded {
        op: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid graph document: {0}")]
    Document(String),
}

/// A set of vertices of a graph with at most [`MAX_VERTICES`] vertices.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1u64 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1u64 << v);
    }

    pub fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    pub fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    pub fn union(self, other: VertexSet) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> VertexIter {
        VertexIter(self.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = VertexSet::EMPTY;
        for v in iter {
            set.insert(v);
        }
        set
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = VertexIter;

    fn into_iter(self) -> VertexIter {
        self.iter()
    }
}

/// Ascending iterator over the members of a [`VertexSet`].
#[derive(Clone, Debug)]
pub struct VertexIter(u64);

impl Iterator for VertexIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for VertexIter {}

/// An immutable simple undirected graph on vertices `0..n`.
///
/// Grid graphs additionally carry one integer coordinate per vertex; for
/// those, `uv` is an edge exactly when the coordinates are at unit distance.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    masks: Vec<VertexSet>,
    coords: Option<Vec<Coord>>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops and parallel edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        let mut masks = vec![VertexSet::EMPTY; n];
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if masks[a].contains(b) {
                return Err(GraphError::ParallelEdge(a.min(b), a.max(b)));
            }
            masks[a].insert(b);
            masks[b].insert(a);
        }
        Ok(Self::from_masks(masks))
    }

    pub(crate) fn from_masks(masks: Vec<VertexSet>) -> Self {
        let adj = masks.iter().map(|m| m.iter().collect()).collect();
        Graph {
            adj,
            masks,
            coords: None,
        }
    }

    pub(crate) fn with_coords(mut self, coords: Vec<Coord>) -> Self {
        debug_assert_eq!(coords.len(), self.n());
        self.coords = Some(coords);
        self
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n()
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        self.masks[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n() && self.masks[a].contains(b)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn coords(&self) -> Option<&[Coord]> {
        self.coords.as_deref()
    }

    pub fn coord(&self, v: usize) -> Option<Coord> {
        self.coords.as_ref().map(|c| c[v])
    }

    pub fn vertex_at(&self, c: Coord) -> Option<usize> {
        self.coords.as_ref()?.iter().position(|&x| x == c)
    }

    pub fn is_grid(&self) -> bool {
        self.coords.is_some()
    }

    /// Vertices reachable from `start` using only vertices in `within`.
    pub fn reachable_within(&self, start: usize, within: VertexSet) -> VertexSet {
        if !within.contains(start) {
            return VertexSet::EMPTY;
        }
        let mut seen = VertexSet::singleton(start);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = VertexSet::EMPTY;
            for v in frontier {
                next = next.union(self.masks[v]);
            }
            frontier = next.intersection(within).difference(seen);
            seen = seen.union(frontier);
        }
        seen
    }

    /// Whether the subgraph induced by `within` is connected (the empty set counts).
    pub fn is_connected_within(&self, within: VertexSet) -> bool {
        match within.first() {
            None => true,
            Some(s) => self.reachable_within(s, within) == within,
        }
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_within(self.vertex_set())
    }

    /// Whether the subgraph induced by `set` is a clique.
    pub fn is_clique(&self, set: VertexSet) -> bool {
        set.iter().all(|v| set.without(v).is_subset(self.masks[v]))
    }

    pub fn is_complete(&self) -> bool {
        self.is_clique(self.vertex_set())
    }

    /// Subgraph induced by `vertices`, relabelled `0..k` in the given order.
    /// Coordinates are carried over when present.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let index: Vec<Option<usize>> = {
            let mut idx = vec![None; self.n()];
            for (i, &v) in vertices.iter().enumerate() {
                idx[v] = Some(i);
            }
            idx
        };
        let masks = vertices
            .iter()
            .map(|&v| {
                self.masks[v]
                    .iter()
                    .filter_map(|w| index[w])
                    .collect::<VertexSet>()
            })
            .collect();
        let g = Graph::from_masks(masks);
        match &self.coords {
            Some(c) => g.with_coords(vertices.iter().map(|&v| c[v]).collect()),
            None => g,
        }
    }

    /// Same graph with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let n = self.n();
        let mut masks = vec![VertexSet::EMPTY; n];
        for (u, v) in self.edges() {
            masks[perm[u]].insert(perm[v]);
            masks[perm[v]].insert(perm[u]);
        }
        let g = Graph::from_masks(masks);
        match &self.coords {
            Some(c) => {
                let mut moved = vec![(0, 0); n];
                for v in 0..n {
                    moved[perm[v]] = c[v];
                }
                g.with_coords(moved)
            }
            None => g,
        }
    }

    /// Checks that `path` is a simple path of this graph.
    pub fn is_simple_path(&self, path: &[usize]) -> bool {
        let mut seen = VertexSet::EMPTY;
        for (i, &v) in path.iter().enumerate() {
            if v >= self.n() || seen.contains(v) {
                return false;
            }
            if i > 0 && !self.has_edge(path[i - 1], v) {
                return false;
            }
            seen.insert(v);
        }
        true
    }

    /// Checks that `cycle` lists the vertices of a simple cycle (length at least 3).
    pub fn is_cycle(&self, cycle: &[usize]) -> bool {
        cycle.len() >= 3 && self.is_simple_path(cycle) && self.has_edge(cycle[cycle.len() - 1], cycle[0])
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n(), self.edges())
    }
}

/// Serializable description of a graph, shared by the JSON file format and
/// the HTTP API.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: Vec<serde_json::Value>,
    pub edges: Vec<[serde_json::Value; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<[i32; 2]>>,
}
