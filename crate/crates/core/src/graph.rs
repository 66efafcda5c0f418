//! 3-uniform hypergraph storage.
//!
//! The graph is stored entirely through its pair neighbourhoods: for every
//! ordered pair `(x, y)` a bit-vector holds `N(x, y) = {z : {x, y, z} ∈ E}`.
//! Both orientations of a pair share identical contents. Edge membership,
//! codegree and neighbourhood intersections are then word operations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::VertexSet;

/// Vertices are dense indices in `0..n`.
pub type Vertex = usize;

/// `(first, second)`; used for path ends and shadow elements.
pub type OrderedPair = (Vertex, Vertex);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: Vertex, n: usize },
    #[error("degenerate triple ({0}, {1}, {2}) repeats a vertex")]
    DegenerateTriple(Vertex, Vertex, Vertex),
    #[error("degenerate pair: both ends are vertex {0}")]
    DegeneratePair(Vertex),
}

/// An edge in canonical (ascending) form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Triple([Vertex; 3]);

impl Triple {
    pub fn new(a: Vertex, b: Vertex, c: Vertex) -> Result<Self, GraphError> {
        if a == b || b == c || a == c {
            return Err(GraphError::DegenerateTriple(a, b, c));
        }
        let mut v = [a, b, c];
        v.sort_unstable();
        Ok(Triple(v))
    }

    #[inline]
    pub fn vertices(&self) -> [Vertex; 3] {
        self.0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct ThreeGraph {
    n: usize,
    /// Row-major `n × n` table of pair neighbourhoods; the diagonal stays empty.
    pairs: Vec<VertexSet>,
    edge_count: usize,
}

impl std::fmt::Debug for ThreeGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ThreeGraph")
            .field("n", &self.n)
            .field("edges", &self.edge_count)
            .finish()
    }
}

impl ThreeGraph {
    pub fn new(n: usize) -> Self {
        ThreeGraph { n, pairs: vec![VertexSet::new(n); n * n], edge_count: 0 }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex, Vertex)>,
    {
        let mut g = Self::new(n);
        for (a, b, c) in edges {
            g.add_edge(a, b, c)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    fn check(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::OutOfRange { vertex: v, n: self.n })
        }
    }

    fn check_triple(&self, a: Vertex, b: Vertex, c: Vertex) -> Result<Triple, GraphError> {
        self.check(a)?;
        self.check(b)?;
        self.check(c)?;
        Triple::new(a, b, c)
    }

    #[inline]
    fn slot(&self, x: Vertex, y: Vertex) -> usize {
        x * self.n + y
    }

    /// Adds `{a, b, c}`; returns whether the edge is new. Idempotent.
    pub fn add_edge(&mut self, a: Vertex, b: Vertex, c: Vertex) -> Result<bool, GraphError> {
        let t = self.check_triple(a, b, c)?;
        Ok(self.insert_triple(t))
    }

    /// Removes `{a, b, c}`; returns whether it was present.
    pub fn remove_edge(&mut self, a: Vertex, b: Vertex, c: Vertex) -> Result<bool, GraphError> {
        let t = self.check_triple(a, b, c)?;
        Ok(self.delete_triple(t))
    }

    pub fn insert_triple(&mut self, t: Triple) -> bool {
        let [a, b, c] = t.vertices();
        let ab = self.slot(a, b);
        if !self.pairs[ab].insert(c) {
            return false;
        }
        for (x, y, z) in [(b, a, c), (a, c, b), (c, a, b), (b, c, a), (c, b, a)] {
            let s = self.slot(x, y);
            self.pairs[s].insert(z);
        }
        self.edge_count += 1;
        true
    }

    pub fn delete_triple(&mut self, t: Triple) -> bool {
        let [a, b, c] = t.vertices();
        let ab = self.slot(a, b);
        if !self.pairs[ab].remove(c) {
            return false;
        }
        for (x, y, z) in [(b, a, c), (a, c, b), (c, a, b), (b, c, a), (c, b, a)] {
            let s = self.slot(x, y);
            self.pairs[s].remove(z);
        }
        self.edge_count -= 1;
        true
    }

    /// Edge membership; `false` for degenerate or out-of-range triples.
    #[inline]
    pub fn has_edge(&self, a: Vertex, b: Vertex, c: Vertex) -> bool {
        a < self.n && b < self.n && a != b && self.pairs[self.slot(a, b)].contains(c)
    }

    /// `N(x, y)`. The caller guarantees `x, y < n`.
    #[inline]
    pub fn neighbors(&self, x: Vertex, y: Vertex) -> &VertexSet {
        &self.pairs[self.slot(x, y)]
    }

    pub fn codegree(&self, x: Vertex, y: Vertex) -> Result<usize, GraphError> {
        self.check(x)?;
        self.check(y)?;
        if x == y {
            return Err(GraphError::DegeneratePair(x));
        }
        Ok(self.pair_codegree(x, y))
    }

    /// Codegree without validation; `0` on the diagonal.
    #[inline]
    pub fn pair_codegree(&self, x: Vertex, y: Vertex) -> usize {
        self.pairs[self.slot(x, y)].len()
    }

    pub fn vertex_degree(&self, v: Vertex) -> usize {
        (0..self.n).map(|x| self.pair_codegree(v, x)).sum::<usize>() / 2
    }

    pub fn min_vertex_degree(&self) -> usize {
        (0..self.n).map(|v| self.vertex_degree(v)).min().unwrap_or(0)
    }

    /// Minimum over unordered pairs; `0` when `n < 2`.
    pub fn min_codegree(&self) -> usize {
        self.unordered_pairs()
            .map(|(x, y)| self.pair_codegree(x, y))
            .min()
            .unwrap_or(0)
    }

    /// `∂H`: ordered pairs of positive codegree, in lexicographic order.
    pub fn shadow(&self) -> Vec<OrderedPair> {
        let mut out = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                if x != y && self.pair_codegree(x, y) > 0 {
                    out.push((x, y));
                }
            }
        }
        out
    }

    #[inline]
    pub fn in_shadow(&self, x: Vertex, y: Vertex) -> bool {
        x < self.n && y < self.n && !self.neighbors(x, y).is_empty()
    }

    /// `deg(v, A) = |N(v) ∩ C(A, 2)|`: edges `{v, x, y}` with `x, y ∈ A`.
    pub fn restricted_degree(&self, v: Vertex, set: &VertexSet) -> usize {
        set.iter()
            .filter(|&x| x != v)
            .map(|x| self.neighbors(v, x).intersection_count(set))
            .sum::<usize>()
            / 2
    }

    /// `deg(xy, A) = |N(x, y) ∩ A|`.
    #[inline]
    pub fn restricted_codegree(&self, x: Vertex, y: Vertex, set: &VertexSet) -> usize {
        self.neighbors(x, y).intersection_count(set)
    }

    pub fn unordered_pairs(&self) -> impl Iterator<Item = OrderedPair> + '_ {
        let n = self.n;
        (0..n).flat_map(move |x| (x + 1..n).map(move |y| (x, y)))
    }

    /// All edges in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Triple> + '_ {
        self.unordered_pairs().flat_map(move |(x, y)| {
            self.neighbors(x, y)
                .iter()
                .filter(move |&z| z > y)
                .map(move |z| Triple([x, y, z]))
        })
    }

    /// Induced subgraph on `set`, relabelled to `0..|set|` in ascending order.
    /// The returned map sends new labels to original vertices.
    pub fn induced_subgraph(&self, set: &VertexSet) -> (ThreeGraph, Vec<Vertex>) {
        let map = set.to_vec();
        let mut inverse = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            inverse[v] = i;
        }
        let mut h = ThreeGraph::new(map.len());
        for (i, &x) in map.iter().enumerate() {
            for &y in &map[i + 1..] {
                for z in self.neighbors(x, y).iter() {
                    if z > y && set.contains(z) {
                        h.insert_triple(Triple([inverse[x], inverse[y], inverse[z]]));
                    }
                }
            }
        }
        (h, map)
    }

    /// Subgraph on the same vertex set keeping only edges inside `set`.
    pub fn restrict_to(&self, set: &VertexSet) -> ThreeGraph {
        let mut h = ThreeGraph::new(self.n);
        for t in self.edges() {
            if t.vertices().iter().all(|&v| set.contains(v)) {
                h.insert_triple(t);
            }
        }
        h
    }

    /// Whether every edge of `self` is an edge of `other` (same vertex count).
    pub fn is_subgraph_of(&self, other: &ThreeGraph) -> bool {
        self.n == other.n
            && self
                .pairs
                .iter()
                .zip(&other.pairs)
                .all(|(a, b)| a.is_subset(b))
    }
}
