//! Tight paths, tight cycles and path ends.
//!
//! For a path `v1 v2 … vp` the ends are the ordered pairs `(v2, v1)` and
//! `(v(p-1), vp)`: an end is `(inner, outer)`, with `outer` the extreme vertex.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::{ThreeGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("sequence of length {0} is too short")]
    TooShort(usize),
    #[error("vertex {0} out of range")]
    OutOfRange(Vertex),
    #[error("vertex {0} appears more than once")]
    RepeatedVertex(Vertex),
    #[error("window ({0}, {1}, {2}) is not an edge")]
    MissingWindow(Vertex, Vertex, Vertex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathEnd {
    pub inner: Vertex,
    pub outer: Vertex,
}

impl PathEnd {
    pub fn new(inner: Vertex, outer: Vertex) -> Self {
        PathEnd { inner, outer }
    }
}

/// Checks distinctness and that every consecutive triple is an edge.
pub(crate) fn check_tight(g: &ThreeGraph, seq: &[Vertex], cyclic: bool) -> Result<(), PathError> {
    let mut seen = VertexSet::new(g.n());
    for &v in seq {
        if v >= g.n() {
            return Err(PathError::OutOfRange(v));
        }
        if !seen.insert(v) {
            return Err(PathError::RepeatedVertex(v));
        }
    }
    let p = seq.len();
    let windows = if cyclic { p } else { p.saturating_sub(2) };
    for i in 0..windows {
        let (a, b, c) = (seq[i], seq[(i + 1) % p], seq[(i + 2) % p]);
        if !g.has_edge(a, b, c) {
            return Err(PathError::MissingWindow(a, b, c));
        }
    }
    Ok(())
}

/// A vertex sequence whose consecutive triples are edges of its host graph.
///
/// The host is not borrowed; [`TightPath::new`] validates against it once and
/// [`TightPath::check`] re-validates on demand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TightPath {
    seq: Vec<Vertex>,
}

impl TightPath {
    pub fn new(g: &ThreeGraph, seq: Vec<Vertex>) -> Result<Self, PathError> {
        if seq.len() < 3 {
            return Err(PathError::TooShort(seq.len()));
        }
        check_tight(g, &seq, false)?;
        Ok(TightPath { seq })
    }

    /// Wraps a sequence the caller has already validated.
    pub(crate) fn from_vec_unchecked(seq: Vec<Vertex>) -> Self {
        TightPath { seq }
    }

    pub fn check(&self, g: &ThreeGraph) -> Result<(), PathError> {
        if self.seq.len() < 3 {
            return Err(PathError::TooShort(self.seq.len()));
        }
        check_tight(g, &self.seq, false)
    }

    #[inline]
    pub fn vertices(&self) -> &[Vertex] {
        &self.seq
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.seq
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// `(v2, v1)`.
    pub fn start_end(&self) -> PathEnd {
        PathEnd::new(self.seq[1], self.seq[0])
    }

    /// `(v(p-1), vp)`.
    pub fn finish_end(&self) -> PathEnd {
        let p = self.seq.len();
        PathEnd::new(self.seq[p - 2], self.seq[p - 1])
    }

    pub fn reversed(&self) -> TightPath {
        let mut seq = self.seq.clone();
        seq.reverse();
        TightPath { seq }
    }

    pub fn vertex_set(&self, n: usize) -> VertexSet {
        VertexSet::from_vertices(n, self.seq.iter().copied())
    }
}

/// A cyclic vertex order in which every cyclic window of three is an edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TightCycle {
    order: Vec<Vertex>,
}

/// Shortest order for which all cyclic windows are distinct triples.
pub const MIN_CYCLE_LEN: usize = 5;

impl TightCycle {
    pub fn new(g: &ThreeGraph, order: Vec<Vertex>) -> Result<Self, PathError> {
        if order.len() < MIN_CYCLE_LEN {
            return Err(PathError::TooShort(order.len()));
        }
        check_tight(g, &order, true)?;
        Ok(TightCycle { order })
    }

    pub(crate) fn from_vec_unchecked(order: Vec<Vertex>) -> Self {
        TightCycle { order }
    }

    #[inline]
    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}
