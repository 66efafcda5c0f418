//! Connectors: short tight paths joining two path ends through pairs that are
//! well connected in the shaved graph, and chains of paths joined by them.
//!
//! A connector from end `a` to end `b` is the sequence
//! `a.inner a.outer u1 … uk b.outer b.inner`. Appending its internal vertices
//! to a path that finishes `… a.inner a.outer` and then continuing with a
//! path that starts `b.outer b.inner …` yields one tight path.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::{OrderedPair, ThreeGraph, Vertex};
use crate::path::{check_tight, PathEnd, TightCycle, TightPath, MIN_CYCLE_LEN};
use crate::shave::count_threshold;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectError {
    #[error("end ({}, {}) has codegree zero in the shaved graph", .0.inner, .0.outer)]
    BadEnds(PathEnd),
    #[error("connector ends share a vertex or are out of range")]
    EndsOverlap,
    #[error("no connector found (forward frontier {forward:?}, backward frontier {backward:?})")]
    NoPath { forward: Vec<usize>, backward: Vec<usize> },
    #[error("nothing to chain")]
    Empty,
    #[error("join {join} failed: {source}")]
    ChainFailed {
        join: usize,
        #[source]
        source: Box<ConnectError>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectorParams {
    /// Number of new vertices between the two ends.
    pub internal_len: usize,
    /// Smallest codegree, counted in the shaved graph over non-forbidden
    /// vertices, of every pair the connector passes through.
    pub beta_threshold: f64,
    /// Cap on each search layer.
    pub beam: usize,
    /// Other internal lengths to try, ascending, when the main one fails.
    pub allow_len_range: Option<(usize, usize)>,
    /// Searches with fresh randomness when a truncated search fails.
    pub attempts: usize,
}

impl ConnectorParams {
    pub fn new(internal_len: usize, beta_threshold: f64) -> Self {
        ConnectorParams { internal_len, beta_threshold, beam: 2048, allow_len_range: None, attempts: 4 }
    }
}

impl Default for ConnectorParams {
    fn default() -> Self {
        ConnectorParams::new(6, 1.0)
    }
}

/// One step of a tight walk: `(y, z)` for every `z ∈ N(x, y)`.
pub fn tight_steps(g: &ThreeGraph, x: Vertex, y: Vertex) -> Vec<OrderedPair> {
    g.neighbors(x, y).iter().map(|z| (y, z)).collect()
}

/// Pairs usable as waypoints, as an `n × n` table.
struct Waypoints {
    n: usize,
    ok: Vec<bool>,
}

impl Waypoints {
    fn new(hp: &ThreeGraph, allowed: &VertexSet, beta: f64) -> Self {
        let n = hp.n();
        let m = count_threshold(beta).max(1);
        let mut ok = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    ok[x * n + y] = hp.neighbors(x, y).intersection_count(allowed) >= m;
                }
            }
        }
        Waypoints { n, ok }
    }

    #[inline]
    fn ok(&self, x: Vertex, y: Vertex) -> bool {
        self.ok[x * self.n + y]
    }
}

/// Partial sequences, grown from one end, capped at `beam` by reservoir
/// sampling. `truncated` records whether any layer overflowed.
struct Layer {
    seqs: Vec<Vec<Vertex>>,
    truncated: bool,
}

fn grow<R: Rng + ?Sized>(
    g: &ThreeGraph,
    wp: &Waypoints,
    allowed: &VertexSet,
    layer: Layer,
    beam: usize,
    forward: bool,
    rng: &mut R,
) -> Layer {
    let mut next: Vec<Vec<Vertex>> = Vec::new();
    let mut seen = 0usize;
    let mut truncated = layer.truncated;
    for s in &layer.seqs {
        let (p, q) = (s[s.len() - 2], s[s.len() - 1]);
        for z in g.neighbors(p, q).iter() {
            if !allowed.contains(z) || s.contains(&z) {
                continue;
            }
            let fine = if forward { wp.ok(q, z) } else { wp.ok(z, q) };
            if !fine {
                continue;
            }
            seen += 1;
            if next.len() < beam {
                let mut t = s.clone();
                t.push(z);
                next.push(t);
            } else {
                truncated = true;
                let r = rng.gen_range(0..seen);
                if r < beam {
                    let mut t = s.clone();
                    t.push(z);
                    next[r] = t;
                }
            }
        }
    }
    Layer { seqs: next, truncated }
}

fn search_once<R: Rng + ?Sized>(
    g: &ThreeGraph,
    wp: &Waypoints,
    allowed: &VertexSet,
    a: PathEnd,
    b: PathEnd,
    k: usize,
    beam: usize,
    rng: &mut R,
) -> Result<Vec<Vertex>, (bool, Vec<usize>, Vec<usize>)> {
    if k < 2 {
        // No room to meet in the middle; plain depth-first search.
        let mut seq = vec![a.inner, a.outer];
        let ok = small_dfs(g, wp, allowed, &mut seq, k + 2, b);
        return if ok { Ok(seq) } else { Err((false, vec![], vec![])) };
    }
    let j = k.div_ceil(2) + 1;
    // Forward holds s0 … s_{j+1}; backward holds s_{k+3} down to s_j, reversed.
    let mut fwd = Layer { seqs: vec![vec![a.inner, a.outer]], truncated: false };
    let mut fsizes = vec![];
    for _ in 2..=j + 1 {
        fwd = grow(g, wp, allowed, fwd, beam, true, rng);
        fsizes.push(fwd.seqs.len());
    }
    let mut bwd = Layer { seqs: vec![vec![b.inner, b.outer]], truncated: false };
    let mut bsizes = vec![];
    for _ in (j..=k + 1).rev() {
        bwd = grow(g, wp, allowed, bwd, beam, false, rng);
        bsizes.push(bwd.seqs.len());
    }
    let truncated = fwd.truncated || bwd.truncated;

    let mut meet: HashMap<OrderedPair, Vec<usize>> = HashMap::new();
    for (i, s) in bwd.seqs.iter().enumerate() {
        let l = s.len();
        meet.entry((s[l - 1], s[l - 2])).or_default().push(i);
    }
    let mut order: Vec<usize> = (0..fwd.seqs.len()).collect();
    if truncated {
        order.shuffle(rng);
    }
    for fi in order {
        let f = &fwd.seqs[fi];
        let l = f.len();
        let Some(cands) = meet.get(&(f[l - 2], f[l - 1])) else { continue };
        for &bi in cands {
            let bs = &bwd.seqs[bi];
            // Shared vertices are exactly the meeting pair.
            let clash = bs[..bs.len() - 2].iter().any(|v| f.contains(v));
            if clash {
                continue;
            }
            let mut seq = f.clone();
            seq.extend(bs[..bs.len() - 2].iter().rev());
            return Ok(seq);
        }
    }
    Err((truncated, fsizes, bsizes))
}

fn small_dfs(g: &ThreeGraph, wp: &Waypoints, allowed: &VertexSet, seq: &mut Vec<Vertex>, target: usize, b: PathEnd) -> bool {
    let (p, q) = (seq[seq.len() - 2], seq[seq.len() - 1]);
    if seq.len() == target {
        if wp.ok(q, b.outer) && g.has_edge(p, q, b.outer) && g.has_edge(q, b.outer, b.inner) {
            seq.push(b.outer);
            seq.push(b.inner);
            return true;
        }
        return false;
    }
    for z in g.neighbors(p, q).iter() {
        if !allowed.contains(z) || seq.contains(&z) || !wp.ok(q, z) {
            continue;
        }
        seq.push(z);
        if small_dfs(g, wp, allowed, seq, target, b) {
            return true;
        }
        seq.pop();
    }
    false
}

/// Finds a connector from `a` to `b` in `g` avoiding `forbidden`.
///
/// Internal vertices come from outside `forbidden` and the four end
/// vertices. Every pair the connector steps through (from `(a.outer, u1)`
/// to `(uk, b.outer)`) must have at least `beta_threshold` neighbours in
/// `hp` outside `forbidden`, and both end pairs must lie in the shadow of
/// `hp`.
///
/// The search grows partial sequences from both ends and joins them on a
/// common middle pair. When no layer exceeds `beam` the search is
/// exhaustive and `NoPath` is final; otherwise it is repeated with fresh
/// randomness up to `attempts` times.
pub fn connect_pair<R: Rng + ?Sized>(
    g: &ThreeGraph,
    hp: &ThreeGraph,
    a: PathEnd,
    b: PathEnd,
    forbidden: &VertexSet,
    p: &ConnectorParams,
    rng: &mut R,
) -> Result<TightPath, ConnectError> {
    let n = g.n();
    let ends = [a.inner, a.outer, b.outer, b.inner];
    let mut end_set = VertexSet::new(n);
    for &v in &ends {
        if v >= n || !end_set.insert(v) {
            return Err(ConnectError::EndsOverlap);
        }
    }
    for e in [a, b] {
        if hp.pair_codegree(e.inner, e.outer) == 0 {
            return Err(ConnectError::BadEnds(e));
        }
    }
    let mut allowed = forbidden.complement();
    allowed.union_with(&end_set);
    let wp = Waypoints::new(hp, &allowed, p.beta_threshold);
    allowed.difference_with(&end_set);

    let mut lengths = vec![p.internal_len];
    if let Some((lo, hi)) = p.allow_len_range {
        lengths.extend((lo..=hi).filter(|&k| k != p.internal_len));
    }
    let mut last = (vec![], vec![]);
    for &k in &lengths {
        for _ in 0..p.attempts.max(1) {
            match search_once(g, &wp, &allowed, a, b, k, p.beam.max(1), rng) {
                Ok(seq) => {
                    assert!(check_tight(g, &seq, false).is_ok(), "connector failed verification");
                    assert!(seq[1..seq.len() - 2].windows(2).all(|w| wp.ok(w[0], w[1])), "waypoint below threshold");
                    return Ok(TightPath::from_vec_unchecked(seq));
                }
                Err((truncated, f, bk)) => {
                    last = (f, bk);
                    if !truncated {
                        break;
                    }
                }
            }
        }
    }
    Err(ConnectError::NoPath { forward: last.0, backward: last.1 })
}

/// The result of [`connect_chain`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chain {
    Path(TightPath),
    Cycle(TightCycle),
}

impl Chain {
    pub fn vertices(&self) -> &[Vertex] {
        match self {
            Chain::Path(p) => p.vertices(),
            Chain::Cycle(c) => c.order(),
        }
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        match self {
            Chain::Path(p) => p.into_vec(),
            Chain::Cycle(c) => c.into_vec(),
        }
    }
}

/// Joins `paths` in order, the finish of each to the start of the next, and
/// if `close_cycle` also the last back to the first.
///
/// Connector vertices avoid `forbidden`, every input path, and every earlier
/// connector.
pub fn connect_chain<R: Rng + ?Sized>(
    g: &ThreeGraph,
    hp: &ThreeGraph,
    paths: &[TightPath],
    forbidden: &VertexSet,
    p: &ConnectorParams,
    rng: &mut R,
    close_cycle: bool,
) -> Result<Chain, ConnectError> {
    let Some(first) = paths.first() else { return Err(ConnectError::Empty) };
    let mut blocked = forbidden.clone();
    for path in paths {
        for &v in path.vertices() {
            blocked.insert(v);
        }
    }
    let mut seq = first.vertices().to_vec();
    let mut join = 0;
    let mut link = |seq: &mut Vec<Vertex>, a: PathEnd, b: PathEnd, blocked: &mut VertexSet, join: usize| {
        // Ends of the two paths are blocked as path vertices; the connector
        // may touch them only as its own ends.
        for v in [a.inner, a.outer, b.inner, b.outer] {
            blocked.remove(v);
        }
        let res = connect_pair(g, hp, a, b, blocked, p, rng);
        for v in [a.inner, a.outer, b.inner, b.outer] {
            blocked.insert(v);
        }
        let c = res.map_err(|e| ConnectError::ChainFailed { join, source: Box::new(e) })?;
        let inner = &c.vertices()[2..c.len() - 2];
        for &v in inner {
            blocked.insert(v);
        }
        seq.extend_from_slice(inner);
        Ok(())
    };
    for next in &paths[1..] {
        let a = PathEnd::new(seq[seq.len() - 2], seq[seq.len() - 1]);
        link(&mut seq, a, next.start_end(), &mut blocked, join)?;
        seq.extend_from_slice(next.vertices());
        join += 1;
    }
    if !close_cycle {
        return Ok(Chain::Path(TightPath::from_vec_unchecked(seq)));
    }
    if seq.len() < 4 {
        return Err(ConnectError::ChainFailed { join, source: Box::new(ConnectError::EndsOverlap) });
    }
    let a = PathEnd::new(seq[seq.len() - 2], seq[seq.len() - 1]);
    let b = PathEnd::new(seq[1], seq[0]);
    link(&mut seq, a, b, &mut blocked, join)?;
    if seq.len() < MIN_CYCLE_LEN {
        return Err(ConnectError::ChainFailed { join, source: Box::new(ConnectError::EndsOverlap) });
    }
    assert!(check_tight(g, &seq, true).is_ok(), "chained cycle failed verification");
    Ok(Chain::Cycle(TightCycle::from_vec_unchecked(seq)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::oracle;
    use crate::seed::stage_rng;

    #[test]
    fn steps() {
        let k5 = generate::complete(5);
        assert_eq!(tight_steps(&k5, 0, 1), vec![(1, 2), (1, 3), (1, 4)]);
        let one = ThreeGraph::from_edges(5, [(0, 1, 2)]).unwrap();
        assert_eq!(tight_steps(&one, 0, 1), vec![(1, 2)]);
        assert!(tight_steps(&one, 3, 4).is_empty());
    }

    #[test]
    fn complete_graph_connector() {
        let k = generate::complete(14);
        let none = VertexSet::new(14);
        let p = ConnectorParams::new(6, 1.0);
        let c = connect_pair(&k, &k, PathEnd::new(0, 1), PathEnd::new(2, 3), &none, &p, &mut stage_rng(1, "c")).unwrap();
        assert_eq!(c.len(), 10);
        assert_eq!(&c.vertices()[..2], &[0, 1]);
        assert_eq!(&c.vertices()[8..], &[3, 2]);
        assert!(oracle::verify_tight_path(&k, c.vertices()));
        assert!(c.vertices()[2..8].iter().all(|&v| v >= 4));
    }

    #[test]
    fn every_short_length() {
        let k = generate::complete(12);
        let none = VertexSet::new(12);
        for len in 0..=8 {
            let p = ConnectorParams::new(len, 1.0);
            let c = connect_pair(&k, &k, PathEnd::new(0, 1), PathEnd::new(2, 3), &none, &p, &mut stage_rng(3, "c")).unwrap();
            assert_eq!(c.len(), len + 4);
            assert!(oracle::verify_tight_path(&k, c.vertices()));
        }
        let p = ConnectorParams::new(9, 1.0);
        assert!(matches!(
            connect_pair(&k, &k, PathEnd::new(0, 1), PathEnd::new(2, 3), &none, &p, &mut stage_rng(3, "c")),
            Err(ConnectError::NoPath { .. })
        ));
    }

    #[test]
    fn components_do_not_connect() {
        let g = generate::disjoint_complete(20, 10);
        let none = VertexSet::new(20);
        let p = ConnectorParams::new(6, 1.0);
        let r = connect_pair(&g, &g, PathEnd::new(0, 1), PathEnd::new(10, 11), &none, &p, &mut stage_rng(1, "c"));
        assert!(matches!(r, Err(ConnectError::NoPath { .. })));
        let r = connect_pair(&g, &g, PathEnd::new(0, 1), PathEnd::new(0, 11), &none, &p, &mut stage_rng(1, "c"));
        assert_eq!(r, Err(ConnectError::EndsOverlap));
        let lonely = ThreeGraph::from_edges(8, [(0, 1, 2)]).unwrap();
        let r = connect_pair(&lonely, &lonely, PathEnd::new(0, 1), PathEnd::new(4, 5), &VertexSet::new(8), &p, &mut stage_rng(1, "c"));
        assert_eq!(r, Err(ConnectError::BadEnds(PathEnd::new(4, 5))));
    }

    #[test]
    fn chain_arithmetic() {
        let k = generate::complete(24);
        let none = VertexSet::new(24);
        let p = ConnectorParams::new(6, 1.0);
        let a = TightPath::new(&k, vec![0, 1, 2, 3, 4]).unwrap();
        let b = TightPath::new(&k, vec![5, 6, 7, 8, 9]).unwrap();
        let single = connect_chain(&k, &k, std::slice::from_ref(&a), &none, &p, &mut stage_rng(1, "ch"), false).unwrap();
        assert_eq!(single, Chain::Path(a.clone()));
        let both = connect_chain(&k, &k, &[a.clone(), b.clone()], &none, &p, &mut stage_rng(1, "ch"), false).unwrap();
        let v = both.vertices();
        assert_eq!(v.len(), 16);
        assert_eq!(&v[..5], a.vertices());
        assert_eq!(&v[11..], b.vertices());
        assert!(oracle::verify_tight_path(&k, v));
        let cyc = connect_chain(&k, &k, &[a, b], &none, &p, &mut stage_rng(1, "ch"), true).unwrap();
        assert_eq!(cyc.vertices().len(), 22);
        assert!(oracle::verify_tight_cycle(&k, cyc.vertices()));
    }
}
