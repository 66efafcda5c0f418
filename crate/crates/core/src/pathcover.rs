//! Covering almost every vertex with a few disjoint tight paths.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::{ThreeGraph, Vertex};
use crate::path::TightPath;
use crate::seed::indexed_rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverParams {
    /// Largest allowed leftover, as a fraction of the vertices to cover.
    pub zeta: f64,
    /// Most paths allowed.
    pub l0: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl CoverParams {
    pub fn new(zeta: f64, l0: usize) -> Self {
        CoverParams { zeta, l0, restarts: 5, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverResult {
    pub paths: Vec<TightPath>,
    /// Vertices on no path.
    pub leftover: VertexSet,
}

impl CoverResult {
    pub fn covered(&self) -> usize {
        self.paths.iter().map(|p| p.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoverError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("best cover leaves {} vertices, target is at most {target:.2}", best.leftover.len())]
    CoverTooSparse { best: Box<CoverResult>, target: f64 },
}

fn pick<R: Rng + ?Sized>(set: &VertexSet, rng: &mut R) -> Option<Vertex> {
    let c = set.len();
    (c > 0).then(|| set.nth(rng.gen_range(0..c)).expect("index below len"))
}

/// Grows `path` greedily at both ends with vertices from `available`,
/// alternating which end goes first, until neither end can move. Each new
/// vertex is uniform among the candidates at that end.
pub fn extend_path<R: Rng + ?Sized>(g: &ThreeGraph, path: &TightPath, available: &VertexSet, rng: &mut R) -> TightPath {
    let mut seq: VecDeque<Vertex> = path.vertices().iter().copied().collect();
    let mut avail = available.clone();
    for &v in path.vertices() {
        avail.remove(v);
    }
    let mut back_first = true;
    loop {
        let l = seq.len();
        let back = g.neighbors(seq[l - 2], seq[l - 1]).intersection(&avail);
        let front = g.neighbors(seq[1], seq[0]).intersection(&avail);
        let (first, second) = if back_first { (&back, &front) } else { (&front, &back) };
        let (chosen, at_back) = match pick(first, rng) {
            Some(z) => (z, back_first),
            None => match pick(second, rng) {
                Some(z) => (z, !back_first),
                None => break,
            },
        };
        if at_back {
            seq.push_back(chosen);
        } else {
            seq.push_front(chosen);
        }
        avail.remove(chosen);
        back_first = !back_first;
    }
    TightPath::from_vec_unchecked(seq.into())
}

/// A uniformly random edge with all three vertices in `avail`, in random order.
fn random_edge<R: Rng + ?Sized>(g: &ThreeGraph, avail: &VertexSet, rng: &mut R) -> Option<[Vertex; 3]> {
    // Each edge is counted once per pair it contains, so weighting pairs by
    // their available codegree picks edges uniformly.
    let verts = avail.to_vec();
    let mut weights = Vec::new();
    let mut total = 0usize;
    for (i, &x) in verts.iter().enumerate() {
        for &y in &verts[i + 1..] {
            let c = g.neighbors(x, y).intersection_count(avail);
            if c > 0 {
                weights.push((x, y, c));
                total += c;
            }
        }
    }
    if total == 0 {
        return None;
    }
    let mut r = rng.gen_range(0..total);
    for (x, y, c) in weights {
        if r < c {
            let z = g.neighbors(x, y).intersection(avail).nth(r).expect("r below codegree");
            let mut e = [x, y, z];
            e.shuffle(rng);
            return Some(e);
        }
        r -= c;
    }
    unreachable!("weights sum to total")
}

fn one_run<R: Rng + ?Sized>(g: &ThreeGraph, within: &VertexSet, l0: usize, rng: &mut R) -> CoverResult {
    let mut avail = within.clone();
    let mut paths = Vec::new();
    while paths.len() < l0 {
        let Some(e) = random_edge(g, &avail, rng) else { break };
        let seed = TightPath::from_vec_unchecked(e.to_vec());
        let p = extend_path(g, &seed, &avail, rng);
        for &v in p.vertices() {
            avail.remove(v);
        }
        paths.push(p);
    }
    CoverResult { paths, leftover: avail }
}

/// [`greedy_cover_within`] over every vertex.
pub fn greedy_cover(g: &ThreeGraph, p: &CoverParams) -> Result<CoverResult, CoverError> {
    greedy_cover_within(g, &g.vertices(), p)
}

/// Covers `within` with disjoint tight paths of `g` using only vertices of
/// `within`.
///
/// Each run seeds a path on a uniformly random edge of the remaining
/// vertices and extends it until stuck, until no edge remains or `l0` paths
/// exist. Of `restarts` runs the one with the smallest leftover wins, then
/// the one with fewer paths, then the earlier run. Succeeds when the
/// leftover is at most `zeta·|within|`.
pub fn greedy_cover_within(g: &ThreeGraph, within: &VertexSet, p: &CoverParams) -> Result<CoverResult, CoverError> {
    if !(p.zeta > 0.0 && p.zeta <= 1.0) {
        return Err(CoverError::BadParams(format!("zeta must lie in (0, 1], got {}", p.zeta)));
    }
    if p.l0 == 0 {
        return Err(CoverError::BadParams("l0 must be at least 1".into()));
    }
    let mut best: Option<CoverResult> = None;
    for r in 0..p.restarts.max(1) {
        let res = one_run(g, within, p.l0, &mut indexed_rng(p.seed, "cover", r as u64));
        let better = match &best {
            None => true,
            Some(b) => (res.leftover.len(), res.paths.len()) < (b.leftover.len(), b.paths.len()),
        };
        if better {
            best = Some(res);
        }
    }
    let best = best.expect("at least one run");
    let target = p.zeta * within.len() as f64;
    if best.leftover.len() as f64 <= target && best.paths.len() <= p.l0 {
        Ok(best)
    } else {
        Err(CoverError::CoverTooSparse { best: Box::new(best), target })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::oracle::verify_tight_path;
    use crate::seed::stage_rng;

    #[test]
    fn extend_in_complete_graph() {
        let k = generate::complete(10);
        let seed = TightPath::new(&k, vec![0, 1, 2]).unwrap();
        let p = extend_path(&k, &seed, &k.vertices(), &mut stage_rng(1, "x"));
        assert_eq!(p.len(), 10);
        assert!(verify_tight_path(&k, p.vertices()));
        let same = extend_path(&k, &seed, &VertexSet::new(10), &mut stage_rng(1, "x"));
        assert_eq!(same, seed);
    }

    #[test]
    fn extend_recovers_broken_cycle() {
        let mut g = generate::tight_cycle(9);
        g.remove_edge(8, 0, 1).unwrap();
        let seed = TightPath::new(&g, vec![3, 4, 5]).unwrap();
        let p = extend_path(&g, &seed, &g.vertices(), &mut stage_rng(2, "x"));
        assert_eq!(p.vertices(), &[0, 1, 2, 3, 4, 5, 6, 7, 8]);
    }

    #[test]
    fn cover_examples() {
        let k = generate::complete(30);
        let r = greedy_cover(&k, &CoverParams::new(0.1, 3)).unwrap();
        assert_eq!(r.paths.len(), 1);
        assert!(r.leftover.is_empty());

        let empty = ThreeGraph::new(12);
        match greedy_cover(&empty, &CoverParams::new(0.5, 3)) {
            Err(CoverError::CoverTooSparse { best, .. }) => assert_eq!(best.leftover.len(), 12),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(greedy_cover(&k, &CoverParams::new(0.0, 3)), Err(CoverError::BadParams(_))));
    }

    #[test]
    fn cover_within_subset() {
        let k = generate::complete(20);
        let within = VertexSet::from_vertices(20, 5..15);
        let r = greedy_cover_within(&k, &within, &CoverParams::new(0.1, 2)).unwrap();
        assert_eq!(r.covered(), 10);
        assert!(r.paths[0].vertices().iter().all(|&v| within.contains(v)));
    }
}
