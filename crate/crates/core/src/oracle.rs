//! Ground-truth procedures: window verifiers, exact tight Hamiltonicity by
//! subset dynamic programming, and exhaustive connector search.
//!
//! Nothing here is clever. These exist so every heuristic elsewhere can be
//! checked against an exact answer at small `n`.

use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::{ThreeGraph, Vertex};
use crate::path::{check_tight, PathEnd, TightCycle, TightPath, MIN_CYCLE_LEN};

/// Largest `n` the exact procedures accept by default.
pub const DEFAULT_CAP: usize = 18;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph on {n} vertices exceeds the oracle cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("tight cycles need at least {MIN_CYCLE_LEN} vertices, graph has {0}")]
    TooSmall(usize),
}

pub fn verify_tight_path(g: &ThreeGraph, seq: &[Vertex]) -> bool {
    seq.len() >= 3 && check_tight(g, seq, false).is_ok()
}

/// Distinct vertices, at least five of them, every cyclic window an edge.
pub fn verify_tight_cycle(g: &ThreeGraph, seq: &[Vertex]) -> bool {
    seq.len() >= MIN_CYCLE_LEN && check_tight(g, seq, true).is_ok()
}

/// A tight cycle through every vertex of `g`.
pub fn verify_hamilton_cycle(g: &ThreeGraph, seq: &[Vertex]) -> bool {
    seq.len() == g.n() && verify_tight_cycle(g, seq)
}

pub fn dp_hamilton(g: &ThreeGraph) -> Result<Option<TightCycle>, OracleError> {
    dp_hamilton_capped(g, DEFAULT_CAP)
}

/// Exact tight Hamiltonicity.
///
/// The cycle is rooted at vertex 0 and its second vertex `b` is fixed per
/// pass. For each subset `S` of the remaining vertices, `good[S][u]` holds
/// the set of `w` such that a path `0 b … u w` visiting exactly
/// `{0, b} ∪ S` extends to a closed tight cycle. The table is filled from the
/// full subset downwards, then walked forwards choosing the smallest feasible
/// vertex, so the witness is the lexicographically smallest rooted order.
pub fn dp_hamilton_capped(g: &ThreeGraph, cap: usize) -> Result<Option<TightCycle>, OracleError> {
    let n = g.n();
    if n > cap.min(64) {
        return Err(OracleError::TooLarge { n, cap: cap.min(64) });
    }
    if n < MIN_CYCLE_LEN {
        return Err(OracleError::TooSmall(n));
    }
    let nb = |x: Vertex, y: Vertex| -> u64 {
        // n <= 64, so each neighbourhood fits in a word.
        g.neighbors(x, y).iter().fold(0u64, |acc, z| acc | (1 << z))
    };
    let nbr: Vec<u64> = (0..n * n).map(|i| nb(i / n, i % n)).collect();
    let m = n - 2;
    let full: usize = (1 << m) - 1;

    for b in 1..n {
        if nbr[b] == 0 {
            continue;
        }
        let others: Vec<Vertex> = (1..n).filter(|&v| v != b).collect();
        let vbits = |mask: usize| -> u64 {
            let mut bits = (1u64 << 0) | (1u64 << b);
            let mut mk = mask;
            while mk != 0 {
                let i = mk.trailing_zeros() as usize;
                mk &= mk - 1;
                bits |= 1 << others[i];
            }
            bits
        };
        let mut good = vec![0u64; (full + 1) * n];
        for u in 0..n {
            let mut row = 0u64;
            for w in 0..n {
                if u != w && w != 0 && nbr[u * n + w] & 1 != 0 && nbr[w * n] & (1 << b) != 0 {
                    row |= 1 << w;
                }
            }
            good[full * n + u] = row;
        }
        for mask in (0..full).rev() {
            let visited = vbits(mask);
            // t[w]: unvisited z with good[mask + z][w] containing z.
            let mut t = vec![0u64; n];
            for (i, &z) in others.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    continue;
                }
                let next = mask | (1 << i);
                for (w, tw) in t.iter_mut().enumerate() {
                    if good[next * n + w] & (1 << z) != 0 {
                        *tw |= 1 << z;
                    }
                }
            }
            let mut vs = visited;
            while vs != 0 {
                let u = vs.trailing_zeros() as usize;
                vs &= vs - 1;
                let mut row = 0u64;
                let mut ws = visited & !(1 << u);
                while ws != 0 {
                    let w = ws.trailing_zeros() as usize;
                    ws &= ws - 1;
                    if nbr[u * n + w] & t[w] != 0 {
                        row |= 1 << w;
                    }
                }
                good[mask * n + u] = row;
            }
        }
        if good[0] & (1 << b) == 0 {
            continue;
        }
        let mut order = vec![0, b];
        let (mut mask, mut u, mut w) = (0usize, 0, b);
        while mask != full {
            let (i, z) = others
                .iter()
                .enumerate()
                .find(|&(i, &z)| {
                    mask & (1 << i) == 0
                        && nbr[u * n + w] & (1 << z) != 0
                        && good[(mask | (1 << i)) * n + w] & (1 << z) != 0
                })
                .map(|(i, &z)| (i, z))
                .expect("dp table promised a continuation");
            order.push(z);
            mask |= 1 << i;
            u = w;
            w = z;
        }
        debug_assert!(verify_hamilton_cycle(g, &order));
        return Ok(Some(TightCycle::from_vec_unchecked(order)));
    }
    Ok(None)
}

/// Plain permutation search with vertex 0 fixed first. Independent of the
/// DP above and only usable for very small graphs.
pub fn permutation_hamilton(g: &ThreeGraph, cap: usize) -> Result<Option<Vec<Vertex>>, OracleError> {
    let n = g.n();
    if n > cap {
        return Err(OracleError::TooLarge { n, cap });
    }
    if n < MIN_CYCLE_LEN {
        return Err(OracleError::TooSmall(n));
    }
    let mut rest: Vec<Vertex> = (1..n).collect();
    let mut found = None;
    permute(&mut rest, 0, &mut |perm| {
        let mut order = Vec::with_capacity(n);
        order.push(0);
        order.extend_from_slice(perm);
        if verify_tight_cycle(g, &order) {
            found = Some(order);
            true
        } else {
            false
        }
    });
    Ok(found)
}

fn permute(items: &mut [Vertex], k: usize, visit: &mut impl FnMut(&[Vertex]) -> bool) -> bool {
    if k == items.len() {
        return visit(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        if permute(items, k + 1, visit) {
            return true;
        }
        items.swap(k, i);
    }
    false
}

pub fn dp_connector(
    g: &ThreeGraph,
    a: PathEnd,
    b: PathEnd,
    internal_len: usize,
    forbidden: &VertexSet,
) -> Result<Option<TightPath>, OracleError> {
    dp_connector_capped(g, a, b, internal_len, forbidden, DEFAULT_CAP)
}

/// Exhaustive search over every internal sequence `u1 … uk` for a tight path
/// `a.inner a.outer u1 … uk b.outer b.inner`, in ascending vertex order.
pub fn dp_connector_capped(
    g: &ThreeGraph,
    a: PathEnd,
    b: PathEnd,
    internal_len: usize,
    forbidden: &VertexSet,
    cap: usize,
) -> Result<Option<TightPath>, OracleError> {
    let n = g.n();
    if n > cap {
        return Err(OracleError::TooLarge { n, cap });
    }
    let ends = [a.inner, a.outer, b.outer, b.inner];
    let mut used = VertexSet::new(n);
    for &v in &ends {
        if v >= n || !used.insert(v) {
            return Ok(None);
        }
    }
    let mut seq = vec![a.inner, a.outer];
    let found = extend_connector(g, &mut seq, &mut used, forbidden, internal_len + 2, b);
    Ok(found.then(|| TightPath::from_vec_unchecked(seq)))
}

fn extend_connector(
    g: &ThreeGraph,
    seq: &mut Vec<Vertex>,
    used: &mut VertexSet,
    forbidden: &VertexSet,
    target: usize,
    b: PathEnd,
) -> bool {
    let (p, q) = (seq[seq.len() - 2], seq[seq.len() - 1]);
    if seq.len() == target {
        if g.has_edge(p, q, b.outer) && g.has_edge(q, b.outer, b.inner) {
            seq.push(b.outer);
            seq.push(b.inner);
            return true;
        }
        return false;
    }
    for z in 0..g.n() {
        if used.contains(z) || forbidden.contains(z) || !g.has_edge(p, q, z) {
            continue;
        }
        seq.push(z);
        used.insert(z);
        if extend_connector(g, seq, used, forbidden, target, b) {
            return true;
        }
        used.remove(z);
        seq.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;

    #[test]
    fn verifier_examples() {
        let c5 = ThreeGraph::from_edges(5, [(0, 1, 2), (1, 2, 3), (2, 3, 4), (3, 4, 0), (4, 0, 1)]).unwrap();
        assert!(verify_tight_cycle(&c5, &[0, 1, 2, 3, 4]));
        assert!(verify_hamilton_cycle(&c5, &[3, 4, 0, 1, 2]));
        let mut broken = c5.clone();
        broken.remove_edge(2, 3, 4).unwrap();
        assert!(!verify_tight_cycle(&broken, &[0, 1, 2, 3, 4]));
        assert!(!verify_tight_cycle(&c5, &[0, 1, 2, 3, 0]));
        assert!(!verify_tight_path(&c5, &[0, 1]));
    }

    #[test]
    fn dp_small_cases() {
        let k6 = generate::complete(6);
        let c = dp_hamilton(&k6).unwrap().unwrap();
        assert_eq!(c.order(), &[0, 1, 2, 3, 4, 5]);
        let c9 = generate::tight_cycle(9);
        let w = dp_hamilton(&c9).unwrap().unwrap();
        assert!(verify_hamilton_cycle(&c9, w.order()));
        let mut broken = c9.clone();
        broken.remove_edge(4, 5, 6).unwrap();
        assert_eq!(dp_hamilton(&broken).unwrap(), None);
        assert_eq!(dp_hamilton(&ThreeGraph::new(7)).unwrap(), None);
    }

    #[test]
    fn dp_refuses_out_of_range_sizes() {
        assert_eq!(dp_hamilton(&generate::complete(4)), Err(OracleError::TooSmall(4)));
        assert_eq!(
            dp_hamilton(&ThreeGraph::new(19)),
            Err(OracleError::TooLarge { n: 19, cap: 18 })
        );
    }

    #[test]
    fn connector_examples() {
        let k12 = generate::complete(12);
        let none = VertexSet::new(12);
        let p = dp_connector(&k12, PathEnd::new(0, 1), PathEnd::new(2, 3), 6, &none)
            .unwrap()
            .unwrap();
        assert_eq!(p.vertices(), &[0, 1, 4, 5, 6, 7, 8, 9, 3, 2]);
        let two = generate::disjoint_complete(12, 6);
        let res = dp_connector(&two, PathEnd::new(0, 1), PathEnd::new(6, 7), 2, &none).unwrap();
        assert_eq!(res, None);
    }
}
