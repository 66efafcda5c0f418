//! Absorbers.
//!
//! A quadruple `(x, y, z, w)` is a `v`-absorber when
//! `{x,y,z}, {y,z,w}, {v,x,y}, {v,y,z}, {v,z,w}` are all edges. Then both
//! `x y z w` and `x y v z w` are tight paths with the same ends, so `v` can
//! be slipped into the middle of a path at any later time.

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::{ThreeGraph, Vertex};
use crate::path::TightPath;
use crate::shave::count_threshold;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbsorbError {
    #[error("no admissible absorber for vertex {v} ({candidates} candidate vertices)")]
    NotFound { v: Vertex, candidates: usize },
    #[error("vertex {0} is itself forbidden")]
    VertexForbidden(Vertex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Absorber {
    pub v: Vertex,
    pub quad: [Vertex; 4],
}

impl Absorber {
    pub fn check(&self, g: &ThreeGraph) -> bool {
        is_absorber(g, self.v, self.quad)
    }

    /// `x y v z w`.
    pub fn with_vertex(&self) -> Vec<Vertex> {
        let [x, y, z, w] = self.quad;
        vec![x, y, self.v, z, w]
    }

    /// `x y z w`.
    pub fn without_vertex(&self) -> Vec<Vertex> {
        self.quad.to_vec()
    }

    pub fn reversed(&self) -> Absorber {
        let [x, y, z, w] = self.quad;
        Absorber { v: self.v, quad: [w, z, y, x] }
    }
}

pub fn is_absorber(g: &ThreeGraph, v: Vertex, quad: [Vertex; 4]) -> bool {
    let [x, y, z, w] = quad;
    let all = [v, x, y, z, w];
    if all.iter().any(|&u| u >= g.n()) {
        return false;
    }
    for i in 0..5 {
        for j in i + 1..5 {
            if all[i] == all[j] {
                return false;
            }
        }
    }
    g.has_edge(x, y, z)
        && g.has_edge(y, z, w)
        && g.has_edge(v, x, y)
        && g.has_edge(v, y, z)
        && g.has_edge(v, z, w)
}

/// The 5-vertex path `x y v z w`, validated against `g`.
pub fn absorber_path(g: &ThreeGraph, a: &Absorber) -> Result<TightPath, crate::path::PathError> {
    TightPath::new(g, a.with_vertex())
}

/// Exact number of ordered `v`-absorbers.
///
/// For each edge `{v, y, z}` taken with both orders of `(y, z)`, `x` ranges
/// over `A = N(v,y) ∩ N(y,z)` and `w` over `B = N(v,z) ∩ N(y,z)` with
/// `x ≠ w`, giving `|A|·|B| - |A ∩ B|` absorbers.
pub fn count_absorbers(g: &ThreeGraph, v: Vertex) -> u64 {
    let n = g.n();
    let mut total = 0u64;
    for y in 0..n {
        if y == v {
            continue;
        }
        let nvy = g.neighbors(v, y);
        for z in nvy.iter() {
            let nyz = g.neighbors(y, z);
            let nvz = g.neighbors(v, z);
            let a = nvy.intersection_count(nyz) as u64;
            let b = nvz.intersection_count(nyz) as u64;
            let both = nvy.intersection_count3(nyz, nvz) as u64;
            total += a * b - both;
        }
    }
    total
}

/// All ordered `v`-absorbers: edges `{v, y, z}` from the pair index, then
/// `x ∈ N(v,y) ∩ N(y,z)`, then `w ∈ N(v,z) ∩ N(y,z) \ {x}`.
pub fn enumerate_absorbers(g: &ThreeGraph, v: Vertex) -> impl Iterator<Item = Absorber> + '_ {
    enumerate_within(g, v, None)
}

fn enumerate_within<'a>(
    g: &'a ThreeGraph,
    v: Vertex,
    allowed: Option<&'a VertexSet>,
) -> impl Iterator<Item = Absorber> + 'a {
    let ok = move |u: Vertex| allowed.is_none_or(|s| s.contains(u));
    (0..g.n())
        .filter(move |&y| y != v && ok(y))
        .flat_map(move |y| g.neighbors(v, y).iter().filter(move |&z| ok(z)).map(move |z| (y, z)))
        .flat_map(move |(y, z)| {
            let nyz = g.neighbors(y, z);
            let xs = g.neighbors(v, y).intersection(nyz);
            let ws = g.neighbors(v, z).intersection(nyz);
            xs.iter()
                .filter(|&x| ok(x))
                .flat_map(|x| ws.iter().filter(move |&w| w != x && ok(w)).map(move |w| (x, w)))
                .map(move |(x, w)| Absorber { v, quad: [x, y, z, w] })
                .collect::<Vec<_>>()
        })
}

/// Fraction of ordered quadruples of other vertices that are `v`-absorbers.
pub fn absorber_density(g: &ThreeGraph, v: Vertex) -> f64 {
    let m = g.n().saturating_sub(1) as f64;
    let total = m * (m - 1.0) * (m - 2.0) * (m - 3.0);
    if total <= 0.0 {
        0.0
    } else {
        count_absorbers(g, v) as f64 / total
    }
}

/// Where an absorber may live and how well its boundary pairs must connect.
#[derive(Debug, Clone, Copy)]
pub struct AbsorberConstraint<'a> {
    /// `W`: vertices the absorber must avoid.
    pub forbidden: &'a VertexSet,
    /// The shaved graph in which boundary codegrees are measured.
    pub shadow_graph: &'a ThreeGraph,
    /// Both `(x, y)` and `(z, w)` need codegree at least this in `shadow_graph`.
    pub pair_threshold: f64,
    /// Measure boundary codegrees only over this vertex set, when given.
    pub within: Option<&'a VertexSet>,
}

impl AbsorberConstraint<'_> {
    fn boundary_codegree(&self, x: Vertex, y: Vertex) -> usize {
        match self.within {
            Some(s) => self.shadow_graph.restricted_codegree(x, y, s),
            None => self.shadow_graph.pair_codegree(x, y),
        }
    }

    pub fn admits(&self, a: &Absorber) -> bool {
        let [x, y, z, w] = a.quad;
        let m = count_threshold(self.pair_threshold).max(1);
        a.quad.iter().all(|&u| !self.forbidden.contains(u))
            && self.boundary_codegree(x, y) >= m
            && self.boundary_codegree(z, w) >= m
    }
}

/// Sampling attempts, per vertex of the host, before exhaustive search.
pub const SAMPLES_PER_VERTEX: usize = 50;

/// Finds a `v`-absorber avoiding `c.forbidden` whose boundary pairs meet the
/// codegree threshold. Samples `50·n` random quadruples first, then falls
/// back to full enumeration, so `NotFound` means none exists.
pub fn find_absorber<R: Rng + ?Sized>(
    g: &ThreeGraph,
    v: Vertex,
    c: &AbsorberConstraint<'_>,
    rng: &mut R,
) -> Result<Absorber, AbsorbError> {
    if c.forbidden.contains(v) {
        return Err(AbsorbError::VertexForbidden(v));
    }
    let mut allowed = c.forbidden.complement();
    allowed.remove(v);
    let pool = allowed.to_vec();
    if pool.len() < 4 {
        return Err(AbsorbError::NotFound { v, candidates: pool.len() });
    }
    for _ in 0..SAMPLES_PER_VERTEX * g.n() {
        let pick = index::sample(rng, pool.len(), 4);
        let quad = [pool[pick.index(0)], pool[pick.index(1)], pool[pick.index(2)], pool[pick.index(3)]];
        let a = Absorber { v, quad };
        if is_absorber(g, v, quad) && c.admits(&a) {
            return Ok(a);
        }
    }
    let found = enumerate_within(g, v, Some(&allowed)).find(|a| c.admits(a));
    found.ok_or(AbsorbError::NotFound { v, candidates: pool.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::seed::stage_rng;

    fn brute_count(g: &ThreeGraph, v: Vertex) -> u64 {
        let n = g.n();
        let mut c = 0;
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        if is_absorber(g, v, [x, y, z, w]) {
                            c += 1;
                        }
                    }
                }
            }
        }
        c
    }

    #[test]
    fn gadget_has_exactly_two() {
        let g = generate::single_absorber();
        assert!(is_absorber(&g, 4, [0, 1, 2, 3]));
        assert!(!is_absorber(&g, 4, [0, 2, 1, 3]));
        assert!(!is_absorber(&g, 4, [0, 1, 1, 3]));
        assert_eq!(brute_count(&g, 4), 2);
        assert_eq!(count_absorbers(&g, 4), 2);
        let found: Vec<_> = enumerate_absorbers(&g, 4).collect();
        assert_eq!(found.len(), 2);
        assert!(found.contains(&Absorber { v: 4, quad: [3, 2, 1, 0] }));
    }

    #[test]
    fn complete_counts() {
        let k7 = generate::complete(7);
        assert_eq!(count_absorbers(&k7, 0), 360);
        assert_eq!(enumerate_absorbers(&k7, 3).count(), 360);
        let k5 = generate::complete(5);
        assert_eq!(count_absorbers(&k5, 2), 24);
    }

    #[test]
    fn paths_from_absorbers() {
        let g = generate::single_absorber();
        let a = Absorber { v: 4, quad: [0, 1, 2, 3] };
        let p = absorber_path(&g, &a).unwrap();
        assert_eq!(p.vertices(), &[0, 1, 4, 2, 3]);
        assert!(TightPath::new(&g, a.without_vertex()).is_ok());
        assert_eq!(p.start_end(), TightPath::new(&g, a.without_vertex()).unwrap().start_end());
        let mut broken = g.clone();
        broken.remove_edge(4, 1, 2).unwrap();
        assert!(!a.check(&broken));
        assert!(absorber_path(&broken, &a).is_err());
    }

    #[test]
    fn find_in_complete_graph() {
        let n = 20;
        let k = generate::complete(n);
        let forbidden = VertexSet::from_vertices(n, 1..6);
        let c = AbsorberConstraint { forbidden: &forbidden, shadow_graph: &k, pair_threshold: n as f64 / 3.0, within: None };
        let a = find_absorber(&k, 0, &c, &mut stage_rng(1, "abs")).unwrap();
        assert!(a.check(&k) && c.admits(&a));
        assert!(a.quad.iter().all(|&u| u >= 6));

        let crowded = VertexSet::from_vertices(n, 1..17);
        let c = AbsorberConstraint { forbidden: &crowded, ..c };
        assert_eq!(
            find_absorber(&k, 0, &c, &mut stage_rng(1, "abs")),
            Err(AbsorbError::NotFound { v: 0, candidates: 3 })
        );
        assert_eq!(find_absorber(&k, 5, &c, &mut stage_rng(1, "abs")), Err(AbsorbError::VertexForbidden(5)));
    }

    #[test]
    fn fallback_enumeration_finds_rare_absorber() {
        // Only the gadget's two absorbers exist; sampling over a padded graph
        // will rarely hit them, the fallback must.
        let mut g = ThreeGraph::new(40);
        for (a, b, c) in [(0, 1, 2), (1, 2, 3), (4, 0, 1), (4, 1, 2), (4, 2, 3)] {
            g.add_edge(a, b, c).unwrap();
        }
        let none = VertexSet::new(40);
        let c = AbsorberConstraint { forbidden: &none, shadow_graph: &g, pair_threshold: 1.0, within: None };
        let a = find_absorber(&g, 4, &c, &mut stage_rng(2, "abs")).unwrap();
        assert!(a.quad == [0, 1, 2, 3] || a.quad == [3, 2, 1, 0]);
    }
}
