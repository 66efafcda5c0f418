//! Checkers and falsifiers for the three denseness notions.
//!
//! For parameters `(rho, d)` an `n`-vertex 3-graph is
//!
//! * *cherry-dense* if `e(G1, G2) >= d·|P2(G1, G2)| - rho·n³` for all
//!   `G1, G2 ⊆ V × V`, where `P2(G1, G2) = {(x, y, z) : (x, y) ∈ G1, (y, z) ∈ G2}`;
//! * *edge-dense* if `e(X, G) >= d·|X|·|G| - rho·n³` for all `X ⊆ V`, `G ⊆ V × V`;
//! * *points-dense* if `e(X, Y, Z) >= d·|X|·|Y|·|Z| - rho·n³` for all `X, Y, Z ⊆ V`.
//!
//! The edge counts only see triples of distinct vertices forming an edge,
//! while `|P2|` and the product sizes count every tuple, loops and repeated
//! vertices included.
//!
//! Denseness quantifies over exponentially many objects, so nothing here
//! proves it. The falsifiers run alternating best-response descent on the
//! bilinear objective `e - d·|P2|` and report a witness only after an exact
//! recount confirms it.

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::{OrderedPair, ThreeGraph, Vertex};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DensityError {
    #[error("density d = {0} must lie in (0, 1]")]
    BadDensity(f64),
    #[error("slack rho = {0} must be non-negative")]
    BadSlack(f64),
}

/// A set of ordered pairs over `0..n`; loops `(x, x)` are allowed.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: Vec<VertexSet>,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.arcs()).finish()
    }
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        Digraph { n, out: vec![VertexSet::new(n); n] }
    }

    /// `V × V`, loops included.
    pub fn complete(n: usize) -> Self {
        Digraph { n, out: vec![VertexSet::full(n); n] }
    }

    /// `X × Y`.
    pub fn product(n: usize, xs: &VertexSet, ys: &VertexSet) -> Self {
        let mut d = Self::new(n);
        for x in xs {
            d.out[x] = ys.clone();
        }
        d
    }

    pub fn from_arcs<I: IntoIterator<Item = OrderedPair>>(n: usize, arcs: I) -> Self {
        let mut d = Self::new(n);
        for (x, y) in arcs {
            d.insert(x, y);
        }
        d
    }

    pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Self {
        let mut d = Self::new(n);
        for x in 0..n {
            for y in 0..n {
                if rng.gen_bool(p) {
                    d.insert(x, y);
                }
            }
        }
        d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, x: Vertex, y: Vertex) -> bool {
        self.out[x].insert(y)
    }

    pub fn remove(&mut self, x: Vertex, y: Vertex) -> bool {
        self.out[x].remove(y)
    }

    pub fn contains(&self, x: Vertex, y: Vertex) -> bool {
        x < self.n && self.out[x].contains(y)
    }

    #[inline]
    pub fn out(&self, x: Vertex) -> &VertexSet {
        &self.out[x]
    }

    pub fn arc_count(&self) -> u64 {
        self.out.iter().map(|s| s.len() as u64).sum()
    }

    pub fn arcs(&self) -> impl Iterator<Item = OrderedPair> + '_ {
        self.out.iter().enumerate().flat_map(|(x, s)| s.iter().map(move |y| (x, y)))
    }

    /// In-neighbourhoods: `result[y] = {x : (x, y) ∈ self}`.
    pub fn in_sets(&self) -> Vec<VertexSet> {
        let mut ins = vec![VertexSet::new(self.n); self.n];
        for (x, y) in self.arcs() {
            ins[y].insert(x);
        }
        ins
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityParams<S> {
    pub d: S,
    pub rho: S,
}

impl<S: Scalar> DensityParams<S> {
    pub fn new(d: S, rho: S) -> Result<Self, DensityError> {
        if !(d > S::zero() && d <= S::one()) {
            return Err(DensityError::BadDensity(d.to_f64()));
        }
        if !(rho >= S::zero()) {
            return Err(DensityError::BadSlack(rho.to_f64()));
        }
        Ok(DensityParams { d, rho })
    }

    /// `d·size - rho·n³`.
    pub fn bound(&self, size: u64, n: usize) -> S {
        let n3 = (n as u64).pow(3);
        self.d * S::from_count(size) - self.rho * S::from_count(n3)
    }
}

/// The quantified objects of a violated inequality.
#[derive(Debug, Clone, PartialEq)]
pub enum WitnessObjects {
    Cherry { g1: Digraph, g2: Digraph },
    Points { x: VertexSet, y: VertexSet, z: VertexSet },
    Edge { x: VertexSet, g: Digraph },
}

impl WitnessObjects {
    pub fn kind(&self) -> &'static str {
        match self {
            WitnessObjects::Cherry { .. } => "cherry",
            WitnessObjects::Points { .. } => "points",
            WitnessObjects::Edge { .. } => "edge",
        }
    }
}

/// `observed < bound`, with `deficit = bound - observed > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityWitness<S> {
    pub objects: WitnessObjects,
    pub observed: u64,
    /// `|P2|`, `|X|·|G|` or `|X|·|Y|·|Z|`.
    pub size: u64,
    pub bound: S,
    pub deficit: S,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<S> {
    Pass,
    Violated(DensityWitness<S>),
}

impl<S> Verdict<S> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn witness(self) -> Option<DensityWitness<S>> {
        match self {
            Verdict::Pass => None,
            Verdict::Violated(w) => Some(w),
        }
    }
}

fn verdict<S: Scalar>(objects: WitnessObjects, observed: u64, size: u64, n: usize, p: &DensityParams<S>) -> Verdict<S> {
    let bound = p.bound(size, n);
    let obs = S::from_count(observed);
    if obs < bound {
        Verdict::Violated(DensityWitness { objects, observed, size, bound, deficit: bound - obs })
    } else {
        Verdict::Pass
    }
}

/// `|P2(G1, G2)| = Σ_y indeg_G1(y)·outdeg_G2(y)`.
pub fn p2_count(g1: &Digraph, g2: &Digraph) -> u64 {
    let mut indeg = vec![0u64; g1.n];
    for (_, y) in g1.arcs() {
        indeg[y] += 1;
    }
    indeg
        .iter()
        .enumerate()
        .map(|(y, &c)| c * g2.out(y).len() as u64)
        .sum()
}

/// `e(G1, G2)`: tuples of `P2(G1, G2)` with distinct vertices spanning an edge.
pub fn cherry_edge_count(h: &ThreeGraph, g1: &Digraph, g2: &Digraph) -> u64 {
    g1.arcs()
        .filter(|&(x, y)| x != y)
        .map(|(x, y)| h.neighbors(x, y).intersection_count(g2.out(y)) as u64)
        .sum()
}

pub fn check_cherry<S: Scalar>(h: &ThreeGraph, g1: &Digraph, g2: &Digraph, p: &DensityParams<S>) -> Verdict<S> {
    let observed = cherry_edge_count(h, g1, g2);
    let size = p2_count(g1, g2);
    verdict(WitnessObjects::Cherry { g1: g1.clone(), g2: g2.clone() }, observed, size, h.n(), p)
}

/// `e(X, Y, Z)` over distinct-vertex tuples.
pub fn points_edge_count(h: &ThreeGraph, xs: &VertexSet, ys: &VertexSet, zs: &VertexSet) -> u64 {
    let mut total = 0u64;
    for x in xs {
        for y in ys {
            if x != y {
                total += h.neighbors(x, y).intersection_count(zs) as u64;
            }
        }
    }
    total
}

pub fn check_points<S: Scalar>(
    h: &ThreeGraph,
    xs: &VertexSet,
    ys: &VertexSet,
    zs: &VertexSet,
    p: &DensityParams<S>,
) -> Verdict<S> {
    let observed = points_edge_count(h, xs, ys, zs);
    let size = (xs.len() * ys.len() * zs.len()) as u64;
    let objects = WitnessObjects::Points { x: xs.clone(), y: ys.clone(), z: zs.clone() };
    verdict(objects, observed, size, h.n(), p)
}

/// `e(X, G)`: pairs `(x, (y, z)) ∈ X × G` with `{x, y, z}` an edge.
pub fn edge_edge_count(h: &ThreeGraph, xs: &VertexSet, g: &Digraph) -> u64 {
    g.arcs()
        .filter(|&(y, z)| y != z)
        .map(|(y, z)| h.neighbors(y, z).intersection_count(xs) as u64)
        .sum()
}

pub fn check_edge<S: Scalar>(h: &ThreeGraph, xs: &VertexSet, g: &Digraph, p: &DensityParams<S>) -> Verdict<S> {
    let observed = edge_edge_count(h, xs, g);
    let size = xs.len() as u64 * g.arc_count();
    verdict(WitnessObjects::Edge { x: xs.clone(), g: g.clone() }, observed, size, h.n(), p)
}

/// Recounts a witness from scratch; `true` iff it is a genuine violation with
/// exactly the recorded numbers.
pub fn recheck<S: Scalar>(h: &ThreeGraph, w: &DensityWitness<S>, p: &DensityParams<S>) -> bool {
    let again = match &w.objects {
        WitnessObjects::Cherry { g1, g2 } => check_cherry(h, g1, g2, p),
        WitnessObjects::Points { x, y, z } => check_points(h, x, y, z, p),
        WitnessObjects::Edge { x, g } => check_edge(h, x, g, p),
    };
    match again {
        Verdict::Violated(v) => v.observed == w.observed && v.size == w.size && v.deficit == w.deficit,
        Verdict::Pass => false,
    }
}

/// `(X, Y, Z)` ↦ `(X, Y × Z)`. Counts are preserved exactly.
pub fn points_to_edge<S: Scalar>(h: &ThreeGraph, xs: &VertexSet, ys: &VertexSet, zs: &VertexSet, p: &DensityParams<S>) -> Verdict<S> {
    check_edge(h, xs, &Digraph::product(h.n(), ys, zs), p)
}

/// `(X, Y, Z)` ↦ `(X × Y, Y × Z)`. Counts are preserved exactly.
pub fn points_to_cherry<S: Scalar>(h: &ThreeGraph, xs: &VertexSet, ys: &VertexSet, zs: &VertexSet, p: &DensityParams<S>) -> Verdict<S> {
    let n = h.n();
    check_cherry(h, &Digraph::product(n, xs, ys), &Digraph::product(n, ys, zs), p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FalsifyBudget {
    pub restarts: usize,
    pub iterations: usize,
}

impl Default for FalsifyBudget {
    fn default() -> Self {
        FalsifyBudget { restarts: 20, iterations: 50 }
    }
}

/// Best `G1` against a fixed `G2`: keep `(x, y)` iff its marginal
/// `[x≠y]·|G2.out(y) ∩ N(x, y)| - d·outdeg_G2(y)` is negative.
fn best_first<S: Scalar>(h: &ThreeGraph, g2: &Digraph, d: S) -> Digraph {
    let n = h.n();
    let mut g1 = Digraph::new(n);
    for y in 0..n {
        let penalty = d * S::from_count(g2.out(y).len() as u64);
        for x in 0..n {
            let hits = if x == y { 0 } else { h.neighbors(x, y).intersection_count(g2.out(y)) };
            if S::from_count(hits as u64) - penalty < S::zero() {
                g1.insert(x, y);
            }
        }
    }
    g1
}

/// Best `G2` against a fixed `G1`: keep `(y, z)` iff
/// `[y≠z]·|in_G1(y) ∩ N(y, z)| - d·indeg_G1(y)` is negative.
fn best_second<S: Scalar>(h: &ThreeGraph, g1: &Digraph, d: S) -> Digraph {
    let n = h.n();
    let ins = g1.in_sets();
    let mut g2 = Digraph::new(n);
    for y in 0..n {
        let penalty = d * S::from_count(ins[y].len() as u64);
        for z in 0..n {
            let hits = if y == z { 0 } else { h.neighbors(y, z).intersection_count(&ins[y]) };
            if S::from_count(hits as u64) - penalty < S::zero() {
                g2.insert(y, z);
            }
        }
    }
    g2
}

fn random_half<R: Rng + ?Sized>(n: usize, rng: &mut R) -> VertexSet {
    let mut vs: Vec<Vertex> = (0..n).collect();
    vs.shuffle(rng);
    VertexSet::from_vertices(n, vs.into_iter().take(n.div_ceil(2)))
}

/// Lowest `e - d·|P2|` reached by one descent run, with its state.
struct Descent<S> {
    value: S,
    g1: Digraph,
    g2: Digraph,
}

fn descend_cherry<S: Scalar>(h: &ThreeGraph, d: S, start: Digraph, iterations: usize) -> Descent<S> {
    let n = h.n();
    let scale = (n as u64).pow(3);
    let value = |g1: &Digraph, g2: &Digraph| {
        S::from_count(cherry_edge_count(h, g1, g2)) - d * S::from_count(p2_count(g1, g2))
    };
    let mut g2 = start;
    let mut g1 = best_first(h, &g2, d);
    let mut current = value(&g1, &g2);
    let mut best = Descent { value: current, g1: g1.clone(), g2: g2.clone() };
    for _ in 0..iterations {
        let next2 = best_second(h, &g1, d);
        let v = value(&g1, &next2);
        assert!(v <= current + S::slack(scale), "descent step increased the objective");
        let next1 = best_first(h, &next2, d);
        let w = value(&next1, &next2);
        assert!(w <= v + S::slack(scale), "descent step increased the objective");
        let stalled = next1 == g1 && next2 == g2;
        g1 = next1;
        g2 = next2;
        current = w;
        if current < best.value {
            best = Descent { value: current, g1: g1.clone(), g2: g2.clone() };
        }
        if stalled {
            break;
        }
    }
    best
}

/// Starting `G2` for restart `r`: `V × V` first, then alternately a random
/// product `Y × Z` and a random digraph of density one half.
fn cherry_start<R: Rng + ?Sized>(n: usize, r: usize, rng: &mut R) -> Digraph {
    match r {
        0 => Digraph::complete(n),
        r if r % 2 == 1 => Digraph::product(n, &random_half(n, rng), &random_half(n, rng)),
        _ => Digraph::random(n, 0.5, rng),
    }
}

fn best_cherry_state<S: Scalar, R: Rng + ?Sized>(
    h: &ThreeGraph,
    d: S,
    budget: FalsifyBudget,
    rng: &mut R,
) -> Option<Descent<S>> {
    let n = h.n();
    let mut best: Option<Descent<S>> = None;
    // Ties keep the earliest restart.
    for r in 0..budget.restarts {
        let run = descend_cherry(h, d, cherry_start(n, r, rng), budget.iterations);
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
    }
    best
}

/// Searches for a cherry-denseness violation. A returned witness has been
/// recounted exactly; `None` is not evidence of denseness.
pub fn falsify_cherry<S: Scalar, R: Rng + ?Sized>(
    h: &ThreeGraph,
    p: &DensityParams<S>,
    budget: FalsifyBudget,
    rng: &mut R,
) -> Option<DensityWitness<S>> {
    let best = best_cherry_state(h, p.d, budget, rng)?;
    let w = check_cherry(h, &best.g1, &best.g2, p).witness()?;
    debug_assert!(recheck(h, &w, p));
    Some(w)
}

/// Largest `(d·|P2| - e)/n³` found by descent, floored at zero: an empirical
/// lower bound on the smallest `rho` for which `h` is cherry-dense at `d`.
pub fn estimate_rho_hat<S: Scalar, R: Rng + ?Sized>(h: &ThreeGraph, d: S, samples: usize, rng: &mut R) -> S {
    let n = h.n();
    if n == 0 {
        return S::zero();
    }
    let budget = FalsifyBudget { restarts: samples.max(1), iterations: 20 };
    let best = best_cherry_state(h, d, budget, rng).expect("at least one restart");
    let gap = S::zero() - best.value;
    let rho = gap / S::from_count((n as u64).pow(3));
    if rho > S::zero() {
        rho
    } else {
        S::zero()
    }
}

fn points_value<S: Scalar>(h: &ThreeGraph, d: S, sets: &[VertexSet; 3]) -> S {
    let size = (sets[0].len() * sets[1].len() * sets[2].len()) as u64;
    S::from_count(points_edge_count(h, &sets[0], &sets[1], &sets[2])) - d * S::from_count(size)
}

/// Best response for one of `X`, `Y`, `Z` with the other two fixed. The
/// count is symmetric in its three sets, so one routine serves all slots.
fn best_points_slot<S: Scalar>(h: &ThreeGraph, d: S, a: &VertexSet, b: &VertexSet) -> VertexSet {
    let n = h.n();
    let penalty = d * S::from_count((a.len() * b.len()) as u64);
    let mut out = VertexSet::new(n);
    for v in 0..n {
        let hits: usize = a.iter().filter(|&u| u != v).map(|u| h.neighbors(v, u).intersection_count(b)).sum();
        if S::from_count(hits as u64) - penalty < S::zero() {
            out.insert(v);
        }
    }
    out
}

/// Alternating descent over `(X, Y, Z)`; same soundness contract as
/// [`falsify_cherry`].
pub fn falsify_points<S: Scalar, R: Rng + ?Sized>(
    h: &ThreeGraph,
    p: &DensityParams<S>,
    budget: FalsifyBudget,
    rng: &mut R,
) -> Option<DensityWitness<S>> {
    let n = h.n();
    let scale = (n as u64).pow(3);
    let mut best: Option<(S, [VertexSet; 3])> = None;
    for r in 0..budget.restarts {
        let mut sets = if r == 0 {
            [VertexSet::full(n), VertexSet::full(n), VertexSet::full(n)]
        } else {
            [random_half(n, rng), random_half(n, rng), random_half(n, rng)]
        };
        let mut current = points_value(h, p.d, &sets);
        for _ in 0..budget.iterations {
            let before = sets.clone();
            for slot in 0..3 {
                let (a, b) = (&sets[(slot + 1) % 3], &sets[(slot + 2) % 3]);
                sets[slot] = best_points_slot(h, p.d, a, b);
                let v = points_value(h, p.d, &sets);
                assert!(v <= current + S::slack(scale), "descent step increased the objective");
                current = v;
                if best.as_ref().is_none_or(|(bv, _)| current < *bv) {
                    best = Some((current, sets.clone()));
                }
            }
            if sets == before {
                break;
            }
        }
    }
    let (_, [x, y, z]) = best?;
    check_points(h, &x, &y, &z, p).witness()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::seed::stage_rng;
    use num_rational::Ratio;

    fn params(d: f64, rho: f64) -> DensityParams<f64> {
        DensityParams::new(d, rho).unwrap()
    }

    #[test]
    fn param_validation() {
        assert!(DensityParams::new(0.0, 0.1).is_err());
        assert!(DensityParams::new(1.5, 0.1).is_err());
        assert!(DensityParams::new(0.5, -0.1).is_err());
        assert!(DensityParams::new(1.0, 0.0).is_ok());
    }

    #[test]
    fn p2_examples() {
        assert_eq!(p2_count(&Digraph::new(5), &Digraph::complete(5)), 0);
        assert_eq!(p2_count(&Digraph::complete(6), &Digraph::complete(6)), 216);
        let g1 = Digraph::from_arcs(4, [(0, 1)]);
        let g2 = Digraph::from_arcs(4, [(1, 2), (1, 3)]);
        assert_eq!(p2_count(&g1, &g2), 2);
    }

    #[test]
    fn cherry_count_examples() {
        let n = 8;
        let full = Digraph::complete(n);
        assert_eq!(cherry_edge_count(&ThreeGraph::new(n), &full, &full), 0);
        let k = generate::complete(n);
        assert_eq!(cherry_edge_count(&k, &full, &full), 512 - (3 * 64 - 16));
        let one = ThreeGraph::from_edges(3, [(0, 1, 2)]).unwrap();
        let g1 = Digraph::from_arcs(3, [(0, 1)]);
        let g2 = Digraph::from_arcs(3, [(1, 2)]);
        assert_eq!(cherry_edge_count(&one, &g1, &g2), 1);
    }

    #[test]
    fn empty_g1_passes() {
        let h = generate::split(10);
        let v = check_cherry(&h, &Digraph::new(10), &Digraph::complete(10), &params(0.9, 0.0));
        assert!(v.is_pass());
    }

    #[test]
    fn split_cross_products_violate_exactly() {
        let n = 12;
        let h = generate::split(n);
        let xs = VertexSet::from_vertices(n, 0..6);
        let ys = VertexSet::from_vertices(n, 6..12);
        let g1 = Digraph::product(n, &xs, &ys);
        let g2 = Digraph::product(n, &ys, &xs);
        let exact = DensityParams::new(Ratio::new(1i64, 4), Ratio::new(1, 1000)).unwrap();
        let w = check_cherry(&h, &g1, &g2, &exact).witness().unwrap();
        assert_eq!(w.observed, 0);
        assert_eq!(w.deficit, Ratio::new(52_272, 1000));
        let w = check_cherry(&h, &g1, &g2, &params(0.25, 0.001)).witness().unwrap();
        assert!((w.deficit - 52.272).abs() < 1e-9);
    }

    #[test]
    fn points_and_edge_examples() {
        let k10 = generate::complete(10);
        let all = VertexSet::full(10);
        assert_eq!(points_edge_count(&k10, &all, &all, &all), 720);
        assert!(check_points(&k10, &all, &all, &all, &params(1.0, 0.3)).is_pass());
        assert!(check_points(&k10, &VertexSet::new(10), &all, &all, &params(1.0, 0.0)).is_pass());
        let split = generate::split(12);
        let first = VertexSet::from_vertices(12, 0..6);
        let second = VertexSet::from_vertices(12, 6..12);
        assert!(!check_points(&split, &first, &first, &second, &params(0.5, 0.01)).is_pass());

        let mut distinct = Digraph::complete(10);
        for v in 0..10 {
            distinct.remove(v, v);
        }
        assert_eq!(edge_edge_count(&k10, &all, &distinct), 720);
        assert!(check_edge(&k10, &all, &distinct, &params(1.0, 0.3)).is_pass());
        assert!(check_edge(&k10, &all, &Digraph::new(10), &params(1.0, 0.0)).is_pass());
        let empty = ThreeGraph::new(10);
        assert!(!check_edge(&empty, &all, &Digraph::complete(10), &params(0.5, 0.01)).is_pass());
    }

    #[test]
    fn falsifier_on_empty_graph_finds_everything() {
        let n = 12;
        let h = ThreeGraph::new(n);
        let p = params(0.5, 0.001);
        let w = falsify_cherry(&h, &p, FalsifyBudget { restarts: 3, iterations: 10 }, &mut stage_rng(1, "t")).unwrap();
        assert!(recheck(&h, &w, &p));
        let expect = 0.5 * 1728.0 - 0.001 * 1728.0;
        assert!((w.deficit - expect).abs() < 1e-9, "deficit {}", w.deficit);
        let rho = estimate_rho_hat(&h, 0.5f64, 2, &mut stage_rng(1, "r"));
        assert!((rho - 0.5).abs() < 1e-12);
    }

    #[test]
    fn points_falsifier_on_split() {
        let h = generate::split(20);
        let p = params(0.3, 0.001);
        let w = falsify_points(&h, &p, FalsifyBudget { restarts: 10, iterations: 20 }, &mut stage_rng(3, "p")).unwrap();
        assert!(recheck(&h, &w, &p));
        let k = generate::complete(12);
        assert!(falsify_points(&k, &params(0.5, 0.05), FalsifyBudget::default(), &mut stage_rng(3, "q")).is_none());
    }
}
