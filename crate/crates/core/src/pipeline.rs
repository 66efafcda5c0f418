//! End-to-end construction of a tight Hamilton cycle.
//!
//! Stages, each checked as it completes:
//!
//! 1. shave the input to `H'`, where every pair has codegree `0` or `≥ dn/3`;
//! 2. sample a reservoir `A` and verify its size, degree and codegree
//!    properties exhaustively;
//! 3. build an absorbing path `P0` with one absorber per vertex of `A`
//!    ([`AbsorptionMode::Reserved`] only);
//! 4. cover the rest of `H'` by a few disjoint tight paths, leaving `U`;
//! 5. wrap each `v ∈ U` into a gadget `v1 v2 v v3 v4` built from `A`;
//! 6. join everything into a tight cycle with connectors drawn from `A`;
//! 7. absorb the unused vertices of `A`;
//! 8. verify the cycle window by window.
//!
//! A certificate is returned only after step 8 succeeds.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::absorb::{find_absorber, is_absorber, AbsorbError, AbsorberConstraint};
use crate::bitset::VertexSet;
use crate::connect::{connect_chain, ConnectError, ConnectorParams};
use crate::graph::{ThreeGraph, Vertex};
use crate::oracle::verify_hamilton_cycle;
use crate::path::{check_tight, PathEnd, TightPath};
use crate::pathcover::{greedy_cover_within, CoverError, CoverParams};
use crate::seed::{derive_seed, indexed_rng, stage_rng};
use crate::shave::{shave_graph, ShaveError, ShaveStats};

/// Where the vertices of `A` that the assembly leaves unused get absorbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbsorptionMode {
    /// `Reserved` when the absorbing path fits, else `InCycle`.
    #[default]
    Auto,
    /// A dedicated absorbing path `P0`, built before the cover, holding one
    /// absorber per vertex of `A`.
    Reserved,
    /// No `P0`. The cycle is built on `V \ A` plus connector and gadget
    /// vertices, and the unused vertices of `A` are matched to absorbers
    /// formed by four consecutive cycle vertices.
    InCycle,
}

impl AbsorptionMode {
    /// `P0` has at most `(internal_len + 4)·|A|` vertices and `|A| ≤ 2σn`;
    /// `Reserved` is chosen when that bound, plus `A` itself, fits in `n`.
    pub fn resolve(self, n: usize, sigma: f64, internal_len: usize) -> AbsorptionMode {
        match self {
            AbsorptionMode::Auto => {
                if (internal_len + 5) as f64 * 2.0 * sigma * n as f64 <= n as f64 {
                    AbsorptionMode::Reserved
                } else {
                    AbsorptionMode::InCycle
                }
            }
            m => m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub d: f64,
    pub rho: f64,
    /// Minimum vertex degree fraction. Reported, never enforced.
    pub alpha: f64,
    /// Reservoir sampling probability.
    pub sigma: f64,
    /// Leftover fraction allowed by the cover.
    pub zeta: f64,
    /// Most cover paths.
    pub l0: usize,
    /// Waypoint threshold for `P0` connectors, as a fraction of `n`.
    pub beta_absorbing: f64,
    /// Waypoint threshold for assembly connectors, as a fraction of `|A*|`.
    pub beta_connect: f64,
    pub internal_len: usize,
    pub reservoir_tries: usize,
    pub cover_restarts: usize,
    /// Fresh attempts at stages 4 to 7 for one reservoir.
    pub assembly_tries: usize,
    /// Whole runs, with seeds `seed, seed + 1, …`.
    pub global_retries: usize,
    pub beam: usize,
    pub seed: u64,
    pub mode: AbsorptionMode,
}

impl PipelineParams {
    /// Defaults from the density parameters: `alpha = d/2`,
    /// `sigma = min(1/132, d/33)`, `zeta = min(alpha·sigma/72, d·sigma/4320)`.
    pub fn new(d: f64, rho: f64) -> Self {
        let alpha = d / 2.0;
        let sigma = (1.0f64 / 132.0).min(d / 33.0);
        let zeta = (alpha * sigma / 72.0).min(d * sigma / 4320.0);
        PipelineParams {
            d,
            rho,
            alpha,
            sigma,
            zeta,
            l0: 20,
            beta_absorbing: d / 6.0,
            beta_connect: d / 20.0,
            internal_len: 6,
            reservoir_tries: 10_000,
            cover_restarts: 5,
            assembly_tries: 5,
            global_retries: 3,
            beam: 2048,
            seed: 0,
            mode: AbsorptionMode::Auto,
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), PipelineError> {
        let unit = |x: f64| x > 0.0 && x <= 1.0;
        let bad = |m: String| Err(PipelineError::BadParams(m));
        if !(unit(self.d) && unit(self.alpha) && unit(self.sigma) && unit(self.zeta)) {
            return bad(format!(
                "d, alpha, sigma, zeta must lie in (0, 1]; got {}, {}, {}, {}",
                self.d, self.alpha, self.sigma, self.zeta
            ));
        }
        if !(self.rho > 0.0 && self.beta_absorbing > 0.0 && self.beta_connect > 0.0) {
            return bad("rho and the beta fractions must be positive".into());
        }
        if self.l0 == 0 {
            return bad("l0 must be at least 1".into());
        }
        if self.sigma * (n as f64) < 2.0 {
            return bad(format!("sigma·n = {:.3} is below 2; the reservoir would be empty", self.sigma * n as f64));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("shave failed: {0}")]
    ShaveFailed(#[from] ShaveError),
    #[error("no reservoir after {} tries (size ok: {}, degree ok: {}, codegree ok: {})",
        .0.tries_used, .0.size_ok, .0.degree_ok, .0.codegree_ok)]
    ReservoirFailed(Box<ReservoirReport>),
    #[error("absorber stage {stage} failed: {detail}")]
    AbsorberFailed { stage: &'static str, vertex: Option<Vertex>, detail: String },
    #[error("cover failed: {0}")]
    CoverTooSparse(#[from] CoverError),
    #[error("connection failed in {stage}: {source}")]
    ConnectFailed { stage: &'static str, source: ConnectError },
    #[error("internal error, produced cycle does not verify: {0}")]
    VerificationFailed(String),
}

impl PipelineError {
    pub fn stage(&self) -> &'static str {
        match self {
            PipelineError::BadParams(_) => "params",
            PipelineError::ShaveFailed(_) => "shave",
            PipelineError::ReservoirFailed(_) => "reservoir",
            PipelineError::AbsorberFailed { .. } => "absorber",
            PipelineError::CoverTooSparse(_) => "cover",
            PipelineError::ConnectFailed { .. } => "connect",
            PipelineError::VerificationFailed(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeWitness {
    pub v: Vertex,
    pub have: usize,
    pub need: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodegreeWitness {
    pub x: Vertex,
    pub y: Vertex,
    pub have: usize,
    pub need: f64,
}

/// The reservoir `A` and the outcome of checking it.
#[derive(Debug, Clone, PartialEq)]
pub struct ReservoirReport {
    pub a: VertexSet,
    /// `σn/2 ≤ |A| ≤ 2σn`.
    pub size_ok: bool,
    /// `deg_H(v, A) ≥ deg_H(v)·σ²/2` for every `v`.
    pub degree_ok: bool,
    /// `deg_H'(xy, A) ≥ deg_H'(xy)·σ/2` for every pair of positive codegree.
    pub codegree_ok: bool,
    /// Tightest vertex, by `have - need`.
    pub worst_degree: Option<DegreeWitness>,
    /// Tightest pair of positive codegree, by `have - need`.
    pub worst_codegree: Option<CodegreeWitness>,
    pub tries_used: usize,
}

impl ReservoirReport {
    pub fn ok(&self) -> bool {
        self.size_ok && self.degree_ok && self.codegree_ok
    }
}

const EPS: f64 = 1e-9;

/// Edges `{v, a, b}` with `a, b ∈ A`.
pub fn degree_into(g: &ThreeGraph, v: Vertex, a: &VertexSet) -> usize {
    let twice: usize = a.iter().filter(|&u| u != v).map(|u| g.neighbors(v, u).intersection_count(a)).sum();
    twice / 2
}

/// Checks the three reservoir properties of `a` exhaustively.
pub fn check_reservoir(g: &ThreeGraph, hp: &ThreeGraph, a: &VertexSet, sigma: f64) -> ReservoirReport {
    let n = g.n();
    let size = a.len() as f64;
    let sn = sigma * n as f64;
    let size_ok = size >= sn / 2.0 - EPS && size <= 2.0 * sn + EPS;

    let mut worst_degree: Option<DegreeWitness> = None;
    let mut degree_ok = true;
    for v in 0..n {
        let need = g.vertex_degree(v) as f64 * sigma * sigma / 2.0;
        let have = degree_into(g, v, a);
        if (have as f64) < need - EPS {
            degree_ok = false;
        }
        if worst_degree.is_none_or(|w| have as f64 - need < w.have as f64 - w.need) {
            worst_degree = Some(DegreeWitness { v, have, need });
        }
    }

    let mut worst_codegree: Option<CodegreeWitness> = None;
    let mut codegree_ok = true;
    for (x, y) in hp.unordered_pairs() {
        let c = hp.pair_codegree(x, y);
        if c == 0 {
            continue;
        }
        let need = c as f64 * sigma / 2.0;
        let have = hp.neighbors(x, y).intersection_count(a);
        if (have as f64) < need - EPS {
            codegree_ok = false;
        }
        if worst_codegree.is_none_or(|w| have as f64 - need < w.have as f64 - w.need) {
            worst_codegree = Some(CodegreeWitness { x, y, have, need });
        }
    }
    ReservoirReport { a: a.clone(), size_ok, degree_ok, codegree_ok, worst_degree, worst_codegree, tries_used: 0 }
}

/// Requirements of the reservoir properties that do not depend on `A`.
struct ReservoirNeeds {
    degree: Vec<f64>,
    codegree: Vec<(Vertex, Vertex, f64)>,
}

impl ReservoirNeeds {
    fn new(g: &ThreeGraph, hp: &ThreeGraph, sigma: f64) -> Self {
        let degree = (0..g.n()).map(|v| g.vertex_degree(v) as f64 * sigma * sigma / 2.0).collect();
        let codegree = hp
            .unordered_pairs()
            .filter_map(|(x, y)| {
                let c = hp.pair_codegree(x, y);
                (c > 0).then(|| (x, y, c as f64 * sigma / 2.0))
            })
            .collect();
        ReservoirNeeds { degree, codegree }
    }

    /// Same verdict as [`check_reservoir`], stopping at the first violation.
    fn holds(&self, g: &ThreeGraph, hp: &ThreeGraph, a: &VertexSet) -> bool {
        self.codegree
            .iter()
            .all(|&(x, y, need)| hp.neighbors(x, y).intersection_count(a) as f64 >= need - EPS)
            && self.degree.iter().enumerate().all(|(v, &need)| degree_into(g, v, a) as f64 >= need - EPS)
    }
}

/// Draws `A` by keeping each vertex with probability `sigma`, retrying until
/// all three reservoir properties hold or `max_tries` draws are spent.
pub fn sample_reservoir<R: Rng + ?Sized>(
    g: &ThreeGraph,
    hp: &ThreeGraph,
    sigma: f64,
    max_tries: usize,
    rng: &mut R,
) -> Result<ReservoirReport, PipelineError> {
    let n = g.n();
    if !(sigma > 0.0 && sigma <= 1.0) || sigma * (n as f64) < 2.0 {
        return Err(PipelineError::BadParams(format!("sigma = {sigma} is degenerate for n = {n}")));
    }
    let sn = sigma * n as f64;
    let needs = ReservoirNeeds::new(g, hp, sigma);
    let mut last: Option<VertexSet> = None;
    for t in 1..=max_tries.max(1) {
        let a = VertexSet::from_vertices(n, (0..n).filter(|_| rng.gen_bool(sigma)));
        let size = a.len() as f64;
        if size < sn / 2.0 - EPS || size > 2.0 * sn + EPS {
            if last.is_none() {
                last = Some(a);
            }
            continue;
        }
        if needs.holds(g, hp, &a) {
            let report = check_reservoir(g, hp, &a, sigma);
            assert!(report.ok(), "fast and full reservoir checks disagree");
            return Ok(ReservoirReport { tries_used: t, ..report });
        }
        last = Some(a);
    }
    let report = check_reservoir(g, hp, &last.expect("at least one try"), sigma);
    Err(PipelineError::ReservoirFailed(Box::new(ReservoirReport { tries_used: max_tries.max(1), ..report })))
}

/// A tight path with slots: for each `v` in `slots`, the four path vertices
/// starting at `slots[v]` form a `v`-absorber, and slots are at least two
/// positions apart, so any subset of those vertices can be inserted at once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorbingPathRecord {
    pub path: TightPath,
    pub slots: BTreeMap<Vertex, usize>,
    pub ends: (PathEnd, PathEnd),
}

impl AbsorbingPathRecord {
    fn new(path: TightPath, slots: BTreeMap<Vertex, usize>) -> Self {
        let ends = (path.start_end(), path.finish_end());
        AbsorbingPathRecord { path, slots, ends }
    }

    pub fn absorbable(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.slots.keys().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlotError {
    #[error("vertex {0} has no slot")]
    NoSlot(Vertex),
    #[error("vertex {0} is already on the path")]
    OnPath(Vertex),
    #[error("slot for vertex {v} no longer absorbs it: {detail}")]
    SlotInvalid { v: Vertex, detail: String },
}

/// Inserts every vertex of `a_prime` into its slot. The result has the same
/// ends as `rec.path` and vertex set `V(rec.path) ∪ a_prime`.
pub fn absorb_into(g: &ThreeGraph, rec: &AbsorbingPathRecord, a_prime: &[Vertex]) -> Result<TightPath, SlotError> {
    let seq = rec.path.vertices();
    let mut after: BTreeMap<usize, Vertex> = BTreeMap::new();
    for &v in a_prime {
        let &i = rec.slots.get(&v).ok_or(SlotError::NoSlot(v))?;
        if seq.contains(&v) {
            return Err(SlotError::OnPath(v));
        }
        let quad = [seq[i], seq[i + 1], seq[i + 2], seq[i + 3]];
        if !is_absorber(g, v, quad) {
            return Err(SlotError::SlotInvalid { v, detail: format!("{quad:?} is not an absorber") });
        }
        after.insert(i + 1, v);
    }
    let mut out = Vec::with_capacity(seq.len() + after.len());
    for (i, &u) in seq.iter().enumerate() {
        out.push(u);
        if let Some(&v) = after.get(&i) {
            out.push(v);
        }
    }
    check_tight(g, &out, false).map_err(|e| SlotError::SlotInvalid {
        v: after.values().next().copied().unwrap_or(0),
        detail: e.to_string(),
    })?;
    Ok(TightPath::from_vec_unchecked(out))
}

/// The absorbing path of the reserved mode.
///
/// Every `v ∈ A` gets an absorber avoiding `A` and all earlier absorbers,
/// with both boundary pairs of codegree at least `dn/3` in `hp`. The
/// 4-vertex paths `v1 v2 v3 v4` are then joined in order, `(v3, v4)` to the
/// next `(v2', v1')`, by connectors avoiding `A` whose waypoints have
/// codegree at least `beta_absorbing·n`.
pub fn build_absorbing_path<R: Rng + ?Sized>(
    g: &ThreeGraph,
    hp: &ThreeGraph,
    a: &VertexSet,
    p: &PipelineParams,
    rng: &mut R,
) -> Result<AbsorbingPathRecord, PipelineError> {
    let n = g.n();
    let mut w = a.clone();
    let mut pieces = Vec::new();
    let threshold = p.d * n as f64 / 3.0;
    for v in a.iter() {
        w.remove(v);
        let c = AbsorberConstraint { forbidden: &w, shadow_graph: hp, pair_threshold: threshold, within: None };
        let res = find_absorber(g, v, &c, rng);
        w.insert(v);
        let abs = res.map_err(|e| absorber_failed("absorbing path", v, e))?;
        for &u in &abs.quad {
            w.insert(u);
        }
        pieces.push(abs);
    }
    if pieces.is_empty() {
        return Err(PipelineError::AbsorberFailed {
            stage: "absorbing path",
            vertex: None,
            detail: "reservoir is empty".into(),
        });
    }
    let paths: Vec<TightPath> = pieces.iter().map(|b| TightPath::from_vec_unchecked(b.without_vertex())).collect();
    let cp = ConnectorParams {
        beam: p.beam,
        ..ConnectorParams::new(p.internal_len, p.beta_absorbing * n as f64)
    };
    let chain = connect_chain(g, hp, &paths, a, &cp, rng, false)
        .map_err(|source| PipelineError::ConnectFailed { stage: "absorbing path", source })?;
    let seq = chain.into_vec();
    let mut slots = BTreeMap::new();
    for b in &pieces {
        let i = seq.iter().position(|&u| u == b.quad[0]).expect("absorber is on the path");
        debug_assert_eq!(&seq[i..i + 4], &b.quad);
        slots.insert(b.v, i);
    }
    let path = TightPath::from_vec_unchecked(seq);
    assert!(path.len() <= 11 * a.len(), "absorbing path longer than 11|A|");
    Ok(AbsorbingPathRecord::new(path, slots))
}

fn absorber_failed(stage: &'static str, v: Vertex, e: AbsorbError) -> PipelineError {
    PipelineError::AbsorberFailed { stage, vertex: Some(v), detail: e.to_string() }
}

/// Maximum bipartite matching by augmenting paths. `adj[l]` lists the right
/// vertices of `l`; returns the right partner of each left vertex.
fn kuhn(adj: &[Vec<usize>], right: usize) -> Vec<Option<usize>> {
    fn augment(l: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &r in &adj[l] {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            if owner[r].is_none_or(|o| augment(o, adj, seen, owner)) {
                owner[r] = Some(l);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    for l in 0..adj.len() {
        let mut seen = vec![false; right];
        augment(l, adj, &mut seen, &mut owner);
    }
    let mut partner = vec![None; adj.len()];
    for (r, o) in owner.iter().enumerate() {
        if let Some(l) = o {
            partner[*l] = Some(r);
        }
    }
    partner
}

/// Finds absorbers for `rest` among the quadruples of consecutive vertices
/// of the tight cycle `order`, read as a path from position 0.
///
/// Slots must sit two apart. Slots of one parity are matched first, then
/// the remaining vertices go to slots of the other parity whose neighbours
/// are both free; both parity orders are tried. Returns the number of
/// vertices left unmatched on failure.
pub fn slot_cycle(g: &ThreeGraph, order: &[Vertex], rest: &[Vertex]) -> Result<AbsorbingPathRecord, usize> {
    let l = order.len();
    if rest.is_empty() {
        return Ok(AbsorbingPathRecord::new(TightPath::from_vec_unchecked(order.to_vec()), BTreeMap::new()));
    }
    if l < 4 {
        return Err(rest.len());
    }
    let last = l - 4;
    let cands: Vec<Vec<usize>> = rest
        .iter()
        .map(|&v| (0..=last).filter(|&i| is_absorber(g, v, [order[i], order[i + 1], order[i + 2], order[i + 3]])).collect())
        .collect();
    let mut best: Option<(usize, BTreeMap<Vertex, usize>)> = None;
    for first in 0..2 {
        let adj: Vec<Vec<usize>> = cands.iter().map(|c| c.iter().copied().filter(|i| i % 2 == first).collect()).collect();
        let m1 = kuhn(&adj, last + 1);
        let mut taken = vec![false; last + 1];
        for r in m1.iter().flatten() {
            taken[*r] = true;
        }
        let free = |i: usize| !taken[i] && (i == 0 || !taken[i - 1]) && (i == last || !taken[i + 1]);
        let left: Vec<usize> = (0..rest.len()).filter(|&k| m1[k].is_none()).collect();
        let adj2: Vec<Vec<usize>> = left
            .iter()
            .map(|&k| cands[k].iter().copied().filter(|&i| i % 2 != first && free(i)).collect())
            .collect();
        let m2 = kuhn(&adj2, last + 1);
        let mut slots = BTreeMap::new();
        for (k, r) in m1.iter().enumerate() {
            if let Some(i) = r {
                slots.insert(rest[k], *i);
            }
        }
        for (j, r) in m2.iter().enumerate() {
            if let Some(i) = r {
                slots.insert(rest[left[j]], *i);
            }
        }
        let missing = rest.len() - slots.len();
        if best.as_ref().is_none_or(|(b, _)| missing < *b) {
            best = Some((missing, slots));
        }
    }
    let (missing, slots) = best.expect("two parities tried");
    if missing > 0 {
        return Err(missing);
    }
    Ok(AbsorbingPathRecord::new(TightPath::from_vec_unchecked(order.to_vec()), slots))
}

/// What happened at each stage of a successful run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageLog {
    pub mode: AbsorptionMode,
    pub seed_used: u64,
    pub global_attempt: usize,
    pub assembly_attempt: usize,
    pub removed_edges: usize,
    pub zeroed_pairs: usize,
    pub low_pairs: usize,
    pub shave_threshold: f64,
    pub min_degree_ok: bool,
    pub reservoir_size: usize,
    pub reservoir_tries: usize,
    pub absorbing_path_len: usize,
    pub cover_paths: usize,
    pub cover_leftover: usize,
    pub gadgets: usize,
    pub a_star: usize,
    pub joins: usize,
    pub connector_vertices: usize,
    pub absorbed: usize,
    pub warnings: Vec<String>,
}

impl StageLog {
    pub fn shave_stats(&self) -> ShaveStats {
        ShaveStats {
            removed_edges: self.removed_edges,
            zeroed_pairs: self.zeroed_pairs,
            threshold_used: self.shave_threshold,
            low_pairs: self.low_pairs,
        }
    }
}

/// A verified tight Hamilton cycle with the parameters and log that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HamiltonCertificate {
    pub n: usize,
    pub order: Vec<Vertex>,
    pub params: PipelineParams,
    pub log: StageLog,
}

/// Runs the pipeline, retrying with seeds `seed + 1, …` up to
/// `global_retries` runs in total. Parameter and shave failures do not
/// depend on the seed and are returned at once.
pub fn find_tight_hamilton(g: &ThreeGraph, p: &PipelineParams) -> Result<HamiltonCertificate, PipelineError> {
    p.validate(g.n())?;
    let mut last = None;
    for t in 0..p.global_retries.max(1) {
        match run_once(g, p, p.seed.wrapping_add(t as u64)) {
            Ok(mut cert) => {
                cert.log.global_attempt = t;
                return Ok(cert);
            }
            Err(e @ (PipelineError::BadParams(_) | PipelineError::ShaveFailed(_) | PipelineError::VerificationFailed(_))) => {
                return Err(e)
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one run"))
}

/// One run with a fixed seed, with up to `assembly_tries` attempts at the
/// stages after the reservoir.
pub fn run_once(g: &ThreeGraph, p: &PipelineParams, seed: u64) -> Result<HamiltonCertificate, PipelineError> {
    let n = g.n();
    p.validate(n)?;
    let (sh, low) = shave_graph(g, p.d, p.rho)?;
    debug_assert!(sh.dichotomy_holds());
    let hp = &sh.subgraph;
    let mode = p.mode.resolve(n, p.sigma, p.internal_len);
    let mut warnings = Vec::new();
    let min_degree_ok = g.min_vertex_degree() as f64 >= p.alpha * (n * (n - 1)) as f64 / 2.0 - EPS;
    if !min_degree_ok {
        warnings.push(format!("minimum vertex degree {} is below alpha·C(n,2)", g.min_vertex_degree()));
    }

    let res = sample_reservoir(g, hp, p.sigma, p.reservoir_tries, &mut stage_rng(seed, "pipeline.reservoir"))?;
    let a = &res.a;
    let p0 = match mode {
        AbsorptionMode::Reserved => {
            if a.len() as f64 > p.d * n as f64 / 66.0 {
                warnings.push(format!("|A| = {} exceeds dn/66 = {:.2}", a.len(), p.d * n as f64 / 66.0));
            }
            Some(build_absorbing_path(g, hp, a, p, &mut stage_rng(seed, "pipeline.absorbing_path"))?)
        }
        _ => None,
    };

    let mut last = None;
    for t in 0..p.assembly_tries.max(1) {
        match assemble(g, hp, a, p0.as_ref(), p, seed, t) {
            Ok((order, mut log)) => {
                if !verify_hamilton_cycle(g, &order) {
                    return Err(PipelineError::VerificationFailed(format!("{order:?}")));
                }
                log.mode = mode;
                log.seed_used = seed;
                log.assembly_attempt = t;
                log.removed_edges = sh.removed_edges;
                log.zeroed_pairs = sh.zeroed_pairs.len();
                log.low_pairs = low;
                log.shave_threshold = sh.threshold_used;
                log.min_degree_ok = min_degree_ok;
                log.reservoir_size = a.len();
                log.reservoir_tries = res.tries_used;
                log.warnings.extend(warnings);
                return Ok(HamiltonCertificate { n, order, params: p.clone(), log });
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one assembly attempt"))
}

fn assemble(
    g: &ThreeGraph,
    hp: &ThreeGraph,
    a: &VertexSet,
    p0: Option<&AbsorbingPathRecord>,
    p: &PipelineParams,
    seed: u64,
    attempt: usize,
) -> Result<(Vec<Vertex>, StageLog), PipelineError> {
    let n = g.n();
    let mut rng = indexed_rng(seed, "pipeline.assembly", attempt as u64);

    // Stage 4: cover what is outside A and P0.
    let mut outside = a.complement();
    if let Some(rec) = p0 {
        for &v in rec.path.vertices() {
            outside.remove(v);
        }
    }
    let mut paths: Vec<TightPath> = p0.map(|r| r.path.clone()).into_iter().collect();
    let mut leftover = VertexSet::new(n);
    if !outside.is_empty() {
        let cp = CoverParams {
            zeta: (p.zeta * n as f64 / outside.len() as f64).min(1.0),
            l0: p.l0,
            restarts: p.cover_restarts,
            seed: derive_seed(seed, "pipeline.cover").wrapping_add(attempt as u64),
        };
        let cover = greedy_cover_within(hp, &outside, &cp)?;
        leftover = cover.leftover;
        paths.extend(cover.paths);
    }
    let cover_paths = paths.len() - p0.is_some() as usize;
    if paths.is_empty() {
        return Err(PipelineError::CoverTooSparse(CoverError::BadParams("nothing to build a cycle from".into())));
    }

    // Stage 5: gadgets for the leftover, inside A*.
    let mut a_star = a.clone();
    a_star.union_with(&leftover);
    for q in &paths {
        let (s, f) = (q.start_end(), q.finish_end());
        for v in [s.inner, s.outer, f.inner, f.outer] {
            a_star.insert(v);
        }
    }
    let mut spent = VertexSet::new(n);
    let mut gadgets = Vec::new();
    let gadget_threshold = p.d * a_star.len() as f64 / 18.0;
    let mut not_a = a.complement();
    for v in leftover.iter() {
        let mut forbidden = not_a.clone();
        forbidden.union_with(&spent);
        forbidden.remove(v);
        let c = AbsorberConstraint {
            forbidden: &forbidden,
            shadow_graph: hp,
            pair_threshold: gadget_threshold,
            within: Some(&a_star),
        };
        let abs = find_absorber(g, v, &c, &mut rng).map_err(|e| absorber_failed("leftover gadgets", v, e))?;
        for &u in &abs.quad {
            spent.insert(u);
        }
        gadgets.push(TightPath::from_vec_unchecked(abs.with_vertex()));
    }
    let gadget_count = gadgets.len();
    paths.extend(gadgets);

    // Stage 6: one cycle, connectors inside the unused part of A.
    let cp = ConnectorParams {
        beam: p.beam,
        ..ConnectorParams::new(p.internal_len, p.beta_connect * a_star.len() as f64)
    };
    not_a.union_with(&spent);
    let chain = connect_chain(g, hp, &paths, &not_a, &cp, &mut rng, true)
        .map_err(|source| PipelineError::ConnectFailed { stage: "assembly", source })?;
    let order = chain.into_vec();

    let in_paths: usize = paths.iter().map(|q| q.len()).sum();
    let connector_vertices = order.len() - in_paths;
    let joins = paths.len();
    let mut on_paths = VertexSet::new(n);
    for q in &paths {
        for &v in q.vertices() {
            on_paths.insert(v);
        }
    }
    for &v in &order {
        assert!(on_paths.contains(v) || a.contains(v), "connector vertex {v} outside A");
    }
    for &v in spent.iter().collect::<Vec<_>>().iter() {
        assert!(a.contains(v), "gadget vertex {v} outside A");
    }
    let mut unused = a.clone();
    for &v in &order {
        unused.remove(v);
    }
    assert_eq!(n, order.len() + unused.len(), "vertex conservation");
    assert_eq!(connector_vertices, joins * p.internal_len, "connector arithmetic");

    // Stage 7: absorb what is left of A.
    let rest = unused.to_vec();
    let order = match p0 {
        Some(rec) => {
            let grown = absorb_into(g, rec, &rest).map_err(|e| PipelineError::AbsorberFailed {
                stage: "final absorption",
                vertex: None,
                detail: e.to_string(),
            })?;
            let mut out = grown.into_vec();
            out.extend_from_slice(&order[rec.path.len()..]);
            out
        }
        None => {
            let rec = slot_cycle(g, &order, &rest).map_err(|missing| PipelineError::AbsorberFailed {
                stage: "final absorption",
                vertex: None,
                detail: format!("{missing} of {} vertices found no slot on the cycle", rest.len()),
            })?;
            absorb_into(g, &rec, &rest)
                .map_err(|e| PipelineError::AbsorberFailed {
                    stage: "final absorption",
                    vertex: None,
                    detail: e.to_string(),
                })?
                .into_vec()
        }
    };

    let log = StageLog {
        mode: AbsorptionMode::Auto,
        seed_used: seed,
        global_attempt: 0,
        assembly_attempt: attempt,
        removed_edges: 0,
        zeroed_pairs: 0,
        low_pairs: 0,
        shave_threshold: 0.0,
        min_degree_ok: true,
        reservoir_size: a.len(),
        reservoir_tries: 0,
        absorbing_path_len: p0.map_or(0, |r| r.path.len()),
        cover_paths,
        cover_leftover: leftover.len(),
        gadgets: gadget_count,
        a_star: a_star.len(),
        joins,
        connector_vertices,
        absorbed: rest.len(),
        warnings: Vec::new(),
    };
    Ok((order, log))
}
