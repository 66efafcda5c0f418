//! Codegree shaving: spanning subgraphs in which every pair has codegree
//! either at least a threshold or exactly zero.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{OrderedPair, ThreeGraph, Triple};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShaveError {
    #[error("need at least 6 vertices, got {0}")]
    TooSmall(usize),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("{low_pairs} pairs have codegree below {threshold:.3}, more than the {allowed:.3} permitted")]
    PreconditionFailed { low_pairs: usize, threshold: f64, allowed: f64 },
    #[error("bound violated: {what} = {value} exceeds {bound:.3}")]
    BoundViolation { what: &'static str, value: f64, bound: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShaveResult {
    /// Spanning subgraph of the input.
    pub subgraph: ThreeGraph,
    /// Unordered pairs `x < y` of codegree zero in `subgraph`.
    pub zeroed_pairs: Vec<OrderedPair>,
    pub removed_edges: usize,
    pub threshold_used: f64,
    /// Smallest integer codegree meeting `threshold_used`.
    pub min_count: usize,
}

/// Summary numbers, for logs and reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShaveStats {
    pub removed_edges: usize,
    pub zeroed_pairs: usize,
    pub threshold_used: f64,
    pub low_pairs: usize,
}

impl ShaveResult {
    /// The dichotomy: every pair has codegree zero or at least the threshold.
    pub fn dichotomy_holds(&self) -> bool {
        let g = &self.subgraph;
        g.unordered_pairs().all(|(x, y)| {
            let c = g.pair_codegree(x, y);
            c == 0 || c >= self.min_count
        })
    }

    pub fn stats(&self, low_pairs: usize) -> ShaveStats {
        ShaveStats {
            removed_edges: self.removed_edges,
            zeroed_pairs: self.zeroed_pairs.len(),
            threshold_used: self.threshold_used,
            low_pairs,
        }
    }
}

/// Integer form of `c >= tau`. The small allowance absorbs float noise such
/// as `0.45 * 100 / 3 = 15.000000000000002`.
pub fn count_threshold(tau: f64) -> usize {
    if tau <= 0.0 {
        0
    } else {
        (tau - 1e-9).ceil().max(0.0) as usize
    }
}

fn binom2(n: usize) -> f64 {
    (n * n.saturating_sub(1)) as f64 / 2.0
}

fn binom3(n: usize) -> f64 {
    n as f64 * n.saturating_sub(1) as f64 * n.saturating_sub(2) as f64 / 6.0
}

fn kill_pair(g: &mut ThreeGraph, x: usize, y: usize) {
    let doomed = g.neighbors(x, y).to_vec();
    for z in doomed {
        g.delete_triple(Triple::new(x, y, z).expect("pair neighbourhoods exclude the pair"));
    }
}

/// Repeatedly deletes every edge through a pair of codegree in `(0, tau)`,
/// sweeping pairs in lexicographic order until a sweep changes nothing.
///
/// The surviving edge set is the unique largest subgraph satisfying the
/// dichotomy (such subgraphs are closed under union), so it does not depend
/// on the sweep order.
pub fn purge(g: &ThreeGraph, tau: f64) -> ShaveResult {
    let order: Vec<OrderedPair> = g.unordered_pairs().collect();
    purge_in_order(g, tau, &order)
}

/// [`purge`] with an explicit pair order per sweep. `order` must list every
/// unordered pair.
pub fn purge_in_order(g: &ThreeGraph, tau: f64, order: &[OrderedPair]) -> ShaveResult {
    let min_count = count_threshold(tau);
    let mut h = g.clone();
    loop {
        let mut changed = false;
        for &(x, y) in order {
            let c = h.pair_codegree(x, y);
            if c > 0 && c < min_count {
                kill_pair(&mut h, x, y);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let zeroed_pairs = h.unordered_pairs().filter(|&(x, y)| h.pair_codegree(x, y) == 0).collect();
    let removed_edges = g.edge_count() - h.edge_count();
    ShaveResult { subgraph: h, zeroed_pairs, removed_edges, threshold_used: tau, min_count }
}

fn low_pairs(g: &ThreeGraph, tau: f64) -> usize {
    let m = count_threshold(tau);
    g.unordered_pairs().filter(|&(x, y)| g.pair_codegree(x, y) < m).count()
}

/// Cleanup for graphs where all but `theta·C(n,2)` pairs have codegree at
/// least `mu·(n-2)`: purges at `(mu - 8·theta^(1/4))·(n-2)` and checks that
/// at most `48·theta^(1/4)·C(n,3)` edges and `(theta + theta^(1/4))·C(n,2)`
/// pairs were lost.
pub fn strong_dense_subgraph(g: &ThreeGraph, mu: f64, theta: f64) -> Result<ShaveResult, ShaveError> {
    let n = g.n();
    if n < 6 {
        return Err(ShaveError::TooSmall(n));
    }
    if !(mu > 0.0 && mu < 1.0 && theta > 0.0 && theta < 1.0) {
        return Err(ShaveError::BadParams(format!("need 0 < mu, theta < 1, got mu = {mu}, theta = {theta}")));
    }
    let low_threshold = mu * (n - 2) as f64;
    let low = low_pairs(g, low_threshold);
    let allowed = theta * binom2(n);
    if low as f64 > allowed {
        return Err(ShaveError::PreconditionFailed { low_pairs: low, threshold: low_threshold, allowed });
    }
    let q = theta.powf(0.25);
    let tau = (mu - 8.0 * q) * (n - 2) as f64;
    let res = purge(g, tau);
    let edge_bound = 48.0 * q * binom3(n);
    if res.removed_edges as f64 > edge_bound {
        return Err(ShaveError::BoundViolation {
            what: "removed edges",
            value: res.removed_edges as f64,
            bound: edge_bound,
        });
    }
    let pair_bound = (theta + q) * binom2(n);
    if res.zeroed_pairs.len() as f64 > pair_bound {
        return Err(ShaveError::BoundViolation {
            what: "zero-codegree pairs",
            value: res.zeroed_pairs.len() as f64,
            bound: pair_bound,
        });
    }
    Ok(res)
}

/// The `dn/3`-or-zero subgraph.
///
/// Counts the pairs below `d(n-2)/2`; more than `(2·rho/d)·C(n,2)` of them
/// means the graph is too sparse for the construction and is reported as
/// [`ShaveError::PreconditionFailed`]. Otherwise runs the cleanup with
/// `mu = d/2`, `theta = 2·rho/d`, purges at `dn/3`, and checks that at most
/// `rho^(1/5)·C(n,2)` pairs end with codegree zero.
///
/// Returns the result together with the number of low pairs.
pub fn shave_graph(h: &ThreeGraph, d: f64, rho: f64) -> Result<(ShaveResult, usize), ShaveError> {
    let n = h.n();
    if n < 6 {
        return Err(ShaveError::TooSmall(n));
    }
    if !(d > 0.0 && d <= 1.0 && rho > 0.0) {
        return Err(ShaveError::BadParams(format!("need 0 < d <= 1 and rho > 0, got d = {d}, rho = {rho}")));
    }
    let low_threshold = d * (n - 2) as f64 / 2.0;
    let low = low_pairs(h, low_threshold);
    let allowed = 2.0 * rho / d * binom2(n);
    if low as f64 > allowed {
        return Err(ShaveError::PreconditionFailed { low_pairs: low, threshold: low_threshold, allowed });
    }
    let res = purge(h, d * n as f64 / 3.0);
    let zero_bound = rho.powf(0.2) * binom2(n);
    if res.zeroed_pairs.len() as f64 > zero_bound {
        return Err(ShaveError::BoundViolation {
            what: "zero-codegree pairs",
            value: res.zeroed_pairs.len() as f64,
            bound: zero_bound,
        });
    }
    Ok((res, low))
}
