//! Instance generators.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ThreeGraph, Triple};
use crate::seed::stage_rng;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("bad generator parameters: {0}")]
    BadParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    /// Binomial model: each triple independently with probability `p`.
    Random,
    Complete,
    /// Edges `{i, i+1, i+2}` (indices mod n).
    TightCycle,
    /// Two halves, every triple inside either half.
    Split,
    /// The five edges of a single absorber gadget on five vertices.
    SingleAbsorber,
}

pub fn complete(n: usize) -> ThreeGraph {
    let mut g = ThreeGraph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                g.insert_triple(Triple::new(a, b, c).unwrap());
            }
        }
    }
    g
}

/// `G(n, p)`. Triples are visited in lexicographic order, one draw each.
pub fn random<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> ThreeGraph {
    let mut g = ThreeGraph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if rng.gen_bool(p) {
                    g.insert_triple(Triple::new(a, b, c).unwrap());
                }
            }
        }
    }
    g
}

pub fn tight_cycle(n: usize) -> ThreeGraph {
    let mut g = ThreeGraph::new(n);
    if n >= 3 {
        for i in 0..n {
            // n = 3 collapses to a single edge; n = 4 gives K4.
            let _ = g.add_edge(i, (i + 1) % n, (i + 2) % n);
        }
    }
    g
}

/// Complete 3-graphs on `[0, k)` and `[k, n)`.
pub fn disjoint_complete(n: usize, k: usize) -> ThreeGraph {
    let mut g = ThreeGraph::new(n);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if (c < k) || (a >= k) {
                    g.insert_triple(Triple::new(a, b, c).unwrap());
                }
            }
        }
    }
    g
}

/// `X = [0, n/2)`, `Y = [n/2, n)`; edges are the triples inside `X` or inside `Y`.
pub fn split(n: usize) -> ThreeGraph {
    disjoint_complete(n, n / 2)
}

/// Vertices `x, y, z, w, v = 0, 1, 2, 3, 4` with exactly the edges
/// `{x,y,z}, {y,z,w}, {v,x,y}, {v,y,z}, {v,z,w}`.
pub fn single_absorber() -> ThreeGraph {
    ThreeGraph::from_edges(5, [(0, 1, 2), (1, 2, 3), (4, 0, 1), (4, 1, 2), (4, 2, 3)]).unwrap()
}

/// All triples containing vertex 0.
pub fn star(n: usize) -> ThreeGraph {
    let mut g = ThreeGraph::new(n);
    for b in 1..n {
        for c in b + 1..n {
            g.insert_triple(Triple::new(0, b, c).unwrap());
        }
    }
    g
}

/// Dispatches on `kind`; `p` is required for [`GenKind::Random`] only.
pub fn generate(kind: GenKind, n: usize, p: Option<f64>, seed: u64) -> Result<ThreeGraph, GenError> {
    match kind {
        GenKind::Random => {
            let p = p.ok_or_else(|| GenError::BadParams("random graphs need -p".into()))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(GenError::BadParams(format!("p = {p} is not a probability")));
            }
            Ok(random(n, p, &mut stage_rng(seed, "gen.random")))
        }
        GenKind::Complete => Ok(complete(n)),
        GenKind::TightCycle => {
            if n < 5 {
                return Err(GenError::BadParams(format!("tight cycles need n >= 5, got {n}")));
            }
            Ok(tight_cycle(n))
        }
        GenKind::Split => Ok(split(n)),
        GenKind::SingleAbsorber => {
            if n != 5 {
                return Err(GenError::BadParams(format!("the absorber gadget has 5 vertices, got n = {n}")));
            }
            Ok(single_absorber())
        }
    }
}
