//! Tight Hamilton cycles in dense 3-uniform hypergraphs by absorption.
//!
//! The crate finds a tight Hamilton cycle in a 3-graph whose pair
//! neighbourhoods are dense in the cherry sense, and emits a certificate that
//! any reader can re-check window by window. Every intermediate claim (shaved
//! subgraph dichotomy, reservoir properties, absorbers, connectors) is checked
//! at run time, so a run either produces a verified cycle or a stage-tagged
//! failure.
//!
//! ```
//! use tighthc::{generate, oracle, pipeline::{find_tight_hamilton, PipelineParams}};
//!
//! let g = generate::complete(30);
//! let params = PipelineParams { sigma: 0.3, ..PipelineParams::new(0.9, 0.01) };
//! let cert = find_tight_hamilton(&g, &params).unwrap();
//! assert!(oracle::verify_hamilton_cycle(&g, &cert.order));
//! ```

pub mod absorb;
pub mod bitset;
pub mod connect;
pub mod density;
pub mod format;
pub mod generate;
pub mod graph;
pub mod oracle;
pub mod path;
pub mod pathcover;
pub mod pipeline;
pub mod scalar;
pub mod seed;
pub mod shave;

pub use bitset::VertexSet;
pub use graph::{GraphError, OrderedPair, ThreeGraph, Triple, Vertex};
pub use path::{PathEnd, PathError, TightCycle, TightPath};
pub use scalar::Scalar;

/// Density parameters over `f64`.
pub type DensityParams64 = density::DensityParams<f64>;
/// Density parameters over `f32`.
pub type DensityParams32 = density::DensityParams<f32>;
/// Exact density parameters; witnesses carry rational deficits.
pub type ExactDensityParams = density::DensityParams<num_rational::Ratio<i64>>;
pub type DensityWitness64 = density::DensityWitness<f64>;
pub type ExactDensityWitness = density::DensityWitness<num_rational::Ratio<i64>>;
