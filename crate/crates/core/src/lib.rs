//! Time-varying hypergraphs and minimal temporal paths.
//!
//! Vertices are people, hyperedges are conversations (such as code reviews)
//! that connect two or more of them during a time interval. Information
//! spreads along time-respecting walks; this crate computes, from every
//! source, the foremost (earliest arrival), shortest (fewest hops) and
//! fastest (least elapsed time) walks, and runs that computation over whole
//! networks.
//!
//! * [`graph`]: the data model and incidence index
//! * [`paths`]: single-source algorithms and walk reconstruction
//! * [`oracle`]: exhaustive walk enumeration for differential testing
//! * [`simulate`]: parallel, checkpointed all-sources runs
//! * [`gen`]: seeded synthetic networks
//! * [`io`]: JSON network documents and result serialization

pub mod gen;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod paths;
pub mod simulate;

pub use graph::{
    Edge, EdgeIdx, GraphError, NetworkStats, TemporalHyperedge, Tick, TimeVaryingHypergraph, VertexIdx,
};
pub use paths::{DistanceLabels, Metric, PathError, TemporalWalk};
pub use simulate::{DiffusionResult, SimulationPlan};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
