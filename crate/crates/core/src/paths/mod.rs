//! Minimal temporal paths from a single source.
//!
//! Three notions of "closest" are supported, all over the same traversal
//! rule: standing at vertex `u` at time `a`, an edge `e ∋ u` with
//! `end(e) ≥ a` carries information to every other participant of `e`,
//! arriving at `max(a, start(e))`.
//!
//! * [`foremost`]: earliest arrival time (label-setting Dijkstra).
//! * [`shortest`]: fewest hops among feasible walks (hop-layered DP).
//! * [`fastest`]: smallest arrival − departure, optimized over departures.
//!
//! Every result carries a [`Trail`] from which [`reconstruct_walk`] rebuilds
//! a witness [`TemporalWalk`].

mod fastest;
mod foremost;
mod labels;
mod shortest;
mod walk;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::GraphError;

pub use fastest::{fastest, fastest_by_departures, fastest_within};
pub use foremost::{foremost, foremost_within};
pub use labels::{DistanceLabels, Trail, TrailHead, TrailNode};
pub use shortest::{earliest_arrival_layers, shortest, shortest_within};
pub use walk::{reconstruct_walk, Hop, TemporalWalk, WalkViolation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Foremost,
    Shortest,
    Fastest,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Foremost, Metric::Shortest, Metric::Fastest];

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Foremost => "foremost",
            Metric::Shortest => "shortest",
            Metric::Fastest => "fastest",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "foremost" => Ok(Metric::Foremost),
            "shortest" => Ok(Metric::Shortest),
            "fastest" => Ok(Metric::Fastest),
            other => Err(format!("unknown metric {other:?} (expected foremost, shortest or fastest)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("max_hops must be at least 1")]
    NonPositiveMaxHops,
    #[error("vertex {0:?} is not reached")]
    Unreached(String),
    #[error("labels were computed without a predecessor trail")]
    NoTrail,
}

impl From<GraphError> for PathError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::UnknownVertex(v) => PathError::UnknownVertex(v),
            other => PathError::UnknownVertex(other.to_string()),
        }
    }
}
