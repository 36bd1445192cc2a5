use std::fmt::Write as _;

use thiserror::Error;

use super::{DistanceLabels, Metric, PathError};
use crate::graph::{EdgeIdx, Tick, TimeVaryingHypergraph, VertexIdx};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hop {
    pub edge: EdgeIdx,
    /// Vertex the edge delivers to.
    pub via: VertexIdx,
}

/// A time-respecting walk: with `a₀ = departure`, hop `i` over edge `eᵢ`
/// requires `aᵢ₋₁ ≤ end(eᵢ)` and arrives at `aᵢ = max(aᵢ₋₁, start(eᵢ))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalWalk {
    pub source: VertexIdx,
    pub departure: Tick,
    pub hops: Vec<Hop>,
    pub arrivals: Vec<Tick>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkViolation {
    #[error("{hops} hops but {arrivals} arrivals")]
    LengthMismatch { hops: usize, arrivals: usize },
    #[error("hop {hop}: vertex {vertex:?} is not a participant of the edge")]
    NotParticipant { hop: usize, vertex: VertexIdx },
    #[error("hop {hop}: edge ended at {end} before arrival {at}")]
    EdgeExpired { hop: usize, at: Tick, end: Tick },
    #[error("hop {hop}: recorded arrival {recorded}, expected {expected}")]
    ArrivalMismatch { hop: usize, recorded: Tick, expected: Tick },
}

impl TemporalWalk {
    /// The zero-hop walk.
    pub fn empty(source: VertexIdx, departure: Tick) -> Self {
        Self { source, departure, hops: Vec::new(), arrivals: Vec::new() }
    }

    /// Builds a walk from its hops, computing arrivals. Does not check
    /// feasibility; see [`validate`](Self::validate).
    pub fn from_hops(h: &TimeVaryingHypergraph, source: VertexIdx, departure: Tick, hops: Vec<Hop>) -> Self {
        let mut at = departure;
        let arrivals = hops
            .iter()
            .map(|hop| {
                at = at.max(h.edge(hop.edge).start);
                at
            })
            .collect();
        Self { source, departure, hops, arrivals }
    }

    pub fn hop_count(&self) -> usize {
        self.hops.len()
    }

    pub fn target(&self) -> VertexIdx {
        self.hops.last().map_or(self.source, |h| h.via)
    }

    pub fn final_arrival(&self) -> Tick {
        self.arrivals.last().copied().unwrap_or(self.departure)
    }

    pub fn duration(&self) -> i64 {
        self.final_arrival().since(self.departure)
    }

    pub fn metric_value(&self, metric: Metric) -> i64 {
        match metric {
            Metric::Foremost => self.final_arrival().get(),
            Metric::Shortest => self.hop_count() as i64,
            Metric::Fastest => self.duration(),
        }
    }

    /// Checks feasibility, chaining and the recorded arrivals.
    pub fn validate(&self, h: &TimeVaryingHypergraph) -> Result<(), WalkViolation> {
        if self.hops.len() != self.arrivals.len() {
            return Err(WalkViolation::LengthMismatch { hops: self.hops.len(), arrivals: self.arrivals.len() });
        }
        let mut at = self.departure;
        let mut here = self.source;
        for (i, (hop, &recorded)) in self.hops.iter().zip(&self.arrivals).enumerate() {
            let edge = h.edge(hop.edge);
            for v in [here, hop.via] {
                if !edge.contains(v) {
                    return Err(WalkViolation::NotParticipant { hop: i, vertex: v });
                }
            }
            if at > edge.end {
                return Err(WalkViolation::EdgeExpired { hop: i, at, end: edge.end });
            }
            let expected = at.max(edge.start);
            if recorded != expected {
                return Err(WalkViolation::ArrivalMismatch { hop: i, recorded, expected });
            }
            at = expected;
            here = hop.via;
        }
        Ok(())
    }

    /// Human-readable form, e.g. `a -[e1@1]-> b -[e2@2]-> c`.
    pub fn display(&self, h: &TimeVaryingHypergraph) -> String {
        let mut out = h.vertex_name(self.source).to_owned();
        for (hop, at) in self.hops.iter().zip(&self.arrivals) {
            let _ = write!(out, " -[{}@{}]-> {}", h.edge(hop.edge).id, at, h.vertex_name(hop.via));
        }
        out
    }
}

/// Rebuilds the witness walk for `target` from the labels' trail.
pub fn reconstruct_walk(
    h: &TimeVaryingHypergraph,
    labels: &DistanceLabels,
    target: VertexIdx,
) -> Result<TemporalWalk, PathError> {
    if !labels.values.contains_key(&target) {
        let name = h.vertex_names().get(target.index()).cloned().unwrap_or_default();
        return Err(PathError::Unreached(name));
    }
    let trail = labels.trail.as_ref().ok_or(PathError::NoTrail)?;
    let head = trail.heads.get(&target).ok_or(PathError::NoTrail)?;
    let mut hops = Vec::new();
    let mut node = head.node;
    while let Some(id) = node {
        let n = trail.nodes[id as usize];
        hops.push(Hop { edge: n.edge, via: n.vertex });
        node = n.parent;
    }
    hops.reverse();
    Ok(TemporalWalk::from_hops(h, labels.source, head.departure, hops))
}
