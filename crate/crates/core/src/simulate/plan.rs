use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::SimError;
use crate::graph::{Tick, TimeVaryingHypergraph, VertexIdx};
use crate::paths::Metric;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceSelection {
    All,
    List { vertices: Vec<String> },
    /// `size` distinct vertices drawn uniformly with `seed`.
    Sample { size: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StartPolicy {
    Fixed { tick: Tick },
    /// Each source starts at the earliest start among its own edges.
    EarliestIncident,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationPlan {
    pub metrics: BTreeSet<Metric>,
    pub sources: SourceSelection,
    pub start: StartPolicy,
    /// Hop budget for the shortest metric; `None` is unbounded.
    pub max_hops: Option<usize>,
    /// Arrivals after this tick are not tracked.
    pub horizon: Option<Tick>,
    /// Keep a witness walk for every reached vertex.
    pub keep_witnesses: bool,
    pub parallelism: usize,
    /// Sources per checkpoint flush.
    pub checkpoint_every: usize,
}

impl Default for SimulationPlan {
    fn default() -> Self {
        Self {
            metrics: BTreeSet::from([Metric::Foremost]),
            sources: SourceSelection::All,
            start: StartPolicy::EarliestIncident,
            max_hops: None,
            horizon: None,
            keep_witnesses: false,
            parallelism: 1,
            checkpoint_every: 64,
        }
    }
}

/// The part of a plan that determines the output. Execution settings
/// (parallelism, checkpoint cadence) are excluded so that they never change
/// result bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanRecord {
    pub metrics: Vec<Metric>,
    pub sources: SourceSelection,
    pub t0: StartPolicy,
    pub max_hops: Option<usize>,
    pub horizon: Option<Tick>,
    pub keep_witnesses: bool,
}

/// A plan checked against a network: the planned sources in index order
/// with their departure ticks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedPlan {
    pub sources: Vec<(VertexIdx, Tick)>,
    pub max_hops: usize,
}

impl SimulationPlan {
    pub fn record(&self) -> PlanRecord {
        PlanRecord {
            metrics: self.metrics.iter().copied().collect(),
            sources: self.sources.clone(),
            t0: self.start,
            max_hops: self.max_hops,
            horizon: self.horizon,
            keep_witnesses: self.keep_witnesses,
        }
    }

    pub fn resolve(&self, h: &TimeVaryingHypergraph) -> Result<ResolvedPlan, SimError> {
        let invalid = |m: String| Err(SimError::PlanInvalid(m));
        if self.metrics.is_empty() {
            return invalid("no metric selected".into());
        }
        if self.parallelism == 0 {
            return invalid("parallelism must be at least 1".into());
        }
        if self.checkpoint_every == 0 {
            return invalid("checkpoint interval must be at least 1 source".into());
        }
        if self.max_hops == Some(0) {
            return invalid("max_hops must be at least 1".into());
        }
        let n = h.vertex_count();
        let mut sources: Vec<VertexIdx> = match &self.sources {
            SourceSelection::All => h.vertices().collect(),
            SourceSelection::List { vertices } => {
                let mut seen = BTreeSet::new();
                let mut out = Vec::with_capacity(vertices.len());
                for name in vertices {
                    let Ok(v) = h.vertex(name) else {
                        return invalid(format!("unknown source vertex {name:?}"));
                    };
                    if !seen.insert(v) {
                        return invalid(format!("source {name:?} listed twice"));
                    }
                    out.push(v);
                }
                out
            }
            SourceSelection::Sample { size, seed } => {
                if *size > n {
                    return invalid(format!("sample of {size} exceeds {n} vertices"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rand::seq::index::sample(&mut rng, n, *size).into_iter().map(|i| VertexIdx(i as u32)).collect()
            }
        };
        sources.sort_unstable();

        let mut planned = Vec::with_capacity(sources.len());
        for v in sources {
            let t0 = match self.start {
                StartPolicy::Fixed { tick } => tick,
                // every vertex has an edge; incidence is start-sorted
                StartPolicy::EarliestIncident => h.edge(h.incidence(v)[0]).start,
            };
            if let Some(limit) = self.horizon {
                if limit < t0 {
                    return invalid(format!(
                        "horizon {limit} precedes start {t0} of source {:?}",
                        h.vertex_name(v)
                    ));
                }
            }
            planned.push((v, t0));
        }
        Ok(ResolvedPlan { sources: planned, max_hops: self.max_hops.unwrap_or(n.max(1)) })
    }
}
