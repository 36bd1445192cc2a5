//! All-sources diffusion runs.
//!
//! Sources are independent, so they are computed in parallel chunks on a
//! dedicated thread pool. Results are merged by source name, which makes the
//! output independent of the thread count and of how often the run was
//! interrupted and resumed.

mod checkpoint;
mod plan;
mod result;

use std::collections::BTreeMap;
use std::path::PathBuf;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Tick, TimeVaryingHypergraph, VertexIdx};
use crate::io::{network_digest, sha256_hex, to_canonical_vec};
use crate::paths::{fastest_within, foremost_within, shortest_within, Metric};

pub use checkpoint::{checkpoint_load, checkpoint_write, Checkpoint, CheckpointHeader, CheckpointWriter};
pub use plan::{PlanRecord, ResolvedPlan, SimulationPlan, SourceSelection, StartPolicy};
pub use result::{
    aggregate, nearest_rank, DiffusionResult, MetricLabels, MetricSummary, Provenance, Quantiles, Reach,
    SourceRecord, WitnessHop, WitnessRecord, RESULT_SCHEMA,
};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid plan: {0}")]
    PlanInvalid(String),
    #[error("checkpoint does not match this run: {0}")]
    CheckpointMismatch(String),
    #[error("corrupt checkpoint {0}")]
    CorruptCheckpoint(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Resume from and periodically save progress to this file.
    pub checkpoint: Option<PathBuf>,
    /// Stop after computing this many sources (checkpoint written first).
    pub halt_after: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    /// `None` when the run halted before finishing.
    pub result: Option<DiffusionResult>,
    pub computed: usize,
    pub resumed: usize,
}

pub fn plan_digest(plan: &SimulationPlan) -> String {
    sha256_hex(&to_canonical_vec(&plan.record()))
}

/// Labels of every planned metric for one source.
pub fn compute_source(
    h: &TimeVaryingHypergraph,
    plan: &SimulationPlan,
    max_hops: usize,
    source: VertexIdx,
    t0: Tick,
) -> SourceRecord {
    let metrics = plan
        .metrics
        .iter()
        .map(|&m| {
            let labels = match m {
                Metric::Foremost => foremost_within(h, source, t0, plan.horizon),
                Metric::Shortest => shortest_within(h, source, t0, max_hops, plan.horizon)
                    .expect("max_hops validated by plan"),
                Metric::Fastest => fastest_within(h, source, t0, plan.horizon),
            };
            (m, MetricLabels::from_labels(h, &labels, plan.keep_witnesses))
        })
        .collect();
    SourceRecord { t0, metrics }
}

fn assemble(
    h: &TimeVaryingHypergraph,
    plan: &SimulationPlan,
    input_digest: String,
    sources: BTreeMap<String, SourceRecord>,
) -> DiffusionResult {
    let record = plan.record();
    let summary = aggregate(h.vertex_count(), &record.metrics, &sources);
    DiffusionResult {
        schema: RESULT_SCHEMA,
        provenance: Provenance { input_digest, plan: record, tool_version: env!("CARGO_PKG_VERSION").into() },
        vertex_count: h.vertex_count(),
        sources,
        summary,
    }
}

pub fn run(h: &TimeVaryingHypergraph, plan: &SimulationPlan) -> Result<DiffusionResult, SimError> {
    let report = run_with(h, plan, &RunOptions::default())?;
    Ok(report.result.expect("runs without a halt point complete"))
}

pub fn run_with(h: &TimeVaryingHypergraph, plan: &SimulationPlan, opts: &RunOptions) -> Result<RunReport, SimError> {
    let resolved = plan.resolve(h)?;
    let input_digest = network_digest(h);
    let header = CheckpointHeader::new(input_digest.clone(), plan_digest(plan));

    let mut completed = BTreeMap::new();
    let mut writer = None;
    if let Some(path) = opts.checkpoint.as_deref().filter(|p| p.exists()) {
        let mut cp = checkpoint_load(path)?;
        if cp.header.input_digest != header.input_digest {
            return Err(SimError::CheckpointMismatch(format!("{} was written for a different network", path.display())));
        }
        if cp.header.plan_digest != header.plan_digest {
            return Err(SimError::CheckpointMismatch(format!("{} was written for a different plan", path.display())));
        }
        let planned: std::collections::BTreeSet<&str> =
            resolved.sources.iter().map(|(v, _)| h.vertex_name(*v)).collect();
        if let Some(stray) = cp.completed.keys().find(|s| !planned.contains(s.as_str())) {
            return Err(SimError::CheckpointMismatch(format!("source {stray:?} is not planned")));
        }
        writer = Some(CheckpointWriter::resume(path, &cp)?);
        completed = std::mem::take(&mut cp.completed);
    }
    if let (Some(path), None) = (&opts.checkpoint, &writer) {
        writer = Some(CheckpointWriter::create(path, &header)?);
    }
    let resumed = completed.len();
    let pending: Vec<(VertexIdx, Tick)> = resolved
        .sources
        .iter()
        .copied()
        .filter(|(v, _)| !completed.contains_key(h.vertex_name(*v)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.parallelism)
        .build()
        .map_err(|e| SimError::ThreadPool(e.to_string()))?;

    let total = resolved.sources.len();
    let budget = opts.halt_after.unwrap_or(usize::MAX);
    let mut computed = 0;
    let mut rest = pending.as_slice();
    while !rest.is_empty() && computed < budget {
        let take = plan.checkpoint_every.min(rest.len()).min(budget - computed);
        let (chunk, tail) = rest.split_at(take);
        rest = tail;
        let records: Vec<SourceRecord> = pool.install(|| {
            chunk.par_iter().map(|&(v, t0)| compute_source(h, plan, resolved.max_hops, v, t0)).collect()
        });
        if let Some(w) = &mut writer {
            w.append(chunk.iter().zip(&records).map(|(&(v, _), rec)| (h.vertex_name(v), rec)))?;
        }
        for (&(v, _), rec) in chunk.iter().zip(records) {
            completed.insert(h.vertex_name(v).to_owned(), rec);
        }
        computed += chunk.len();
        log::info!("{}/{} sources done", completed.len(), total);
    }

    let result = rest.is_empty().then(|| assemble(h, plan, input_digest, completed));
    Ok(RunReport { result, computed, resumed })
}
