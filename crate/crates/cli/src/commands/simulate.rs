use std::collections::BTreeMap;

use serde::Serialize;
use thd_core::io::write_results;
use thd_core::simulate::{run_with, Quantiles, RunOptions, SimError, SourceSelection, StartPolicy};
use thd_core::{Metric, SimulationPlan, Tick};

use super::{emit, load, write_atomically};
use crate::args::SimulateArgs;
use crate::failure::{invalid, usage, Failure};

#[derive(Serialize)]
struct Report {
    output: Option<String>,
    computed: usize,
    resumed: usize,
    sources: Option<usize>,
    quantiles: BTreeMap<Metric, Option<Quantiles>>,
}

fn plan(args: &SimulateArgs) -> Result<SimulationPlan, Failure> {
    let parallelism = match args.parallelism {
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    if parallelism == 0 {
        return Err(usage("parallelism must be at least 1"));
    }
    if args.checkpoint_every == 0 {
        return Err(usage("--checkpoint-every must be at least 1"));
    }
    if args.max_hops == Some(0) {
        return Err(usage("--max-hops must be at least 1"));
    }
    if let (Some(t0), Some(limit)) = (args.t0, args.horizon) {
        if limit < t0 {
            return Err(usage(format!("--horizon {limit} precedes --t0 {t0}")));
        }
    }
    let sources = match (&args.sources, args.sample) {
        (Some(list), _) => SourceSelection::List { vertices: list.clone() },
        (None, Some(size)) => SourceSelection::Sample { size, seed: args.seed },
        (None, None) => SourceSelection::All,
    };
    Ok(SimulationPlan {
        metrics: args.metrics.iter().copied().collect(),
        sources,
        start: args.t0.map_or(StartPolicy::EarliestIncident, |t| StartPolicy::Fixed { tick: Tick(t) }),
        max_hops: args.max_hops,
        horizon: args.horizon.map(Tick),
        keep_witnesses: args.keep_witnesses,
        parallelism,
        checkpoint_every: args.checkpoint_every,
    })
}

pub fn run(args: &SimulateArgs, json: bool) -> Result<(), Failure> {
    let plan = plan(args)?;
    let (_, h) = load(&args.input)?;
    let opts = RunOptions { checkpoint: args.checkpoint.clone(), halt_after: args.halt_after };
    let report = run_with(&h, &plan, &opts).map_err(|e| match e {
        SimError::ThreadPool(m) => Failure::Invariant(m),
        other => invalid(other),
    })?;

    let Some(result) = report.result else {
        let at = args.checkpoint.as_ref().map_or("nowhere".into(), |p| p.display().to_string());
        let summary =
            Report { output: None, computed: report.computed, resumed: report.resumed, sources: None, quantiles: BTreeMap::new() };
        return emit(json, &summary, || format!("halted after {} sources; progress saved to {at}", report.computed));
    };
    write_atomically(&args.output, |w| write_results(&result, args.format, w))?;

    let summary = Report {
        output: Some(args.output.display().to_string()),
        computed: report.computed,
        resumed: report.resumed,
        sources: Some(result.sources.len()),
        quantiles: result.summary.iter().map(|(m, s)| (*m, s.quantiles)).collect(),
    };
    emit(json, &summary, || {
        let mut text = format!(
            "{} sources ({} resumed from checkpoint) written to {}",
            result.sources.len(),
            report.resumed,
            args.output.display()
        );
        for (m, s) in &result.summary {
            match s.quantiles {
                Some(q) => text.push_str(&format!("\n{m}: {} labels, p50 {} p90 {} p99 {}", s.values, q.p50, q.p90, q.p99)),
                None => text.push_str(&format!("\n{m}: no labels")),
            }
        }
        text
    })
}
