use serde::Serialize;
use thd_core::paths::{fastest_within, foremost_within, reconstruct_walk, shortest_within};
use thd_core::simulate::WitnessRecord;
use thd_core::{Metric, Tick};

use super::{emit, load};
use crate::args::QueryArgs;
use crate::failure::{invalid, usage, Failure};

#[derive(Serialize)]
struct Report<'a> {
    source: &'a str,
    target: &'a str,
    metric: Metric,
    t0: Tick,
    value: i64,
    walk: WitnessRecord,
}

pub fn run(args: &QueryArgs, json: bool) -> Result<(), Failure> {
    if args.max_hops == Some(0) {
        return Err(usage("--max-hops must be at least 1"));
    }
    if let (Some(t0), Some(limit)) = (args.t0, args.horizon) {
        if limit < t0 {
            return Err(usage(format!("--horizon {limit} precedes --t0 {t0}")));
        }
    }
    let (_, h) = load(&args.input)?;
    let source = h.vertex(&args.source).map_err(invalid)?;
    let target = h
        .vertex(&args.target)
        .map_err(|_| Failure::Unreached(format!("{:?} is not a vertex of this network", args.target)))?;
    let t0 = args.t0.map(Tick).unwrap_or_else(|| h.edge(h.incidence(source)[0]).start);
    let horizon = args.horizon.map(Tick);
    if horizon.is_some_and(|limit| limit < t0) {
        return Err(invalid(format!("horizon precedes the departure tick {t0}")));
    }

    let labels = match args.metric {
        Metric::Foremost => foremost_within(&h, source, t0, horizon),
        Metric::Shortest => {
            let hops = args.max_hops.unwrap_or(h.vertex_count());
            shortest_within(&h, source, t0, hops, horizon).map_err(invalid)?
        }
        Metric::Fastest => fastest_within(&h, source, t0, horizon),
    };
    let Some(value) = labels.get(target) else {
        return Err(Failure::Unreached(format!(
            "{:?} is not reached from {:?} departing at {t0}",
            args.target, args.source
        )));
    };
    let walk = reconstruct_walk(&h, &labels, target).map_err(|e| Failure::Invariant(e.to_string()))?;
    if let Err(e) = walk.validate(&h) {
        return Err(Failure::Invariant(format!("reconstructed walk is infeasible: {e}")));
    }
    let report = Report {
        source: &args.source,
        target: &args.target,
        metric: args.metric,
        t0,
        value,
        walk: WitnessRecord::from_walk(&h, &walk),
    };
    emit(json, &report, || {
        format!("{} {} -> {} from t0={t0}: {value}\n{}", args.metric, args.source, args.target, walk.display(&h))
    })
}
