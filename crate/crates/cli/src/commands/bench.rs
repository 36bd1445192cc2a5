use std::time::Instant;

use serde::Serialize;
use thd_core::gen::{gen_records, GenParams};
use thd_core::io::{read_network, write_network, IngestMode, NetworkDocument};
use thd_core::paths::{fastest_within, foremost_within, shortest_within};
use thd_core::simulate::SourceSelection;
use thd_core::{Metric, SimulationPlan, TimeVaryingHypergraph};

use super::emit;
use crate::args::BenchArgs;
use crate::failure::{invalid, usage, Failure};

#[derive(Serialize)]
struct Report {
    vertices: usize,
    edges: usize,
    metric: Metric,
    sources: usize,
    generate_seconds: f64,
    ingest_seconds: f64,
    document_bytes: usize,
    build_seconds: f64,
    query_seconds: f64,
    sources_per_second: f64,
    mean_reached: f64,
    /// resident-set high-water mark, when the platform reports it
    peak_memory_bytes: Option<u64>,
}

fn peak_memory_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kib: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kib * 1024)
}

pub fn run(args: &BenchArgs, json: bool) -> Result<(), Failure> {
    let params = GenParams::new(args.vertices, args.edges, args.seed);
    params.validate().map_err(usage)?;
    if args.sources > args.vertices {
        return Err(usage(format!("--sources {} exceeds --vertices {}", args.sources, args.vertices)));
    }

    let clock = Instant::now();
    let records = gen_records(&params).map_err(usage)?;
    let generate_seconds = clock.elapsed().as_secs_f64();

    // Round-trip through the document format so ingest is measured too.
    let doc = NetworkDocument { name: "bench".into(), time_unit: None, edges: records };
    let mut bytes = Vec::new();
    write_network(&doc, &mut bytes).map_err(invalid)?;
    drop(doc);
    let clock = Instant::now();
    let outcome = read_network(bytes.as_slice(), IngestMode::Strict).map_err(invalid)?;
    let ingest_seconds = clock.elapsed().as_secs_f64();
    let document_bytes = bytes.len();
    drop(bytes);

    let clock = Instant::now();
    let h = TimeVaryingHypergraph::build(outcome.document.edges).map_err(invalid)?;
    let build_seconds = clock.elapsed().as_secs_f64();
    log::info!("built {}", h.stats());

    let plan = SimulationPlan {
        sources: SourceSelection::Sample { size: args.sources, seed: args.seed },
        ..Default::default()
    };
    let resolved = plan.resolve(&h).map_err(invalid)?;
    let clock = Instant::now();
    let mut reached = 0usize;
    for &(source, t0) in &resolved.sources {
        let labels = match args.metric {
            Metric::Foremost => foremost_within(&h, source, t0, None),
            Metric::Shortest => shortest_within(&h, source, t0, resolved.max_hops, None).map_err(invalid)?,
            Metric::Fastest => fastest_within(&h, source, t0, None),
        };
        reached += labels.reached_count();
    }
    let query_seconds = clock.elapsed().as_secs_f64();
    let n = resolved.sources.len();

    let report = Report {
        vertices: h.vertex_count(),
        edges: h.edge_count(),
        metric: args.metric,
        sources: n,
        generate_seconds,
        ingest_seconds,
        document_bytes,
        build_seconds,
        query_seconds,
        sources_per_second: if query_seconds > 0.0 { n as f64 / query_seconds } else { f64::INFINITY },
        mean_reached: if n == 0 { 0.0 } else { reached as f64 / n as f64 },
        peak_memory_bytes: peak_memory_bytes(),
    };
    emit(json, &report, || {
        let peak = report
            .peak_memory_bytes
            .map_or("unavailable".into(), |b| format!("{:.1} MiB", b as f64 / (1024.0 * 1024.0)));
        format!(
            "{} vertices, {} edges\n\
             generate {:.3} s, ingest {:.3} s ({} bytes), build {:.3} s\n\
             {} {} sources in {:.3} s ({:.1} sources/s), mean reached {:.1}\n\
             peak memory {peak}",
            report.vertices,
            report.edges,
            report.generate_seconds,
            report.ingest_seconds,
            report.document_bytes,
            report.build_seconds,
            report.sources,
            report.metric,
            report.query_seconds,
            report.sources_per_second,
            report.mean_reached,
        )
    })
}
