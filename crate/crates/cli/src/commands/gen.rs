use std::io::{self, Write};

use serde::Serialize;
use thd_core::gen::{gen_records, gen_structured, GenParams, Shape, TimePattern};
use thd_core::io::{write_network, NetworkDocument};
use thd_core::TimeVaryingHypergraph;

use super::{emit, write_atomically};
use crate::args::{GenArgs, ShapeArg};
use crate::failure::{invalid, usage, Failure};

#[derive(Serialize)]
struct Report {
    output: String,
    name: String,
    vertices: usize,
    edges: usize,
}

fn time_pattern(s: &str) -> Result<TimePattern, Failure> {
    match s {
        "ascending" => Ok(TimePattern::Ascending),
        "descending" => Ok(TimePattern::Descending),
        tick => tick
            .parse()
            .map(TimePattern::Constant)
            .map_err(|_| usage(format!("--times {tick:?}: expected ascending, descending or a tick"))),
    }
}

fn document(args: &GenArgs) -> Result<NetworkDocument, Failure> {
    let (records, default_name) = match args.shape {
        ShapeArg::Random => {
            let mut p = GenParams::new(args.vertices, args.edges, args.seed);
            p.min_participants = args.min_participants.unwrap_or(p.min_participants);
            p.max_participants = args.max_participants.unwrap_or(p.max_participants);
            p.skew = args.skew.unwrap_or(p.skew);
            p.span = args.span.unwrap_or(p.span);
            p.min_interval = args.min_interval.unwrap_or(p.min_interval);
            p.max_interval = args.max_interval.unwrap_or(p.max_interval);
            let records = gen_records(&p).map_err(usage)?;
            (records, format!("random-v{}-e{}-s{}", p.vertices, p.edges, p.seed))
        }
        structured => {
            let shape = match structured {
                ShapeArg::Chain => Shape::Chain,
                ShapeArg::Star => Shape::Star,
                _ => Shape::Clique,
            };
            let h = gen_structured(shape, args.size, time_pattern(&args.times)?).map_err(usage)?;
            (h.to_records(), format!("{:?}-{}-{}", shape, args.size, args.times).to_lowercase())
        }
    };
    Ok(NetworkDocument { name: args.name.clone().unwrap_or(default_name), time_unit: None, edges: records })
}

pub fn run(args: &GenArgs, json: bool) -> Result<(), Failure> {
    let doc = document(args)?;
    let Some(path) = &args.output else {
        return write_network(&doc, io::stdout().lock()).map_err(|e| invalid(format!("stdout: {e}")));
    };
    write_atomically(path, |w: &mut dyn Write| write_network(&doc, w))?;
    let stats = TimeVaryingHypergraph::build(doc.edges).map_err(|e| Failure::Invariant(e.to_string()))?.stats();
    let report = Report { output: path.display().to_string(), name: doc.name, vertices: stats.vertices, edges: stats.edges };
    emit(json, &report, || format!("{}: {stats} written to {}", report.name, report.output))
}
