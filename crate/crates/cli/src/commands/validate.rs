use serde::Serialize;
use thd_core::io::{SkippedRecord, TimeEncoding};
use thd_core::NetworkStats;

use super::{emit, load};
use crate::args::ValidateArgs;
use crate::failure::Failure;

#[derive(Serialize)]
struct Report {
    name: String,
    encoding: Option<&'static str>,
    stats: NetworkStats,
    skipped: Vec<Skipped>,
}

#[derive(Serialize)]
struct Skipped {
    index: usize,
    reason: String,
}

pub fn run(args: &ValidateArgs, json: bool) -> Result<(), Failure> {
    let (outcome, h) = load(&args.input)?;
    let report = Report {
        name: outcome.document.name,
        encoding: outcome.encoding.map(|e| match e {
            TimeEncoding::Ticks => "ticks",
            TimeEncoding::Calendar => "calendar",
        }),
        stats: h.stats(),
        skipped: outcome.skipped.into_iter().map(|SkippedRecord { index, reason }| Skipped { index, reason }).collect(),
    };
    emit(json, &report, || {
        let mut text = report.stats.to_string();
        for s in &report.skipped {
            text.push_str(&format!("\nskipped record {}: {}", s.index, s.reason));
        }
        text
    })
}
