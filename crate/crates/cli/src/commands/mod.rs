mod bench;
mod gen;
mod query;
mod simulate;
mod validate;
mod verify;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use thd_core::io::{read_network, write_canonical, IngestMode, ReadOutcome};
use thd_core::TimeVaryingHypergraph;

use crate::args::{Cli, Command, Input};
use crate::failure::{invalid, Failure};

pub fn dispatch(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Validate(a) => validate::run(a, cli.json),
        Command::Query(a) => query::run(a, cli.json),
        Command::Simulate(a) => simulate::run(a, cli.json),
        Command::Gen(a) => gen::run(a, cli.json),
        Command::Verify(a) => verify::run(a, cli.json),
        Command::Bench(a) => bench::run(a, cli.json),
    }
}

/// Prints `report` as canonical JSON, or `text` otherwise.
fn emit<T: Serialize>(json: bool, report: &T, text: impl FnOnce() -> String) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    if json {
        write_canonical(report, &mut out)
    } else {
        writeln!(out, "{}", text())
    }
    .map_err(|e| invalid(format!("writing report: {e}")))
}

fn read_document(path: &Path, mode: IngestMode) -> Result<ReadOutcome, Failure> {
    let outcome = if path == Path::new("-") {
        read_network(io::stdin().lock(), mode)
    } else {
        let file = File::open(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        read_network(file, mode)
    };
    outcome.map_err(|e| invalid(format!("{}: {e}", path.display())))
}

/// Reads and builds a network, logging skipped records in lenient mode.
fn load(input: &Input) -> Result<(ReadOutcome, TimeVaryingHypergraph), Failure> {
    let mode = if input.lenient { IngestMode::Lenient } else { IngestMode::Strict };
    let mut outcome = read_document(&input.input, mode)?;
    for s in &outcome.skipped {
        log::warn!("skipped record {}: {}", s.index, s.reason);
    }
    let records = std::mem::take(&mut outcome.document.edges);
    let h = TimeVaryingHypergraph::build(records).map_err(|e| invalid(format!("{}: {e}", input.input.display())))?;
    log::info!("loaded {}", h.stats());
    Ok((outcome, h))
}

/// Writes a file through a sibling temporary so readers never see a
/// partial artifact.
fn write_atomically(path: &Path, fill: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), Failure> {
    let fail = |e: io::Error| invalid(format!("{}: {e}", path.display()));
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let mut w = BufWriter::new(File::create(&tmp).map_err(fail)?);
    fill(&mut w).map_err(fail)?;
    w.into_inner().map_err(|e| fail(e.into_error()))?.sync_all().map_err(fail)?;
    fs::rename(&tmp, path).map_err(fail)
}

