use serde::Serialize;
use thd_core::gen::gen_small;
use thd_core::oracle::{differential_all, DifferentialReport};
use thd_core::{Tick, TimeVaryingHypergraph};

use super::{emit, load};
use crate::args::{Input, VerifyArgs};
use crate::failure::Failure;

// enumeration is exponential; beyond this a run may not finish
const ORACLE_WARN_VERTICES: usize = 12;
const SHOWN: usize = 10;

#[derive(Serialize)]
struct Report {
    networks: u64,
    labels_compared: usize,
    walks_checked: usize,
    mismatches: usize,
    witness_failures: usize,
    details: Vec<String>,
}

fn details_for(label: &str, h: &TimeVaryingHypergraph, r: &DifferentialReport) -> Vec<String> {
    let mismatches = r.mismatches.iter().map(|m| {
        format!(
            "{label}: {} from {} at {} to {}: oracle {:?}, computed {:?}",
            m.metric,
            h.vertex_name(m.source),
            m.t0,
            h.vertex_name(m.vertex),
            m.oracle,
            m.computed
        )
    });
    let witnesses = r.witness_failures.iter().map(|w| {
        format!(
            "{label}: {} witness from {} to {}: {}",
            w.metric,
            h.vertex_name(w.source),
            h.vertex_name(w.vertex),
            w.reason
        )
    });
    mismatches.chain(witnesses).take(SHOWN).collect()
}

pub fn run(args: &VerifyArgs, json: bool) -> Result<(), Failure> {
    let t0 = Tick(args.t0);
    let mut total = DifferentialReport::default();
    let mut details = Vec::new();
    let mut networks = 0u64;

    let mut check = |label: String, h: TimeVaryingHypergraph| {
        let r = differential_all(&h, t0);
        if details.len() < SHOWN {
            details.extend(details_for(&label, &h, &r));
            details.truncate(SHOWN);
        }
        total.absorb(r);
    };

    match &args.input {
        Some(path) => {
            let (_, h) = load(&Input { input: path.clone(), lenient: false })?;
            if h.vertex_count() > ORACLE_WARN_VERTICES {
                log::warn!("{} vertices: exhaustive enumeration may take very long", h.vertex_count());
            }
            check(path.display().to_string(), h);
            networks = 1;
        }
        None => {
            for i in 0..args.trials {
                let seed = args.seed.wrapping_add(i);
                check(format!("seed {seed}"), gen_small(seed));
                networks += 1;
                if (i + 1) % 100 == 0 {
                    log::info!("{} networks verified", i + 1);
                }
            }
        }
    }

    let report = Report {
        networks,
        labels_compared: total.labels_compared,
        walks_checked: total.walks_checked,
        mismatches: total.mismatches.len(),
        witness_failures: total.witness_failures.len(),
        details,
    };
    emit(json, &report, || {
        let mut text = format!(
            "{} networks, {} labels compared, {} witness walks checked: {} mismatches, {} witness failures",
            report.networks, report.labels_compared, report.walks_checked, report.mismatches, report.witness_failures
        );
        for d in &report.details {
            text.push_str("\n  ");
            text.push_str(d);
        }
        text
    })?;
    if total.is_clean() {
        Ok(())
    } else {
        Err(Failure::Invariant(format!(
            "{} mismatches and {} witness failures",
            report.mismatches, report.witness_failures
        )))
    }
}
