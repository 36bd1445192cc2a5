//! Shared inputs for the criterion benchmarks.

use thd_core::gen::{gen_records, GenParams};
use thd_core::io::{write_network, NetworkDocument};
use thd_core::{TemporalHyperedge, Tick, TimeVaryingHypergraph};

/// Network sizes exercised by every benchmark group, as (vertices, edges).
pub const SIZES: [(usize, usize); 3] = [(500, 2_000), (2_000, 10_000), (8_000, 50_000)];

pub fn records(vertices: usize, edges: usize) -> Vec<TemporalHyperedge> {
    gen_records(&GenParams::new(vertices, edges, 0xbe7c)).expect("benchmark parameters are valid")
}

pub fn network(vertices: usize, edges: usize) -> TimeVaryingHypergraph {
    TimeVaryingHypergraph::build(records(vertices, edges)).expect("generated records build")
}

pub fn document_bytes(vertices: usize, edges: usize) -> Vec<u8> {
    let doc = NetworkDocument { name: "bench".into(), time_unit: None, edges: records(vertices, edges) };
    let mut out = Vec::new();
    write_network(&doc, &mut out).expect("writing to memory succeeds");
    out
}

/// A few source names spread across the vertex table, each with the start of
/// its earliest incident edge as departure.
pub fn sources(h: &TimeVaryingHypergraph, count: usize) -> Vec<(String, Tick)> {
    let step = (h.vertex_count() / count.max(1)).max(1);
    h.vertices()
        .step_by(step)
        .take(count)
        .map(|v| {
            let t0 = h.incidence(v).first().map_or(Tick(0), |&e| h.edge(e).start);
            (h.vertex_name(v).to_owned(), t0)
        })
        .collect()
}
