use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::plan::PlanRecord;
use crate::graph::{Tick, TimeVaryingHypergraph};
use crate::paths::{reconstruct_walk, DistanceLabels, Metric, TemporalWalk};

pub const RESULT_SCHEMA: u32 = 1;

/// All-sources diffusion output. Everything is keyed by vertex name so the
/// document stands on its own without the input network.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffusionResult {
    pub schema: u32,
    pub provenance: Provenance,
    pub vertex_count: usize,
    pub sources: BTreeMap<String, SourceRecord>,
    pub summary: BTreeMap<Metric, MetricSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// see [`crate::io::network_digest`]
    pub input_digest: String,
    pub plan: PlanRecord,
    pub tool_version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceRecord {
    pub t0: Tick,
    pub metrics: BTreeMap<Metric, MetricLabels>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetricLabels {
    pub values: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<BTreeMap<String, WitnessRecord>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub departure: Tick,
    pub hops: Vec<WitnessHop>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessHop {
    pub edge: String,
    pub via: String,
    pub arrival: Tick,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub per_source: BTreeMap<String, Reach>,
    /// number of label values across all sources
    pub values: usize,
    /// absent when there are no values
    pub quantiles: Option<Quantiles>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Reach {
    pub reached: usize,
    /// reached / vertex count
    pub ratio: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quantiles {
    pub p50: i64,
    pub p90: i64,
    pub p99: i64,
}

impl WitnessRecord {
    pub fn from_walk(h: &TimeVaryingHypergraph, walk: &TemporalWalk) -> Self {
        let hops = walk
            .hops
            .iter()
            .zip(&walk.arrivals)
            .map(|(hop, &arrival)| WitnessHop {
                edge: h.edge(hop.edge).id.clone(),
                via: h.vertex_name(hop.via).to_owned(),
                arrival,
            })
            .collect();
        Self { departure: walk.departure, hops }
    }
}

impl MetricLabels {
    pub fn from_labels(h: &TimeVaryingHypergraph, labels: &DistanceLabels, keep_witnesses: bool) -> Self {
        let values = labels.values().iter().map(|(v, x)| (h.vertex_name(*v).to_owned(), *x)).collect();
        let witnesses = keep_witnesses.then(|| {
            labels
                .values()
                .keys()
                .map(|&v| {
                    let walk = reconstruct_walk(h, labels, v).expect("labels computed with a trail");
                    (h.vertex_name(v).to_owned(), WitnessRecord::from_walk(h, &walk))
                })
                .collect()
        });
        Self { values, witnesses }
    }
}

/// Nearest-rank percentile of an ascending slice: the value at 1-based rank
/// `⌈p·n/100⌉`.
pub fn nearest_rank(sorted: &[i64], p: u32) -> Option<i64> {
    if sorted.is_empty() {
        return None;
    }
    let n = sorted.len();
    let rank = (p as usize * n).div_ceil(100).max(1);
    Some(sorted[rank - 1])
}

/// Network-level statistics, a pure function of the per-source labels.
pub fn aggregate(
    vertex_count: usize,
    metrics: &[Metric],
    sources: &BTreeMap<String, SourceRecord>,
) -> BTreeMap<Metric, MetricSummary> {
    metrics
        .iter()
        .map(|&m| {
            let mut all = Vec::new();
            let mut per_source = BTreeMap::new();
            for (name, rec) in sources {
                let Some(labels) = rec.metrics.get(&m) else { continue };
                all.extend(labels.values.values().copied());
                let reached = labels.values.len();
                per_source.insert(name.clone(), Reach { reached, ratio: reached as f64 / vertex_count as f64 });
            }
            all.sort_unstable();
            let quantiles = (!all.is_empty()).then(|| Quantiles {
                p50: nearest_rank(&all, 50).unwrap(),
                p90: nearest_rank(&all, 90).unwrap(),
                p99: nearest_rank(&all, 99).unwrap(),
            });
            (m, MetricSummary { per_source, values: all.len(), quantiles })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_rank_by_hand() {
        assert_eq!(nearest_rank(&[], 50), None);
        assert_eq!(nearest_rank(&[7], 99), Some(7));
        let v: Vec<i64> = (1..=10).collect();
        assert_eq!(nearest_rank(&v, 50), Some(5));
        assert_eq!(nearest_rank(&v, 90), Some(9));
        assert_eq!(nearest_rank(&v, 99), Some(10));
        let v: Vec<i64> = (1..=200).collect();
        assert_eq!(nearest_rank(&v, 99), Some(198));
    }

    #[test]
    fn lonely_source_ratio() {
        let rec = SourceRecord {
            t0: Tick(0),
            metrics: BTreeMap::from([(
                Metric::Foremost,
                MetricLabels { values: BTreeMap::from([("a".to_string(), 0)]), witnesses: None },
            )]),
        };
        let s = aggregate(4, &[Metric::Foremost], &BTreeMap::from([("a".to_string(), rec)]));
        let m = &s[&Metric::Foremost];
        assert_eq!(m.per_source["a"], Reach { reached: 1, ratio: 0.25 });
        assert_eq!(m.quantiles, Some(Quantiles { p50: 0, p90: 0, p99: 0 }));
    }

    #[test]
    fn empty_sources() {
        let s = aggregate(4, &[Metric::Foremost], &BTreeMap::new());
        assert_eq!(s[&Metric::Foremost].values, 0);
        assert_eq!(s[&Metric::Foremost].quantiles, None);
    }
}
