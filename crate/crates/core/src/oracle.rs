//! Exhaustive reference for the path algorithms.
//!
//! Enumerates every feasible walk up to a hop budget and folds them into
//! per-vertex minima. Exponential; meant for networks of a dozen edges.

use std::collections::BTreeMap;

use crate::graph::{EdgeIdx, Tick, TimeVaryingHypergraph, VertexIdx};
use crate::paths::{self, Hop, Metric, PathError, TemporalWalk};

struct Frame {
    vertex: VertexIdx,
    time: Tick,
    next: usize,
    // latest start and earliest end among the walk's edges so far
    latest_start: Tick,
    earliest_end: Tick,
}

/// Depth-first cursor over feasible walks. The empty walk comes first;
/// children are ordered by edge id, then by the vertex entered. Hops that
/// re-enter the vertex just entered are skipped. Uses an explicit stack and
/// no memoization.
struct Cursor<'h> {
    h: &'h TimeVaryingHypergraph,
    source: VertexIdx,
    t0: Tick,
    max_hops: usize,
    // per vertex: every (edge, other participant) in child order
    children: Vec<Vec<(EdgeIdx, VertexIdx)>>,
    stack: Vec<Frame>,
    hops: Vec<Hop>,
    arrivals: Vec<Tick>,
    started: bool,
}

impl<'h> Cursor<'h> {
    fn new(h: &'h TimeVaryingHypergraph, source: VertexIdx, t0: Tick, max_hops: usize) -> Self {
        let children = h
            .vertices()
            .map(|at| {
                let mut edges = h.incidence(at).to_vec();
                edges.sort_by_key(|&e| h.edge_rank(e));
                edges
                    .into_iter()
                    .flat_map(|e| h.edge(e).participants.iter().filter(move |&&v| v != at).map(move |&v| (e, v)))
                    .collect()
            })
            .collect();
        Self {
            h,
            source,
            t0,
            max_hops,
            children,
            stack: Vec::new(),
            hops: Vec::new(),
            arrivals: Vec::new(),
            started: false,
        }
    }

    /// Moves to the next walk; false once all walks were visited.
    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            self.stack.push(Frame {
                vertex: self.source,
                time: self.t0,
                next: 0,
                latest_start: Tick::MIN,
                earliest_end: Tick::MAX,
            });
            return true;
        }
        loop {
            let depth = self.hops.len();
            let Some(top) = self.stack.last_mut() else { return false };
            let options = &self.children[top.vertex.index()];
            let mut pick = None;
            if depth < self.max_hops {
                while top.next < options.len() {
                    let (e, v) = options[top.next];
                    top.next += 1;
                    if self.h.edge(e).end >= top.time {
                        pick = Some((e, v));
                        break;
                    }
                }
            }
            let Some((edge, via)) = pick else {
                self.stack.pop();
                self.hops.pop();
                self.arrivals.pop();
                continue;
            };
            let e = self.h.edge(edge);
            let next = Frame {
                vertex: via,
                time: top.time.max(e.start),
                next: 0,
                latest_start: top.latest_start.max(e.start),
                earliest_end: top.earliest_end.min(e.end),
            };
            self.hops.push(Hop { edge, via });
            self.arrivals.push(next.time);
            self.stack.push(next);
            return true;
        }
    }

    /// Departure `τ ≥ t0` minimizing the current walk's duration.
    ///
    /// Departing at `τ` the walk arrives at `max(τ, M)`, `M` being its latest
    /// edge start, and stays feasible while `τ ≤ U`, its earliest edge end
    /// (it is feasible at `t0`). The duration `max(0, M − τ)` is smallest at
    /// `τ = clamp(M, t0, U)`.
    fn best_departure(&self) -> Tick {
        let top = self.stack.last().expect("cursor positioned on a walk");
        if self.hops.is_empty() {
            self.t0
        } else {
            top.latest_start.max(self.t0).min(top.earliest_end)
        }
    }

    fn target(&self) -> VertexIdx {
        self.hops.last().map_or(self.source, |h| h.via)
    }

    fn walk(&self) -> TemporalWalk {
        TemporalWalk { source: self.source, departure: self.t0, hops: self.hops.clone(), arrivals: self.arrivals.clone() }
    }
}

/// Stream of feasible walks in depth-first order.
pub struct WalkEnumerator<'h>(Cursor<'h>);

impl Iterator for WalkEnumerator<'_> {
    type Item = TemporalWalk;

    fn next(&mut self) -> Option<TemporalWalk> {
        self.0.advance().then(|| self.0.walk())
    }
}

/// Every feasible walk from `(source, t0)` with at most `max_hops` hops.
pub fn enumerate_walks<'h>(
    h: &'h TimeVaryingHypergraph,
    source: &str,
    t0: Tick,
    max_hops: usize,
) -> Result<WalkEnumerator<'h>, PathError> {
    let source = h.vertex(source)?;
    Ok(enumerate_walks_from(h, source, t0, max_hops))
}

pub fn enumerate_walks_from(
    h: &TimeVaryingHypergraph,
    source: VertexIdx,
    t0: Tick,
    max_hops: usize,
) -> WalkEnumerator<'_> {
    WalkEnumerator(Cursor::new(h, source, t0, max_hops))
}

/// Best values of one vertex, each with the first walk (in enumeration
/// order) that attains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleEntry {
    pub foremost: Tick,
    pub foremost_witness: TemporalWalk,
    pub hops: usize,
    pub hops_witness: TemporalWalk,
    pub duration: i64,
    /// departs at the duration-minimizing time, not necessarily `t0`
    pub fastest_witness: TemporalWalk,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub source: VertexIdx,
    pub t0: Tick,
    pub entries: BTreeMap<VertexIdx, OracleEntry>,
}

impl OracleResult {
    pub fn values(&self, metric: Metric) -> BTreeMap<VertexIdx, i64> {
        self.entries
            .iter()
            .map(|(&v, e)| {
                let x = match metric {
                    Metric::Foremost => e.foremost.get(),
                    Metric::Shortest => e.hops as i64,
                    Metric::Fastest => e.duration,
                };
                (v, x)
            })
            .collect()
    }

    pub fn witness(&self, v: VertexIdx, metric: Metric) -> Option<&TemporalWalk> {
        self.entries.get(&v).map(|e| match metric {
            Metric::Foremost => &e.foremost_witness,
            Metric::Shortest => &e.hops_witness,
            Metric::Fastest => &e.fastest_witness,
        })
    }
}

pub fn oracle_distances(
    h: &TimeVaryingHypergraph,
    source: &str,
    t0: Tick,
    max_hops: usize,
) -> Result<OracleResult, PathError> {
    let source = h.vertex(source)?;
    Ok(oracle_distances_from(h, source, t0, max_hops))
}

pub fn oracle_distances_from(
    h: &TimeVaryingHypergraph,
    source: VertexIdx,
    t0: Tick,
    max_hops: usize,
) -> OracleResult {
    let mut entries: BTreeMap<VertexIdx, OracleEntry> = BTreeMap::new();
    let mut cursor = Cursor::new(h, source, t0, max_hops);
    while cursor.advance() {
        let target = cursor.target();
        let arrival = cursor.arrivals.last().copied().unwrap_or(t0);
        let hops = cursor.hops.len();
        let tau = cursor.best_departure();
        let duration = arrival.max(tau).since(tau);
        let fast = || TemporalWalk::from_hops(h, source, tau, cursor.hops.clone());
        match entries.get_mut(&target) {
            None => {
                let walk = cursor.walk();
                entries.insert(
                    target,
                    OracleEntry {
                        foremost: arrival,
                        foremost_witness: walk.clone(),
                        hops,
                        hops_witness: walk,
                        duration,
                        fastest_witness: fast(),
                    },
                );
            }
            Some(e) => {
                if arrival < e.foremost {
                    e.foremost = arrival;
                    e.foremost_witness = cursor.walk();
                }
                if hops < e.hops {
                    e.hops = hops;
                    e.hops_witness = cursor.walk();
                }
                if duration < e.duration {
                    e.duration = duration;
                    e.fastest_witness = fast();
                }
            }
        }
    }
    OracleResult { source, t0, entries }
}

/// A label on which the path algorithms and the oracle disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub source: VertexIdx,
    pub t0: Tick,
    pub metric: Metric,
    pub vertex: VertexIdx,
    pub oracle: Option<i64>,
    pub computed: Option<i64>,
}

/// A reconstructed walk that is infeasible or misses its label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessFailure {
    pub source: VertexIdx,
    pub metric: Metric,
    pub vertex: VertexIdx,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DifferentialReport {
    pub labels_compared: usize,
    pub walks_checked: usize,
    pub mismatches: Vec<Mismatch>,
    pub witness_failures: Vec<WitnessFailure>,
}

impl DifferentialReport {
    pub fn is_clean(&self) -> bool {
        self.mismatches.is_empty() && self.witness_failures.is_empty()
    }

    pub fn absorb(&mut self, other: DifferentialReport) {
        self.labels_compared += other.labels_compared;
        self.walks_checked += other.walks_checked;
        self.mismatches.extend(other.mismatches);
        self.witness_failures.extend(other.witness_failures);
    }
}

/// Runs all three path algorithms from `(source, t0)` with an unbounded hop
/// budget, compares every label with the oracle, and validates every
/// reconstructed witness walk.
pub fn differential(h: &TimeVaryingHypergraph, source: VertexIdx, t0: Tick) -> DifferentialReport {
    let budget = h.vertex_count().max(1);
    let oracle = oracle_distances_from(h, source, t0, budget);
    let mut report = DifferentialReport::default();
    for metric in Metric::ALL {
        let labels = match metric {
            Metric::Foremost => paths::foremost_within(h, source, t0, None),
            Metric::Shortest => paths::shortest_within(h, source, t0, budget, None).expect("budget ≥ 1"),
            Metric::Fastest => paths::fastest_within(h, source, t0, None),
        };
        let expected = oracle.values(metric);
        for v in h.vertices() {
            let (want, got) = (expected.get(&v).copied(), labels.get(v));
            report.labels_compared += 1;
            if want != got {
                report.mismatches.push(Mismatch { source, t0, metric, vertex: v, oracle: want, computed: got });
            }
        }
        for (&v, &value) in labels.values() {
            report.walks_checked += 1;
            let fail = |reason: String| WitnessFailure { source, metric, vertex: v, reason };
            match paths::reconstruct_walk(h, &labels, v) {
                Err(e) => report.witness_failures.push(fail(e.to_string())),
                Ok(walk) => {
                    if let Err(e) = walk.validate(h) {
                        report.witness_failures.push(fail(e.to_string()));
                    } else if walk.target() != v || walk.source != source {
                        report.witness_failures.push(fail("walk has the wrong endpoints".into()));
                    } else if walk.departure < t0 {
                        report.witness_failures.push(fail("walk departs before t0".into()));
                    } else if walk.metric_value(metric) != value {
                        report.witness_failures.push(fail(format!(
                            "walk attains {} but label is {value}",
                            walk.metric_value(metric)
                        )));
                    }
                }
            }
        }
    }
    report
}

/// [`differential`] from every vertex.
pub fn differential_all(h: &TimeVaryingHypergraph, t0: Tick) -> DifferentialReport {
    let mut report = DifferentialReport::default();
    for v in h.vertices() {
        report.absorb(differential(h, v, t0));
    }
    report
}
