use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use super::{DistanceLabels, Metric, PathError, Trail, TrailHead};
use crate::graph::{EdgeIdx, Tick, TimeVaryingHypergraph, VertexIdx};

/// Dense single-departure earliest-arrival search.
pub(crate) struct ForemostRun {
    pub arrival: Vec<Option<Tick>>,
    pub pred: Vec<Option<(EdgeIdx, VertexIdx)>>,
    /// vertices in settle order
    pub settled: Vec<VertexIdx>,
    /// edges that were relaxed at least once
    pub scanned: Vec<EdgeIdx>,
}

/// Label-setting search over arrival times. Vertices are settled in
/// ascending (arrival, index) order. The first relaxation of an edge comes
/// from its earliest-settled participant and therefore yields the best
/// candidate that edge can ever offer, so each edge is relaxed once.
pub(crate) fn run(h: &TimeVaryingHypergraph, source: VertexIdx, t0: Tick, horizon: Option<Tick>) -> ForemostRun {
    let n = h.vertex_count();
    let mut tentative = vec![Tick::MAX; n];
    let mut pred: Vec<Option<(EdgeIdx, VertexIdx)>> = vec![None; n];
    let mut pred_rank = vec![u32::MAX; n];
    let mut done = vec![false; n];
    let mut edge_done = vec![false; h.edge_count()];
    let mut settled = Vec::new();
    let mut scanned = Vec::new();
    let mut heap = BinaryHeap::new();

    tentative[source.index()] = t0;
    heap.push(Reverse((t0, source)));
    while let Some(Reverse((at, u))) = heap.pop() {
        if done[u.index()] || at > tentative[u.index()] {
            continue;
        }
        done[u.index()] = true;
        settled.push(u);
        for &e in h.incidence(u) {
            if edge_done[e.index()] {
                continue;
            }
            let edge = h.edge(e);
            if edge.end < at {
                continue;
            }
            edge_done[e.index()] = true;
            scanned.push(e);
            let cand = at.max(edge.start);
            if horizon.is_some_and(|limit| cand > limit) {
                continue;
            }
            let rank = h.edge_rank(e);
            for &v in &edge.participants {
                let i = v.index();
                if done[i] {
                    continue;
                }
                if cand < tentative[i] {
                    tentative[i] = cand;
                    pred[i] = Some((e, u));
                    pred_rank[i] = rank;
                    heap.push(Reverse((cand, v)));
                } else if cand == tentative[i] && rank < pred_rank[i] {
                    pred[i] = Some((e, u));
                    pred_rank[i] = rank;
                }
            }
        }
    }

    let arrival = tentative
        .into_iter()
        .zip(&done)
        .map(|(t, &d)| d.then_some(t))
        .collect();
    ForemostRun { arrival, pred, settled, scanned }
}

/// Earliest arrival at every vertex reachable from `source` departing at `t0`.
pub fn foremost(h: &TimeVaryingHypergraph, source: &str, t0: Tick) -> Result<DistanceLabels, PathError> {
    let s = h.vertex(source)?;
    Ok(foremost_within(h, s, t0, None))
}

/// Like [`foremost`], discarding arrivals after `horizon`.
pub fn foremost_within(
    h: &TimeVaryingHypergraph,
    source: VertexIdx,
    t0: Tick,
    horizon: Option<Tick>,
) -> DistanceLabels {
    let r = run(h, source, t0, horizon);
    let mut values = BTreeMap::new();
    let mut trail = Trail::default();
    let mut memo = vec![u32::MAX; h.vertex_count()];
    for v in h.vertices() {
        if let Some(at) = r.arrival[v.index()] {
            values.insert(v, at.get());
            let node = trail.import_tree_path(&r.pred, v, &mut memo);
            trail.heads.insert(v, TrailHead { node, departure: t0 });
        }
    }
    DistanceLabels { source, t0, metric: Metric::Foremost, values, trail: Some(trail) }
}
