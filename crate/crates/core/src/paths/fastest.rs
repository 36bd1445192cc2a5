use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use super::foremost;
use super::{DistanceLabels, Metric, PathError, Trail, TrailHead, TrailNode};
use crate::graph::{EdgeIdx, Tick, TimeVaryingHypergraph, VertexIdx, TICK_LIMIT};

/// Smallest `arrival − departure` over feasible walks departing from
/// `source` at any `τ ≥ t0`.
pub fn fastest(h: &TimeVaryingHypergraph, source: &str, t0: Tick) -> Result<DistanceLabels, PathError> {
    let s = h.vertex(source)?;
    Ok(fastest_within(h, s, t0, None))
}

/// Bi-criteria label-setting search.
///
/// A walk is summarized by `A`, its arrival when departing at `t0`, and
/// `U`, the smallest end among its edges. It is feasible for every
/// departure in `[t0, U]`, and departing at `min(A, U)` arrives at `A`, so
/// its duration is `max(0, A − U)`. Extending by an edge `[S, E]` needs
/// `A ≤ E` and yields `(max(A, S), min(U, E))`; smaller `A` and larger `U`
/// are better in every continuation. Labels are settled in ascending
/// `(A, −U)` order, so a vertex keeps a label only when its `U` beats every
/// label settled there before. The same argument lets an edge forward a
/// label only when its `min(U, E)` beats the last one it forwarded.
pub fn fastest_within(
    h: &TimeVaryingHypergraph,
    source: VertexIdx,
    t0: Tick,
    horizon: Option<Tick>,
) -> DistanceLabels {
    let n = h.vertex_count();
    let mut best_u = vec![Tick::MIN; n];
    let mut edge_u = vec![Tick::MIN; h.edge_count()];
    // (duration, node, departure) of the first settled label with the least duration
    let mut best: Vec<Option<(i64, Option<u32>, Tick)>> = vec![None; n];
    let mut trail = Trail::default();
    let mut heap = BinaryHeap::new();

    // (A, −U, vertex, edge rank, parent node, edge)
    type Entry = (Tick, Reverse<Tick>, VertexIdx, u32, Option<u32>, Option<EdgeIdx>);
    heap.push(Reverse::<Entry>((t0, Reverse(Tick::MAX), source, 0, None, None)));
    while let Some(Reverse((a, Reverse(u), v, _, parent, via))) = heap.pop() {
        if u <= best_u[v.index()] {
            continue;
        }
        best_u[v.index()] = u;
        let node = via.map(|edge| trail.push(TrailNode { edge, vertex: v, parent }));
        let duration = a.since(a.min(u));
        if !matches!(best[v.index()], Some((d, _, _)) if d <= duration) {
            best[v.index()] = Some((duration, node, a.min(u)));
        }
        for e in h.incident_edges(v, a) {
            let edge = h.edge(e);
            let (next_a, next_u) = (a.max(edge.start), u.min(edge.end));
            if next_u <= edge_u[e.index()] || horizon.is_some_and(|limit| next_a > limit) {
                continue;
            }
            edge_u[e.index()] = next_u;
            let rank = h.edge_rank(e);
            for &w in &edge.participants {
                if w != v && next_u > best_u[w.index()] {
                    heap.push(Reverse((next_a, Reverse(next_u), w, rank, node, Some(e))));
                }
            }
        }
    }

    let mut values = BTreeMap::new();
    for (i, b) in best.into_iter().enumerate() {
        if let Some((d, node, departure)) = b {
            let v = VertexIdx(i as u32);
            values.insert(v, d);
            trail.heads.insert(v, TrailHead { node, departure });
        }
    }
    DistanceLabels { source, t0, metric: Metric::Fastest, values, trail: Some(trail) }
}

/// Reference implementation of [`fastest_within`]: candidate departures,
/// then one foremost search per candidate.
///
/// For a fixed walk, departing at `τ` arrives at `max(τ, M)` where `M` is the
/// largest start among its edges, and the walk stays feasible while `τ`
/// does not exceed `U`, the smallest end among its edges. The duration
/// `max(0, M − τ)` is therefore minimized at `τ = clamp(M, t0, U)`: `t0`, or
/// an endpoint of one of the walk's edges. Every such edge is relaxed by the
/// search departing at `t0`, and `τ` can never exceed the latest end among
/// the source's own edges. A horizon adds itself as a candidate because it
/// caps the feasible departures the same way `U` does.
///
/// The candidate set grows with the reachable edge count, so this is only
/// practical on small networks.
pub fn fastest_by_departures(
    h: &TimeVaryingHypergraph,
    source: VertexIdx,
    t0: Tick,
    horizon: Option<Tick>,
) -> DistanceLabels {
    // departing before every edge start only lengthens walks
    let requested = t0;
    let t0 = t0.max(Tick(-TICK_LIMIT));
    let base = foremost::run(h, source, t0, horizon);
    let mut latest = h.incident_edges(source, t0).map(|e| h.edge(e).end).max().unwrap_or(t0);
    if let Some(limit) = horizon {
        latest = latest.min(limit);
    }

    let mut departures = BTreeSet::from([t0]);
    for &e in &base.scanned {
        let edge = h.edge(e);
        departures.extend([edge.start, edge.end].into_iter().filter(|&t| t >= t0 && t <= latest));
    }
    if let Some(limit) = horizon {
        if limit >= t0 && limit <= latest {
            departures.insert(limit);
        }
    }

    let n = h.vertex_count();
    let mut best = vec![i64::MAX; n];
    let mut trail = Trail::default();
    let mut heads = BTreeMap::new();
    let mut remaining = base.settled.len();
    let mut base = Some(base);
    for &tau in departures.iter().rev() {
        let r = if tau == t0 { base.take().unwrap() } else { foremost::run(h, source, tau, horizon) };
        let mut memo = vec![u32::MAX; n];
        for &v in &r.settled {
            let d = r.arrival[v.index()].unwrap().since(tau);
            if d < best[v.index()] {
                // vertices reached from a later departure are also reached
                // from t0, so `remaining` counts down to zero exactly
                if d == 0 {
                    remaining -= 1;
                }
                best[v.index()] = d;
                let node = trail.import_tree_path(&r.pred, v, &mut memo);
                heads.insert(v, TrailHead { node, departure: tau });
            }
        }
        if remaining == 0 {
            break;
        }
    }

    let values = heads.keys().map(|&v| (v, best[v.index()])).collect();
    trail.heads = heads;
    DistanceLabels { source, t0: requested, metric: Metric::Fastest, values, trail: Some(trail) }
}
