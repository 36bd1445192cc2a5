use std::collections::BTreeMap;

use super::{DistanceLabels, Metric, PathError, Trail, TrailHead, TrailNode};
use crate::graph::{EdgeIdx, Tick, TimeVaryingHypergraph, VertexIdx};

/// Hop-layered earliest arrival. Layer `k` holds, for every vertex, the
/// earliest arrival achievable with at most `k` hops. Keeping only the
/// earliest arrival per layer loses nothing: an earlier arrival can board
/// every edge a later one can.
///
/// Only edges touching a vertex improved in the previous layer can offer
/// anything new, so each layer scans just those, in edge-id order.
struct Layers<'h> {
    h: &'h TimeVaryingHypergraph,
    horizon: Option<Tick>,
    cur: Vec<Tick>,
    cur_node: Vec<Option<u32>>,
    next: Vec<Tick>,
    next_step: Vec<(EdgeIdx, VertexIdx)>,
    changed: Vec<VertexIdx>,
    edge_mark: Vec<bool>,
    trail: Trail,
}

impl<'h> Layers<'h> {
    fn new(h: &'h TimeVaryingHypergraph, source: VertexIdx, t0: Tick, horizon: Option<Tick>) -> Self {
        let n = h.vertex_count();
        let mut cur = vec![Tick::MAX; n];
        cur[source.index()] = t0;
        Self {
            h,
            horizon,
            next: cur.clone(),
            cur,
            cur_node: vec![None; n],
            next_step: vec![(EdgeIdx(0), VertexIdx(0)); n],
            changed: vec![source],
            edge_mark: vec![false; h.edge_count()],
            trail: Trail::default(),
        }
    }

    /// Advances one layer; returns the vertices whose arrival improved.
    fn step(&mut self) -> &[VertexIdx] {
        let h = self.h;
        let mut edges = Vec::new();
        for &u in &self.changed {
            for &e in h.incidence(u) {
                if !self.edge_mark[e.index()] {
                    self.edge_mark[e.index()] = true;
                    edges.push(e);
                }
            }
        }
        for e in &edges {
            self.edge_mark[e.index()] = false;
        }
        edges.sort_unstable_by_key(|&e| h.edge_rank(e));

        let mut touched = Vec::new();
        for e in edges {
            let edge = h.edge(e);
            let boarding = edge
                .participants
                .iter()
                .map(|&u| (self.cur[u.index()], u))
                .filter(|&(at, _)| at <= edge.end)
                .min();
            let Some((at, from)) = boarding else { continue };
            let cand = at.max(edge.start);
            if self.horizon.is_some_and(|limit| cand > limit) {
                continue;
            }
            for &v in &edge.participants {
                let i = v.index();
                if cand < self.next[i] {
                    if self.next[i] == self.cur[i] {
                        touched.push(v);
                    }
                    self.next[i] = cand;
                    self.next_step[i] = (e, from);
                }
            }
        }

        touched.sort_unstable();
        // Nodes must reference the previous layer's states, so create them
        // all before publishing any.
        let nodes: Vec<u32> = touched
            .iter()
            .map(|&v| {
                let (edge, from) = self.next_step[v.index()];
                self.trail.push(TrailNode { edge, vertex: v, parent: self.cur_node[from.index()] })
            })
            .collect();
        for (&v, node) in touched.iter().zip(nodes) {
            self.cur[v.index()] = self.next[v.index()];
            self.cur_node[v.index()] = Some(node);
        }
        self.changed = touched;
        &self.changed
    }

    fn arrivals(&self) -> Vec<Option<Tick>> {
        self.cur.iter().map(|&t| (t != Tick::MAX).then_some(t)).collect()
    }
}

/// Fewest hops over feasible walks from `source` departing at `t0`, using at
/// most `max_hops` hops.
pub fn shortest(
    h: &TimeVaryingHypergraph,
    source: &str,
    t0: Tick,
    max_hops: usize,
) -> Result<DistanceLabels, PathError> {
    let s = h.vertex(source)?;
    shortest_within(h, s, t0, max_hops, None)
}

pub fn shortest_within(
    h: &TimeVaryingHypergraph,
    source: VertexIdx,
    t0: Tick,
    max_hops: usize,
    horizon: Option<Tick>,
) -> Result<DistanceLabels, PathError> {
    if max_hops == 0 {
        return Err(PathError::NonPositiveMaxHops);
    }
    let mut layers = Layers::new(h, source, t0, horizon);
    let mut values = BTreeMap::from([(source, 0)]);
    let mut heads = BTreeMap::from([(source, TrailHead { node: None, departure: t0 })]);
    for hop in 1..=max_hops {
        let improved = layers.step().to_vec();
        if improved.is_empty() {
            break;
        }
        for v in improved {
            if let std::collections::btree_map::Entry::Vacant(slot) = values.entry(v) {
                slot.insert(hop as i64);
                heads.insert(v, TrailHead { node: layers.cur_node[v.index()], departure: t0 });
            }
        }
    }
    let mut trail = layers.trail;
    trail.heads = heads;
    Ok(DistanceLabels { source, t0, metric: Metric::Shortest, values, trail: Some(trail) })
}

/// Earliest arrival per vertex using at most `k` hops, for `k = 0..=max_hops`
/// (fewer layers are returned once the profile stops changing).
pub fn earliest_arrival_layers(
    h: &TimeVaryingHypergraph,
    source: VertexIdx,
    t0: Tick,
    max_hops: usize,
) -> Vec<Vec<Option<Tick>>> {
    let mut layers = Layers::new(h, source, t0, None);
    let mut out = vec![layers.arrivals()];
    for _ in 0..max_hops {
        if layers.step().is_empty() {
            break;
        }
        out.push(layers.arrivals());
    }
    out
}
