use std::collections::BTreeMap;

use super::Metric;
use crate::graph::{EdgeIdx, Tick, VertexIdx};

/// One traversal step in a shared walk tree: `vertex` was entered over
/// `edge`, coming from the state recorded at `parent` (or from the source
/// when `parent` is `None`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrailNode {
    pub edge: EdgeIdx,
    pub vertex: VertexIdx,
    pub parent: Option<u32>,
}

/// Where the witness walk of a reached vertex ends, and when it departs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrailHead {
    pub node: Option<u32>,
    pub departure: Tick,
}

/// Predecessor records for walk reconstruction.
///
/// Foremost labels form a plain predecessor tree. Shortest and fastest
/// labels do not: the walk realizing a vertex's hop count may pass through
/// another vertex in a state that is not that vertex's own optimum. Nodes
/// therefore record walk states rather than vertices, and each reached
/// vertex points at the state ending its witness walk.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trail {
    pub(crate) nodes: Vec<TrailNode>,
    pub(crate) heads: BTreeMap<VertexIdx, TrailHead>,
}

impl Trail {
    pub fn nodes(&self) -> &[TrailNode] {
        &self.nodes
    }

    pub fn head(&self, v: VertexIdx) -> Option<TrailHead> {
        self.heads.get(&v).copied()
    }

    pub(crate) fn push(&mut self, node: TrailNode) -> u32 {
        self.nodes.push(node);
        (self.nodes.len() - 1) as u32
    }

    /// Copies the predecessor-tree path ending at `v` into the trail, reusing
    /// nodes already imported through `memo` (indexed by vertex, `u32::MAX`
    /// when not yet imported).
    pub(crate) fn import_tree_path(
        &mut self,
        pred: &[Option<(EdgeIdx, VertexIdx)>],
        v: VertexIdx,
        memo: &mut [u32],
    ) -> Option<u32> {
        let mut pending = Vec::new();
        let mut cur = v;
        let mut anchor = None;
        loop {
            if memo[cur.index()] != u32::MAX {
                anchor = Some(memo[cur.index()]);
                break;
            }
            match pred[cur.index()] {
                Some((e, from)) => {
                    pending.push((cur, e));
                    cur = from;
                }
                None => break,
            }
        }
        let mut parent = anchor;
        for (vertex, edge) in pending.into_iter().rev() {
            let id = self.push(TrailNode { edge, vertex, parent });
            memo[vertex.index()] = id;
            parent = Some(id);
        }
        parent
    }
}

/// Per-source result of one metric.
///
/// `values` holds only reached vertices. Labels are arrival ticks for
/// foremost, hop counts for shortest, and durations for fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceLabels {
    pub(crate) source: VertexIdx,
    pub(crate) t0: Tick,
    pub(crate) metric: Metric,
    pub(crate) values: BTreeMap<VertexIdx, i64>,
    pub(crate) trail: Option<Trail>,
}

impl DistanceLabels {
    pub fn source(&self) -> VertexIdx {
        self.source
    }

    pub fn t0(&self) -> Tick {
        self.t0
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn values(&self) -> &BTreeMap<VertexIdx, i64> {
        &self.values
    }

    pub fn get(&self, v: VertexIdx) -> Option<i64> {
        self.values.get(&v).copied()
    }

    pub fn reached_count(&self) -> usize {
        self.values.len()
    }

    pub fn trail(&self) -> Option<&Trail> {
        self.trail.as_ref()
    }

    /// Drops predecessor records, keeping only the values.
    pub fn without_trail(mut self) -> Self {
        self.trail = None;
        self
    }

    /// Last step of the witness walk to `v`: the edge used and the vertex it
    /// was boarded from. `None` for the source and for unreached vertices.
    pub fn predecessor(&self, v: VertexIdx) -> Option<(EdgeIdx, VertexIdx)> {
        let trail = self.trail.as_ref()?;
        let node = trail.nodes[trail.heads.get(&v)?.node? as usize];
        let from = match node.parent {
            Some(p) => trail.nodes[p as usize].vertex,
            None => self.source,
        };
        Some((node.edge, from))
    }
}
