//! Time-varying hypergraph data model.
//!
//! A network is a set of [`TemporalHyperedge`]s, each connecting two or more
//! vertices during a closed availability interval `[start, end]`. Building a
//! [`TimeVaryingHypergraph`] interns vertex names to dense indices and
//! precomputes a per-vertex incidence index sorted by edge start.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest tick magnitude accepted on an edge, `2^62 − 1`. The difference
/// of two ticks within this range always fits in `i64`.
pub const TICK_LIMIT: i64 = (1 << 62) - 1;

/// A point on the (unit-agnostic) time axis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tick(pub i64);

impl Tick {
    pub const MIN: Tick = Tick(i64::MIN);
    pub const MAX: Tick = Tick(i64::MAX);

    #[inline]
    pub fn get(self) -> i64 {
        self.0
    }

    /// Signed distance `self - earlier`, saturating at the `i64` bounds
    /// (reachable only with a departure outside the edge tick range).
    #[inline]
    pub fn since(self, earlier: Tick) -> i64 {
        self.0.saturating_sub(earlier.0)
    }

    fn in_range(self) -> bool {
        (-TICK_LIMIT..=TICK_LIMIT).contains(&self.0)
    }
}

impl From<i64> for Tick {
    fn from(value: i64) -> Self {
        Tick(value)
    }
}

impl fmt::Display for Tick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Dense index of an interned vertex. Indices follow the lexicographic order
/// of vertex names, so comparing indices compares names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexIdx(pub u32);

impl VertexIdx {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Position of an edge in input order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeIdx(pub u32);

impl EdgeIdx {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge id must be nonempty")]
    EmptyEdgeId,
    #[error("edge {edge:?}: vertex id must be nonempty")]
    EmptyVertexId { edge: String },
    #[error("edge {edge:?}: needs at least 2 participants, got {count}")]
    TooFewParticipants { edge: String, count: usize },
    #[error("edge {edge:?}: participant {vertex:?} listed more than once")]
    DuplicateParticipant { edge: String, vertex: String },
    #[error("edge {edge:?}: start {start} is after end {end}")]
    InvalidInterval { edge: String, start: Tick, end: Tick },
    #[error("edge {edge:?}: tick {tick} outside ±(2^62 − 1)")]
    TickOutOfRange { edge: String, tick: Tick },
    #[error("duplicate edge id {0:?}")]
    DuplicateEdgeId(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
    #[error("network too large: {0} exceeds the u32 index space")]
    TooLarge(&'static str),
}

/// A code review: a set of participants available to one another during
/// `[start, end]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalHyperedge {
    id: String,
    participants: Vec<String>,
    start: Tick,
    end: Tick,
}

impl TemporalHyperedge {
    /// Validates and constructs an edge. Participant order is preserved.
    pub fn new(
        id: impl Into<String>,
        participants: Vec<String>,
        start: Tick,
        end: Tick,
    ) -> Result<Self, GraphError> {
        let id = id.into();
        if id.is_empty() {
            return Err(GraphError::EmptyEdgeId);
        }
        if participants.len() < 2 {
            return Err(GraphError::TooFewParticipants { edge: id, count: participants.len() });
        }
        let mut seen = BTreeSet::new();
        for p in &participants {
            if p.is_empty() {
                return Err(GraphError::EmptyVertexId { edge: id });
            }
            if !seen.insert(p.as_str()) {
                return Err(GraphError::DuplicateParticipant { edge: id.clone(), vertex: p.clone() });
            }
        }
        for tick in [start, end] {
            if !tick.in_range() {
                return Err(GraphError::TickOutOfRange { edge: id, tick });
            }
        }
        if start > end {
            return Err(GraphError::InvalidInterval { edge: id, start, end });
        }
        Ok(Self { id, participants, start, end })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn participants(&self) -> &[String] {
        &self.participants
    }

    pub fn start(&self) -> Tick {
        self.start
    }

    pub fn end(&self) -> Tick {
        self.end
    }
}

/// An edge after interning: participants are vertex indices, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub participants: Vec<VertexIdx>,
    pub start: Tick,
    pub end: Tick,
}

impl Edge {
    #[inline]
    pub fn is_available_at(&self, t: Tick) -> bool {
        t <= self.end
    }

    pub fn contains(&self, v: VertexIdx) -> bool {
        self.participants.binary_search(&v).is_ok()
    }
}

/// Immutable network with an interned vertex table and a start-sorted
/// incidence index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TimeVaryingHypergraph {
    names: Vec<String>,
    lookup: HashMap<String, VertexIdx>,
    edges: Vec<Edge>,
    // rank of each edge under lexicographic id order
    id_rank: Vec<u32>,
    by_rank: Vec<EdgeIdx>,
    // CSR layout: incidence of v is incidence[offsets[v]..offsets[v + 1]]
    offsets: Vec<usize>,
    incidence: Vec<EdgeIdx>,
}

impl TimeVaryingHypergraph {
    /// Builds a hypergraph from edge records. The vertex table is the union
    /// of all participants; incidence lists are sorted by edge start, ties
    /// broken by edge id.
    pub fn build<I>(records: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = TemporalHyperedge>,
    {
        let records: Vec<TemporalHyperedge> = records.into_iter().collect();
        if records.len() > u32::MAX as usize {
            return Err(GraphError::TooLarge("edge count"));
        }

        let mut ids = HashMap::with_capacity(records.len());
        for r in &records {
            if ids.insert(r.id.as_str(), ()).is_some() {
                return Err(GraphError::DuplicateEdgeId(r.id.clone()));
            }
        }

        let names: Vec<String> = records
            .iter()
            .flat_map(|r| r.participants.iter())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .cloned()
            .collect();
        if names.len() > u32::MAX as usize {
            return Err(GraphError::TooLarge("vertex count"));
        }
        let lookup: HashMap<String, VertexIdx> = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), VertexIdx(i as u32)))
            .collect();

        let edges: Vec<Edge> = records
            .into_iter()
            .map(|r| {
                let mut participants: Vec<VertexIdx> =
                    r.participants.iter().map(|p| lookup[p.as_str()]).collect();
                participants.sort_unstable();
                Edge { id: r.id, participants, start: r.start, end: r.end }
            })
            .collect();

        let mut by_rank: Vec<EdgeIdx> = (0..edges.len() as u32).map(EdgeIdx).collect();
        by_rank.sort_by(|a, b| edges[a.index()].id.cmp(&edges[b.index()].id));
        let mut id_rank = vec![0u32; edges.len()];
        for (rank, e) in by_rank.iter().enumerate() {
            id_rank[e.index()] = rank as u32;
        }

        let mut degree = vec![0usize; names.len()];
        for e in &edges {
            for v in &e.participants {
                degree[v.index()] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(names.len() + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..names.len()].to_vec();
        let mut incidence = vec![EdgeIdx(0); *offsets.last().unwrap()];
        // Visiting edges in (start, id) order fills each list already sorted.
        let mut order = by_rank.clone();
        order.sort_by_key(|e| edges[e.index()].start);
        for e in order {
            for v in &edges[e.index()].participants {
                incidence[fill[v.index()]] = e;
                fill[v.index()] += 1;
            }
        }

        Ok(Self { names, lookup, edges, id_rank, by_rank, offsets, incidence })
    }

    pub fn empty() -> Self {
        Self::build(std::iter::empty()).expect("empty network is valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, name: &str) -> Result<VertexIdx, GraphError> {
        self.lookup.get(name).copied().ok_or_else(|| GraphError::UnknownVertex(name.to_owned()))
    }

    pub fn vertex_name(&self, v: VertexIdx) -> &str {
        &self.names[v.index()]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexIdx> {
        (0..self.names.len() as u32).map(VertexIdx)
    }

    pub fn edge(&self, e: EdgeIdx) -> &Edge {
        &self.edges[e.index()]
    }

    /// Edges in input order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Position of `e` when all edges are ordered by id.
    #[inline]
    pub fn edge_rank(&self, e: EdgeIdx) -> u32 {
        self.id_rank[e.index()]
    }

    /// Edge indices ordered by id.
    pub fn edges_by_id(&self) -> &[EdgeIdx] {
        &self.by_rank
    }

    /// Full incidence list of `v`, sorted by (start, id).
    #[inline]
    pub fn incidence(&self, v: VertexIdx) -> &[EdgeIdx] {
        &self.incidence[self.offsets[v.index()]..self.offsets[v.index() + 1]]
    }

    /// Incident edges of `v` still available at `not_before`, in ascending
    /// start order.
    pub fn incident_edges(
        &self,
        v: VertexIdx,
        not_before: Tick,
    ) -> impl Iterator<Item = EdgeIdx> + '_ {
        self.incidence(v).iter().copied().filter(move |e| self.edges[e.index()].end >= not_before)
    }

    /// Name-based variant of [`incident_edges`](Self::incident_edges).
    pub fn incident_edges_of(&self, v: &str, not_before: Tick) -> Result<Vec<EdgeIdx>, GraphError> {
        let v = self.vertex(v)?;
        Ok(self.incident_edges(v, not_before).collect())
    }

    /// Back to owned edge records, in input order.
    pub fn to_records(&self) -> Vec<TemporalHyperedge> {
        self.edges
            .iter()
            .map(|e| TemporalHyperedge {
                id: e.id.clone(),
                participants: e.participants.iter().map(|v| self.names[v.index()].clone()).collect(),
                start: e.start,
                end: e.end,
            })
            .collect()
    }

    pub fn stats(&self) -> NetworkStats {
        let mut participant_histogram = BTreeMap::new();
        let mut span: Option<(Tick, Tick)> = None;
        for e in &self.edges {
            *participant_histogram.entry(e.participants.len()).or_insert(0) += 1;
            span = Some(match span {
                None => (e.start, e.end),
                Some((lo, hi)) => (lo.min(e.start), hi.max(e.end)),
            });
        }
        NetworkStats {
            vertices: self.vertex_count(),
            edges: self.edge_count(),
            participant_histogram,
            span,
        }
    }
}

/// Summary counts of a network.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkStats {
    pub vertices: usize,
    pub edges: usize,
    /// participant-set size → number of edges
    pub participant_histogram: BTreeMap<usize, usize>,
    /// `[min start, max end]`, absent for an empty network
    pub span: Option<(Tick, Tick)>,
}

impl fmt::Display for NetworkStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vertices, {} edges", self.vertices, self.edges)?;
        if let Some((lo, hi)) = self.span {
            write!(f, ", span [{lo}, {hi}]")?;
        }
        if !self.participant_histogram.is_empty() {
            let parts: Vec<String> =
                self.participant_histogram.iter().map(|(k, n)| format!("{k}:{n}")).collect();
            write!(f, ", participants {{{}}}", parts.join(", "))?;
        }
        Ok(())
    }
}
