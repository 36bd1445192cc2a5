//! Seeded synthetic networks.
//!
//! All randomness flows from one [`ChaCha8Rng`] seed; independent concerns
//! draw from separate ChaCha streams of that seed, so a failing case replays
//! from `(params, seed)` alone.

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{TemporalHyperedge, Tick, TimeVaryingHypergraph, TICK_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid generator parameters: {0}")]
pub struct ParamsInvalid(pub String);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub vertices: usize,
    pub edges: usize,
    pub min_participants: usize,
    pub max_participants: usize,
    /// Participant-set size `k` is drawn with weight `(k − min + 1)^-skew`;
    /// 0 is uniform.
    pub skew: f64,
    /// Edges live inside `[0, span]`.
    pub span: i64,
    pub min_interval: i64,
    pub max_interval: i64,
    pub seed: u64,
}

impl GenParams {
    pub fn new(vertices: usize, edges: usize, seed: u64) -> Self {
        Self {
            vertices,
            edges,
            min_participants: 2,
            max_participants: 4,
            skew: 1.0,
            span: 1_000_000,
            min_interval: 0,
            max_interval: 1_000,
            seed,
        }
    }

    /// Desk-scale instances for differential testing against the oracle.
    pub fn small(vertices: usize, edges: usize, seed: u64) -> Self {
        Self {
            vertices,
            edges,
            min_participants: 2,
            max_participants: vertices.clamp(2, 4),
            skew: 1.0,
            span: 20,
            min_interval: 0,
            max_interval: 6,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), ParamsInvalid> {
        let bad = |m: String| Err(ParamsInvalid(m));
        if self.vertices < 2 {
            return bad(format!("vertex count {} < 2", self.vertices));
        }
        if self.vertices > u32::MAX as usize || self.edges > u32::MAX as usize {
            return bad("counts exceed the u32 index space".into());
        }
        if self.min_participants < 2 {
            return bad(format!("min participants {} < 2", self.min_participants));
        }
        if self.max_participants < self.min_participants {
            return bad("max participants below min participants".into());
        }
        if self.max_participants > self.vertices {
            return bad(format!(
                "max participants {} exceeds vertex count {}",
                self.max_participants, self.vertices
            ));
        }
        // every vertex must belong to some edge
        if self.edges.saturating_mul(self.max_participants) < self.vertices {
            return bad(format!(
                "{} edges of at most {} participants cannot cover {} vertices",
                self.edges, self.max_participants, self.vertices
            ));
        }
        if !self.skew.is_finite() || self.skew < 0.0 {
            return bad(format!("skew {} must be finite and non-negative", self.skew));
        }
        if self.span < 0 || self.span > TICK_LIMIT {
            return bad(format!("span {} outside [0, 2^62 − 1]", self.span));
        }
        if self.min_interval < 0 || self.max_interval < self.min_interval {
            return bad("interval lengths must satisfy 0 ≤ min ≤ max".into());
        }
        Ok(())
    }
}

fn id_width(count: usize) -> usize {
    count.saturating_sub(1).to_string().len()
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Random edge records with exactly the requested vertex and edge counts.
pub fn gen_records(p: &GenParams) -> Result<Vec<TemporalHyperedge>, ParamsInvalid> {
    p.validate()?;
    let mut size_rng = stream(p.seed, 1);
    let mut member_rng = stream(p.seed, 2);
    let mut time_rng = stream(p.seed, 3);

    let weights: Vec<f64> = (p.min_participants..=p.max_participants)
        .map(|k| ((k - p.min_participants + 1) as f64).powf(-p.skew))
        .collect();
    let dist = WeightedIndex::new(&weights).map_err(|e| ParamsInvalid(e.to_string()))?;
    let mut size: Vec<usize> = (0..p.edges).map(|_| p.min_participants + dist.sample(&mut size_rng)).collect();
    // grow sizes round-robin until every vertex has a slot
    let mut total: usize = size.iter().sum();
    let mut i = 0;
    while total < p.vertices {
        if size[i] < p.max_participants {
            size[i] += 1;
            total += 1;
        }
        i = (i + 1) % p.edges;
    }

    // Scatter each vertex into a distinct random slot, then fill the rest.
    let mut slots: Vec<(usize, usize)> =
        size.iter().enumerate().flat_map(|(e, &k)| (0..k).map(move |j| (e, j))).collect();
    slots.shuffle(&mut member_rng);
    let mut members: Vec<Vec<usize>> = size.iter().map(|&k| Vec::with_capacity(k)).collect();
    for (v, &(e, _)) in slots.iter().take(p.vertices).enumerate() {
        members[e].push(v);
    }
    for (e, k) in size.iter().enumerate() {
        while members[e].len() < *k {
            let v = member_rng.gen_range(0..p.vertices);
            if !members[e].contains(&v) {
                members[e].push(v);
            }
        }
    }

    let vw = id_width(p.vertices);
    let ew = id_width(p.edges);
    let records = members
        .into_iter()
        .enumerate()
        .map(|(e, vs)| {
            let len = time_rng.gen_range(p.min_interval..=p.max_interval).min(p.span);
            let start = time_rng.gen_range(0..=p.span - len);
            let participants = vs.into_iter().map(|v| format!("v{v:0vw$}")).collect();
            TemporalHyperedge::new(format!("e{e:0ew$}"), participants, Tick(start), Tick(start + len))
                .expect("generated edges satisfy edge invariants")
        })
        .collect();
    Ok(records)
}

pub fn gen_random(p: &GenParams) -> Result<TimeVaryingHypergraph, ParamsInvalid> {
    let records = gen_records(p)?;
    Ok(TimeVaryingHypergraph::build(records).expect("generated ids are unique"))
}

/// A desk-scale random network: 2 to 8 vertices, up to 12 edges, ticks in
/// `[0, 20]`. Sizes are drawn from `seed` as well.
pub fn gen_small(seed: u64) -> TimeVaryingHypergraph {
    let mut rng = stream(seed, 0);
    let vertices: usize = rng.gen_range(2..=8);
    let max_participants = vertices.clamp(2, 4);
    let edges = rng.gen_range(vertices.div_ceil(max_participants)..=12);
    gen_random(&GenParams::small(vertices, edges, seed)).expect("small parameters are valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// `size` edges `{v(i-1), v(i)}` in sequence.
    Chain,
    /// `size` edges `{hub, leaf(i)}`.
    Star,
    /// One edge joining `size` vertices.
    Clique,
}

/// When the `i`-th edge (1-based) of a structured fixture is available.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimePattern {
    /// edge `i` at `[i, i]`
    Ascending,
    /// edge `i` at `[n + 1 − i, n + 1 − i]`
    Descending,
    /// every edge at `[t, t]`
    Constant(i64),
}

impl TimePattern {
    fn at(self, i: usize, n: usize) -> Tick {
        match self {
            TimePattern::Ascending => Tick(i as i64),
            TimePattern::Descending => Tick((n + 1 - i) as i64),
            TimePattern::Constant(t) => Tick(t),
        }
    }
}

/// Canonical fixtures with closed-form distances. A chain of `n` ascending
/// edges reaches its far end at tick `n` in `n` hops; descending, never.
pub fn gen_structured(shape: Shape, size: usize, times: TimePattern) -> Result<TimeVaryingHypergraph, ParamsInvalid> {
    if size < 2 {
        return Err(ParamsInvalid(format!("fixture size {size} < 2")));
    }
    if let TimePattern::Constant(t) = times {
        if !(-TICK_LIMIT..=TICK_LIMIT).contains(&t) {
            return Err(ParamsInvalid(format!("tick {t} outside ±(2^62 − 1)")));
        }
    }
    let vw = id_width(size + 1);
    let ew = id_width(size + 1);
    let v = |i: usize| format!("v{i:0vw$}");
    let mk = |i: usize, vs: Vec<String>| {
        let t = times.at(i, size);
        TemporalHyperedge::new(format!("e{i:0ew$}"), vs, t, t).expect("fixture edges are valid")
    };
    let records: Vec<TemporalHyperedge> = match shape {
        Shape::Chain => (1..=size).map(|i| mk(i, vec![v(i - 1), v(i)])).collect(),
        Shape::Star => (1..=size).map(|i| mk(i, vec![v(0), v(i)])).collect(),
        Shape::Clique => vec![mk(1, (0..size).map(v).collect())],
    };
    Ok(TimeVaryingHypergraph::build(records).expect("fixture ids are unique"))
}
