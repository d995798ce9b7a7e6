//! Immutable hypergraph and graph instances, integral and fractional
//! matchings, and the validators every algorithm is checked against.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::Dyadic;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum InstanceError {
    #[error("edge {edge}: vertex {vertex} is out of range (n = {n})")]
    VertexOutOfRange {
        edge: EdgeId,
        vertex: VertexId,
        n: usize,
    },
    #[error("edge {edge} is empty")]
    EmptyEdge { edge: EdgeId },
    #[error("edge {edge} lists vertex {vertex} twice")]
    DuplicateVertex { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} is a self-loop at {vertex}")]
    SelfLoop { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} repeats edge {first} between {u} and {v}")]
    ParallelEdge {
        edge: EdgeId,
        first: EdgeId,
        u: VertexId,
        v: VertexId,
    },
    #[error("hyperedge {edge} has {size} vertices, not a graph edge")]
    NotAGraphEdge { edge: EdgeId, size: usize },
}

/// A hypergraph on vertices `0..n` with an ordered multiset of hyperedges.
///
/// Parallel hyperedges are allowed and keep distinct ids. Each hyperedge is
/// stored with its vertices sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<VertexId>>,
    incidence: Vec<Vec<EdgeId>>,
    rank: usize,
    delta: usize,
}

impl Hypergraph {
    pub fn new(n: usize, edges: Vec<Vec<VertexId>>) -> Result<Self, InstanceError> {
        let mut incidence = vec![Vec::new(); n];
        let mut normalized = Vec::with_capacity(edges.len());
        for (id, mut e) in edges.into_iter().enumerate() {
            if e.is_empty() {
                return Err(InstanceError::EmptyEdge { edge: id });
            }
            e.sort_unstable();
            for w in e.windows(2) {
                if w[0] == w[1] {
                    return Err(InstanceError::DuplicateVertex {
                        edge: id,
                        vertex: w[0],
                    });
                }
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(InstanceError::VertexOutOfRange {
                    edge: id,
                    vertex: v,
                    n,
                });
            }
            for &v in &e {
                incidence[v].push(id);
            }
            normalized.push(e);
        }
        let rank = normalized.iter().map(Vec::len).max().unwrap_or(0);
        let delta = incidence.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Hypergraph {
            n,
            edges: normalized,
            incidence,
            rank,
            delta,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn max_degree(&self) -> usize {
        self.delta
    }

    pub fn edge(&self, e: EdgeId) -> &[VertexId] {
        &self.edges[e]
    }

    pub fn edges(&self) -> &[Vec<VertexId>] {
        &self.edges
    }

    /// Hyperedges containing `v`, in increasing id order.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incidence[v].len()
    }

    pub fn intersects(&self, e: EdgeId, f: EdgeId) -> bool {
        let (a, b) = (&self.edges[e], &self.edges[f]);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Vertices within `radius` hops of `v` in the primal graph (two
    /// vertices are adjacent when some hyperedge contains both).
    pub fn ball(&self, v: VertexId, radius: usize) -> Vec<bool> {
        let mut inside = vec![false; self.n];
        inside[v] = true;
        let mut frontier = vec![v];
        for _ in 0..radius {
            let mut next = Vec::new();
            for &u in &frontier {
                for &e in &self.incidence[u] {
                    for &w in &self.edges[e] {
                        if !inside[w] {
                            inside[w] = true;
                            next.push(w);
                        }
                    }
                }
            }
            frontier = next;
        }
        inside
    }

    /// The sub-hypergraph keeping the listed edges, renumbered `0..k` in
    /// the given order. Vertex ids are unchanged.
    pub fn restrict(&self, keep: &[EdgeId]) -> Hypergraph {
        let edges = keep.iter().map(|&e| self.edges[e].clone()).collect();
        Hypergraph::new(self.n, edges).expect("restriction of a valid hypergraph")
    }
}

/// A simple undirected graph. Edge ids follow input order; each edge is
/// stored as `(min, max)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: Vec<Vec<VertexId>>,
    incident: Vec<Vec<EdgeId>>,
    delta: usize,
}

impl Graph {
    pub fn new(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, InstanceError> {
        let mut seen = std::collections::HashMap::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        let mut incident = vec![Vec::new(); n];
        let mut normalized = Vec::with_capacity(edges.len());
        for (id, &(a, b)) in edges.iter().enumerate() {
            for v in [a, b] {
                if v >= n {
                    return Err(InstanceError::VertexOutOfRange {
                        edge: id,
                        vertex: v,
                        n,
                    });
                }
            }
            if a == b {
                return Err(InstanceError::SelfLoop { edge: id, vertex: a });
            }
            let (u, v) = (a.min(b), a.max(b));
            if let Some(&first) = seen.get(&(u, v)) {
                return Err(InstanceError::ParallelEdge {
                    edge: id,
                    first,
                    u,
                    v,
                });
            }
            seen.insert((u, v), id);
            adjacency[u].push(v);
            adjacency[v].push(u);
            incident[u].push(id);
            incident[v].push(id);
            normalized.push((u, v));
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        let delta = adjacency.iter().map(Vec::len).max().unwrap_or(0);
        Ok(Graph {
            n,
            edges: normalized,
            adjacency,
            incident,
            delta,
        })
    }

    pub fn empty(n: usize) -> Graph {
        Graph::new(n, &[]).expect("edgeless graph")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn max_degree(&self) -> usize {
        self.delta
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v]
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> (VertexId, VertexId) {
        self.edges[e]
    }

    /// Edge ids incident to `v`, in increasing id order.
    pub fn incident_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.incident[v]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Number of edges sharing an endpoint with `e` (`d_e`).
    pub fn edge_degree(&self, e: EdgeId) -> usize {
        let (u, v) = self.edges[e];
        self.degree(u) + self.degree(v) - 2
    }

    /// The rank-2 hypergraph with the same edge ids.
    pub fn to_hypergraph(&self) -> Hypergraph {
        Hypergraph::new(self.n, self.edges.iter().map(|&(u, v)| vec![u, v]).collect())
            .expect("graph edges form a valid hypergraph")
    }

    /// Interpret a hypergraph whose edges all have two vertices as a graph.
    pub fn from_hypergraph(h: &Hypergraph) -> Result<Graph, InstanceError> {
        let mut edges = Vec::with_capacity(h.m());
        for (id, e) in h.edges().iter().enumerate() {
            if e.len() != 2 {
                return Err(InstanceError::NotAGraphEdge {
                    edge: id,
                    size: e.len(),
                });
            }
            edges.push((e[0], e[1]));
        }
        Graph::new(h.n(), &edges)
    }

    /// Subgraph induced on `keep` (a membership mask), renumbered
    /// compactly. Returns the graph and the map new id -> old id.
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<VertexId>) {
        let mut new_id = vec![usize::MAX; self.n];
        let mut old_id = Vec::new();
        for v in 0..self.n {
            if keep[v] {
                new_id[v] = old_id.len();
                old_id.push(v);
            }
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|&&(u, v)| keep[u] && keep[v])
            .map(|&(u, v)| (new_id[u], new_id[v]))
            .collect();
        (
            Graph::new(old_id.len(), &edges).expect("induced subgraph"),
            old_id,
        )
    }

    /// Vertices within `radius` hops of `v`, as a membership mask.
    pub fn ball(&self, v: VertexId, radius: usize) -> Vec<bool> {
        let mut inside = vec![false; self.n];
        inside[v] = true;
        let mut frontier = vec![v];
        for _ in 0..radius {
            let mut next = Vec::new();
            for &u in &frontier {
                for &w in &self.adjacency[u] {
                    if !inside[w] {
                        inside[w] = true;
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        inside
    }
}

/// One vertex per hyperedge, adjacent iff the hyperedges intersect.
/// Parallel hyperedges are adjacent to each other.
pub fn line_graph(h: &Hypergraph) -> Graph {
    let mut pairs = BTreeSet::new();
    for v in 0..h.n() {
        let inc = h.incident(v);
        for (i, &e) in inc.iter().enumerate() {
            for &f in &inc[i + 1..] {
                pairs.insert((e.min(f), e.max(f)));
            }
        }
    }
    let edges: Vec<_> = pairs.into_iter().collect();
    Graph::new(h.m(), &edges).expect("line graph is simple")
}

/// A set of hyperedge ids, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    edges: Vec<EdgeId>,
}

impl Matching {
    pub fn new(mut edges: Vec<EdgeId>) -> Matching {
        edges.sort_unstable();
        edges.dedup();
        Matching { edges }
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MatchingViolation {
    #[error("edge id {0} does not exist")]
    UnknownEdge(EdgeId),
    #[error("edges {first} and {second} share vertex {vertex}")]
    Overlap {
        first: EdgeId,
        second: EdgeId,
        vertex: VertexId,
    },
    #[error("edge {0} is disjoint from every matched edge")]
    NotMaximal(EdgeId),
}

/// Pairwise disjointness, and with `require_maximal` that every hyperedge
/// touches a matched vertex.
pub fn validate_matching(
    h: &Hypergraph,
    m: &Matching,
    require_maximal: bool,
) -> Result<(), MatchingViolation> {
    let mut owner: Vec<Option<EdgeId>> = vec![None; h.n()];
    for &e in m.edges() {
        if e >= h.m() {
            return Err(MatchingViolation::UnknownEdge(e));
        }
        for &v in h.edge(e) {
            if let Some(first) = owner[v] {
                return Err(MatchingViolation::Overlap {
                    first,
                    second: e,
                    vertex: v,
                });
            }
            owner[v] = Some(e);
        }
    }
    if require_maximal {
        for (e, verts) in h.edges().iter().enumerate() {
            if verts.iter().all(|&v| owner[v].is_none()) {
                return Err(MatchingViolation::NotMaximal(e));
            }
        }
    }
    Ok(())
}

/// Exact non-negative values on hyperedges (or nodes) together with the
/// fractionality floor they promise: every nonzero value is at least
/// `floor`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalAssignment {
    values: Vec<Dyadic>,
    floor: Dyadic,
}

impl FractionalAssignment {
    pub fn zeros(len: usize, floor: Dyadic) -> Self {
        FractionalAssignment {
            values: vec![Dyadic::ZERO; len],
            floor,
        }
    }

    pub fn from_values(values: Vec<Dyadic>, floor: Dyadic) -> Self {
        FractionalAssignment { values, floor }
    }

    pub fn values(&self) -> &[Dyadic] {
        &self.values
    }

    pub fn get(&self, i: usize) -> Dyadic {
        self.values[i]
    }

    pub fn set(&mut self, i: usize, v: Dyadic) {
        self.values[i] = v;
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn floor(&self) -> Dyadic {
        self.floor
    }

    pub fn with_floor(mut self, floor: Dyadic) -> Self {
        self.floor = floor;
        self
    }

    pub fn total(&self) -> Dyadic {
        self.values.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| !self.values[i].is_zero())
            .collect()
    }

    pub fn min_nonzero(&self) -> Option<Dyadic> {
        self.values.iter().copied().filter(|v| !v.is_zero()).min()
    }

    /// Every nonzero value is at least `floor`.
    pub fn respects_floor(&self, floor: Dyadic) -> bool {
        self.values.iter().all(|v| v.is_zero() || *v >= floor)
    }

    /// Exact per-vertex load `sum_{e in E(v)} x_e`.
    pub fn vertex_load(&self, h: &Hypergraph, v: VertexId) -> Dyadic {
        h.incident(v).iter().map(|&e| self.values[e]).sum()
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FractionalViolation {
    #[error("assignment has {got} values but the hypergraph has {expected} edges")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vertex {vertex} has load {load} > 1")]
    Overloaded { vertex: VertexId, load: Dyadic },
    #[error("edge {edge} has value {value} below the floor {floor}")]
    BelowFloor {
        edge: EdgeId,
        value: Dyadic,
        floor: Dyadic,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalReport {
    pub violation: Option<FractionalViolation>,
    /// Vertices with load at least 1/2, increasing.
    pub half_tight: Vec<VertexId>,
}

impl FractionalReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

pub fn validate_fractional_matching(h: &Hypergraph, x: &FractionalAssignment) -> FractionalReport {
    if x.len() != h.m() {
        return FractionalReport {
            violation: Some(FractionalViolation::LengthMismatch {
                expected: h.m(),
                got: x.len(),
            }),
            half_tight: Vec::new(),
        };
    }
    let mut violation = x
        .values()
        .iter()
        .enumerate()
        .find(|(_, v)| !v.is_zero() && **v < x.floor())
        .map(|(e, &value)| FractionalViolation::BelowFloor {
            edge: e,
            value,
            floor: x.floor(),
        });
    let mut half_tight = Vec::new();
    for v in 0..h.n() {
        let load = x.vertex_load(h, v);
        if load > Dyadic::ONE && violation.is_none() {
            violation = Some(FractionalViolation::Overloaded { vertex: v, load });
        }
        if load >= Dyadic::half() {
            half_tight.push(v);
        }
    }
    FractionalReport {
        violation,
        half_tight,
    }
}
