//! Graph problems solved by maximal matching in path hypergraphs:
//! approximate maximum matching by short augmenting paths, and low
//! out-degree orientation by reversing excess-to-deficit paths.

use std::collections::VecDeque;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{EdgeId, Graph, Hypergraph, Matching, VertexId};
use crate::ledger::Session;
use crate::rounding::maximal_matching;

/// Default limit on enumerated augmenting paths per phase.
pub const PATH_CAP: usize = 200_000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ApplicationError {
    #[error("eps must lie in (0, 1], got {0}")]
    BadEps(Ratio<u64>),
    #[error("more than {cap} augmenting paths of length {length}")]
    PathCap { length: usize, cap: usize },
    #[error("out-degree {max} exceeds {bound} after {iterations} iterations; lambda is below the arboricity")]
    BoundUnmet {
        bound: usize,
        max: usize,
        iterations: usize,
    },
    #[error("lambda must be positive")]
    ZeroLambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Disjointness {
    Vertex,
    Edge,
}

/// Paths as node sequences, with the kind of disjointness they promise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentingPathSet {
    pub paths: Vec<Vec<VertexId>>,
    pub mode: Disjointness,
}

impl AugmentingPathSet {
    pub fn is_disjoint(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        for p in &self.paths {
            let ok = match self.mode {
                Disjointness::Vertex => p.iter().all(|&v| seen.insert((v, usize::MAX))),
                Disjointness::Edge => p
                    .windows(2)
                    .all(|w| seen.insert((w[0].min(w[1]), w[0].max(w[1])))),
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchingMode {
    /// A maximal set of augmenting paths per phase.
    Exact,
    /// A capped driver per phase; nodes on paths left unblocked are
    /// dropped for the rest of the run.
    AlmostMaximal,
}

fn check_eps(eps: Ratio<u64>) -> Result<(), ApplicationError> {
    if *eps.numer() == 0 || eps > Ratio::from_integer(1) {
        return Err(ApplicationError::BadEps(eps));
    }
    Ok(())
}

/// `ceil(1/eps)`.
pub fn path_budget(eps: Ratio<u64>) -> usize {
    eps.recip().ceil().to_integer() as usize
}

/// Matched partner of every node.
pub fn mates(g: &Graph, m: &Matching) -> Vec<Option<VertexId>> {
    let mut mate = vec![None; g.n()];
    for &e in m.edges() {
        let (u, v) = g.edge(e);
        mate[u] = Some(v);
        mate[v] = Some(u);
    }
    mate
}

/// All augmenting paths with exactly `length` edges (odd), each listed
/// once with the smaller endpoint first, avoiding `removed` nodes.
pub fn augmenting_paths(
    g: &Graph,
    m: &Matching,
    length: usize,
    removed: &[bool],
    cap: usize,
) -> Result<Vec<Vec<VertexId>>, ApplicationError> {
    assert!(length % 2 == 1);
    let mate = mates(g, m);
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(length + 1);
    let mut on_path = vec![false; g.n()];

    #[allow(clippy::too_many_arguments)]
    fn extend(
        g: &Graph,
        mate: &[Option<VertexId>],
        removed: &[bool],
        length: usize,
        cap: usize,
        path: &mut Vec<VertexId>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<VertexId>>,
    ) -> Result<(), ApplicationError> {
        let u = *path.last().unwrap();
        let edges = path.len() - 1;
        if edges % 2 == 1 {
            // just crossed a non-matching edge
            match mate[u] {
                None if edges == length && u > path[0] => {
                    if out.len() == cap {
                        return Err(ApplicationError::PathCap { length, cap });
                    }
                    out.push(path.clone());
                    return Ok(());
                }
                None => return Ok(()),
                Some(_) if edges == length => return Ok(()),
                Some(w) => {
                    if on_path[w] || removed[w] {
                        return Ok(());
                    }
                    path.push(w);
                    on_path[w] = true;
                    extend(g, mate, removed, length, cap, path, on_path, out)?;
                    on_path[w] = false;
                    path.pop();
                    return Ok(());
                }
            }
        }
        for &w in g.neighbors(u) {
            if on_path[w] || removed[w] || mate[u] == Some(w) {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            extend(g, mate, removed, length, cap, path, on_path, out)?;
            on_path[w] = false;
            path.pop();
        }
        Ok(())
    }

    for start in 0..g.n() {
        if mate[start].is_some() || removed[start] {
            continue;
        }
        path.clear();
        path.push(start);
        on_path[start] = true;
        extend(g, &mate, removed, length, cap, &mut path, &mut on_path, &mut out)?;
        on_path[start] = false;
    }
    Ok(out)
}

/// One hypergraph vertex per node (used for free endpoints) and one per
/// matching edge (id `n + position in m`); each path becomes the hyperedge
/// of its endpoints and matching edges.
pub fn path_hypergraph(g: &Graph, m: &Matching, paths: &[Vec<VertexId>]) -> Hypergraph {
    let mut slot = std::collections::HashMap::new();
    for (i, &e) in m.edges().iter().enumerate() {
        slot.insert(g.edge(e), g.n() + i);
    }
    let edges = paths
        .iter()
        .map(|p| {
            let mut he = vec![p[0], p[p.len() - 1]];
            for j in (1..p.len() - 1).step_by(2) {
                let key = (p[j].min(p[j + 1]), p[j].max(p[j + 1]));
                he.push(slot[&key]);
            }
            he
        })
        .collect();
    Hypergraph::new(g.n() + m.len(), edges).expect("paths are simple")
}

fn edge_id(g: &Graph, u: VertexId, v: VertexId) -> EdgeId {
    let (a, b) = (u.min(v), u.max(v));
    *g.incident_edges(a)
        .iter()
        .find(|&&e| g.edge(e) == (a, b))
        .expect("path uses graph edges")
}

fn augment(g: &Graph, m: &Matching, paths: &[&Vec<VertexId>]) -> Matching {
    let mut inside: std::collections::BTreeSet<EdgeId> = m.edges().iter().copied().collect();
    for p in paths {
        for (j, w) in p.windows(2).enumerate() {
            let e = edge_id(g, w[0], w[1]);
            if j % 2 == 0 {
                inside.insert(e);
            } else {
                inside.remove(&e);
            }
        }
    }
    Matching::new(inside.into_iter().collect())
}

/// `(1+eps)`-approximate maximum matching: for each odd length up to
/// `2 ceil(1/eps) - 1`, augment along a maximal set of vertex-disjoint
/// augmenting paths of that length. Almost-maximal mode gives `1 + 2 eps`.
pub fn approx_max_graph_matching(
    g: &Graph,
    eps: Ratio<u64>,
    mode: MatchingMode,
    session: &mut Session<'_>,
) -> Result<Matching, ApplicationError> {
    check_eps(eps)?;
    let k = path_budget(eps);
    let mut m = Matching::default();
    let mut removed = vec![false; g.n()];
    let slack = match mode {
        MatchingMode::Exact => None,
        MatchingMode::AlmostMaximal => {
            let e = *eps.numer() as f64 / *eps.denom() as f64;
            Some(e * (g.max_degree().max(2) as f64).powi(-(k as i32)) / 4.0)
        }
    };
    for length in (1..2 * k).step_by(2) {
        let paths = augmenting_paths(g, &m, length, &removed, PATH_CAP)?;
        if paths.is_empty() {
            continue;
        }
        let h = path_hypergraph(g, &m, &paths);
        let mut local = Session::new();
        let out = maximal_matching(&h, slack, &mut local);
        session.charge(
            "augmenting_phase",
            "path length x hypergraph rounds",
            local.ledger.total() * length as u64,
        );
        for &p in &out.unblocked {
            for &v in &paths[p] {
                removed[v] = true;
            }
        }
        let chosen: Vec<&Vec<VertexId>> = out.matching.edges().iter().map(|&p| &paths[p]).collect();
        let before = m.len();
        m = augment(g, &m, &chosen);
        debug_assert_eq!(m.len(), before + chosen.len());
    }
    Ok(m)
}

/// A direction for every edge of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    arcs: Vec<(VertexId, VertexId)>,
    out_degree: Vec<usize>,
}

impl Orientation {
    /// Every edge from its smaller to its larger endpoint.
    pub fn by_id(g: &Graph) -> Orientation {
        Self::from_arcs(g, g.edges().to_vec()).expect("edges of g")
    }

    /// `arcs[e]` must be edge `e` of `g` in one of its two directions.
    pub fn from_arcs(g: &Graph, arcs: Vec<(VertexId, VertexId)>) -> Option<Orientation> {
        if arcs.len() != g.m() {
            return None;
        }
        let mut out_degree = vec![0; g.n()];
        for (e, &(u, v)) in arcs.iter().enumerate() {
            if g.edge(e) != (u.min(v), u.max(v)) {
                return None;
            }
            out_degree[u] += 1;
        }
        Some(Orientation { arcs, out_degree })
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn tail(&self, e: EdgeId) -> VertexId {
        self.arcs[e].0
    }

    pub fn head(&self, e: EdgeId) -> VertexId {
        self.arcs[e].1
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out_degree[v]
    }

    pub fn max_out_degree(&self) -> usize {
        self.out_degree.iter().copied().max().unwrap_or(0)
    }

    pub fn reverse(&mut self, e: EdgeId) {
        let (u, v) = self.arcs[e];
        self.out_degree[u] -= 1;
        self.out_degree[v] += 1;
        self.arcs[e] = (v, u);
    }

    /// Sum over nodes of the out-degree above `bound`.
    pub fn excess(&self, bound: usize) -> usize {
        self.out_degree.iter().map(|&d| d.saturating_sub(bound)).sum()
    }
}

/// `ceil((1 + eps) lambda)`.
pub fn outdegree_target(lambda: usize, eps: Ratio<u64>) -> usize {
    ((Ratio::from_integer(1) + eps) * Ratio::from_integer(lambda as u64))
        .ceil()
        .to_integer() as usize
}

/// `ceil(4 log2 n / eps)`.
pub fn orientation_iterations(n: usize, eps: Ratio<u64>) -> usize {
    if n < 2 {
        return 0;
    }
    let e = *eps.numer() as f64 / *eps.denom() as f64;
    (4.0 * (n as f64).log2() / e).ceil() as usize
}

/// Directed paths from an over-budget node to an under-budget node with
/// exactly `edges` arcs, where every node sits at its BFS distance from the
/// over-budget set. These are all the shortest augmenting paths when the
/// shortest has `edges` arcs, and there are none otherwise.
fn layered_paths(
    g: &Graph,
    o: &Orientation,
    bound: usize,
    edges: usize,
    cap: usize,
) -> Result<Vec<Vec<EdgeId>>, ApplicationError> {
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if o.out_degree(v) > bound {
            dist[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &e in g.incident_edges(u) {
            if o.tail(e) == u && dist[o.head(e)] == usize::MAX {
                dist[o.head(e)] = dist[u] + 1;
                queue.push_back(o.head(e));
            }
        }
    }
    let shortest = (0..n)
        .filter(|&v| o.out_degree(v) < bound && dist[v] != usize::MAX)
        .map(|v| dist[v])
        .min();
    if shortest != Some(edges) {
        debug_assert!(shortest.map_or(true, |s| s >= edges));
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut stack: Vec<(VertexId, Vec<EdgeId>)> =
        (0..n).filter(|&v| dist[v] == 0).map(|v| (v, Vec::new())).collect();
    while let Some((u, p)) = stack.pop() {
        if p.len() == edges {
            if o.out_degree(u) < bound {
                if out.len() == cap {
                    return Err(ApplicationError::PathCap { length: edges + 2, cap });
                }
                out.push(p);
            }
            continue;
        }
        for &e in g.incident_edges(u) {
            if o.tail(e) == u && dist[o.head(e)] == dist[u] + 1 {
                let mut q = p.clone();
                q.push(e);
                stack.push((o.head(e), q));
            }
        }
    }
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationOutcome {
    pub orientation: Orientation,
    pub bound: usize,
    pub iterations: usize,
    /// Paths reversed in each iteration.
    pub reversed: Vec<usize>,
}

/// Orientation with out-degree at most `ceil((1 + eps) lambda)`, valid when
/// `lambda` is at least the arboricity.
///
/// Iteration `i` builds a hypergraph with one vertex per graph edge, per
/// source unit (one for each out-degree unit above the bound) and per sink
/// unit (one for each unit of spare capacity), and one hyperedge per
/// (source unit, path, sink unit) for paths of `3 + i` arcs counting the
/// source and sink arcs. A maximal matching picks edge-disjoint paths, and
/// each is reversed.
pub fn low_outdegree_orientation(
    g: &Graph,
    lambda: usize,
    eps: Ratio<u64>,
    session: &mut Session<'_>,
) -> Result<OrientationOutcome, ApplicationError> {
    if *eps.numer() == 0 {
        return Err(ApplicationError::BadEps(eps));
    }
    if lambda == 0 && g.m() > 0 {
        return Err(ApplicationError::ZeroLambda);
    }
    let bound = outdegree_target(lambda, eps);
    let rounds = orientation_iterations(g.n(), eps);
    let mut o = Orientation::by_id(g);
    let mut reversed = Vec::new();
    let mut iterations = 0;
    for i in 0..rounds {
        if o.excess(bound) == 0 {
            break;
        }
        iterations += 1;
        let paths = layered_paths(g, &o, bound, i + 1, PATH_CAP)?;
        if paths.is_empty() {
            reversed.push(0);
            continue;
        }
        let m = g.m();
        let mut source_unit = vec![0; g.n()];
        let mut sink_unit = vec![0; g.n()];
        let mut next = m;
        for v in 0..g.n() {
            source_unit[v] = next;
            next += o.out_degree(v).saturating_sub(bound);
        }
        for v in 0..g.n() {
            sink_unit[v] = next;
            next += bound.saturating_sub(o.out_degree(v));
        }
        let mut edges = Vec::new();
        let mut owner = Vec::new();
        for (pi, p) in paths.iter().enumerate() {
            let s = o.tail(p[0]);
            let t = o.head(p[p.len() - 1]);
            for a in 0..o.out_degree(s) - bound {
                for b in 0..bound - o.out_degree(t) {
                    let mut he = p.clone();
                    he.push(source_unit[s] + a);
                    he.push(sink_unit[t] + b);
                    edges.push(he);
                    owner.push(pi);
                    if edges.len() > PATH_CAP {
                        return Err(ApplicationError::PathCap {
                            length: i + 3,
                            cap: PATH_CAP,
                        });
                    }
                }
            }
        }
        let h = Hypergraph::new(next, edges).expect("path hyperedges are simple");
        let mut local = Session::new();
        let out = maximal_matching(&h, None, &mut local);
        session.charge(
            "orientation_iteration",
            "path length x hypergraph rounds",
            local.ledger.total() * (i as u64 + 3),
        );
        let before = o.excess(bound);
        for &he in out.matching.edges() {
            for &e in &paths[owner[he]] {
                o.reverse(e);
            }
        }
        assert_eq!(o.excess(bound), before - out.matching.len());
        reversed.push(out.matching.len());
    }
    if o.max_out_degree() > bound {
        return Err(ApplicationError::BoundUnmet {
            bound,
            max: o.max_out_degree(),
            iterations,
        });
    }
    Ok(OrientationOutcome {
        orientation: o,
        bound,
        iterations,
        reversed,
    })
}

/// Class (from 1) of each edge: its rank among its tail's outgoing edges,
/// in edge id order. Each class gives every node out-degree at most 1.
pub fn pseudo_forest_decomposition(g: &Graph, o: &Orientation) -> Vec<usize> {
    let mut seen = vec![0usize; g.n()];
    (0..g.m())
        .map(|e| {
            seen[o.tail(e)] += 1;
            seen[o.tail(e)]
        })
        .collect()
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PseudoForestViolation {
    #[error("{got} classes for {expected} edges")]
    LengthMismatch { expected: usize, got: usize },
    #[error("class {class} has a component with {edges} edges on {nodes} nodes")]
    TwoCycles {
        class: usize,
        nodes: usize,
        edges: usize,
    },
}

/// Every class has at most one cycle per connected component, i.e. no
/// component with more edges than nodes.
pub fn validate_pseudo_forests(g: &Graph, classes: &[usize]) -> Result<(), PseudoForestViolation> {
    if classes.len() != g.m() {
        return Err(PseudoForestViolation::LengthMismatch {
            expected: g.m(),
            got: classes.len(),
        });
    }
    let mut ids: Vec<usize> = classes.to_vec();
    ids.sort_unstable();
    ids.dedup();
    for class in ids {
        let mut parent: Vec<usize> = (0..g.n()).collect();
        fn find(p: &mut [usize], mut v: usize) -> usize {
            while p[v] != v {
                p[v] = p[p[v]];
                v = p[v];
            }
            v
        }
        let members: Vec<EdgeId> = (0..g.m()).filter(|&e| classes[e] == class).collect();
        for &e in &members {
            let (u, v) = g.edge(e);
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            if a != b {
                parent[a] = b;
            }
        }
        let mut nodes = vec![0usize; g.n()];
        let mut edges = vec![0usize; g.n()];
        let mut touched = vec![false; g.n()];
        for &e in &members {
            let (u, v) = g.edge(e);
            touched[u] = true;
            touched[v] = true;
            let root = find(&mut parent, u);
            edges[root] += 1;
        }
        for v in 0..g.n() {
            if touched[v] {
                let root = find(&mut parent, v);
                nodes[root] += 1;
            }
        }
        for v in 0..g.n() {
            if edges[v] > nodes[v] {
                return Err(PseudoForestViolation::TwoCycles {
                    class,
                    nodes: nodes[v],
                    edges: edges[v],
                });
            }
        }
    }
    Ok(())
}
