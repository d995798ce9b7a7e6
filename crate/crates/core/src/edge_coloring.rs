//! Edge coloring through hypergraph maximal matching.
//!
//! For every edge `e` and color `c` in its list, the reduction creates one
//! hyperedge made of the `c`-copies of `e`'s endpoints plus a private vertex
//! `w_e`. Equal colors on adjacent edges then share a copy vertex, and the
//! private vertex lets at most one copy of `e` into a matching. Maximality
//! forces exactly one, because `e` has more colors than neighbors.

use std::collections::HashMap;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{line_graph, EdgeId, Graph, Hypergraph, Matching, VertexId};
use crate::ledger::Session;
use crate::rounding::maximal_matching;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EdgeColoringError {
    #[error("edge {edge} has {size} distinct colors, needs at least {required}")]
    ListTooShort {
        edge: EdgeId,
        size: usize,
        required: usize,
    },
    #[error("{got} color lists for {expected} edges")]
    LengthMismatch { expected: usize, got: usize },
    #[error("edge {edge} has {count} matched copies")]
    Decode { edge: EdgeId, count: usize },
    #[error("peeling stalled with {remaining} nodes left above degree threshold {threshold}")]
    Stall { remaining: usize, threshold: usize },
    #[error("eps must be positive")]
    NonPositiveEps,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EdgeColoringViolation {
    #[error("{got} colors for {expected} edges")]
    LengthMismatch { expected: usize, got: usize },
    #[error("edges {0} and {1} share color {2}")]
    Conflict(EdgeId, EdgeId, usize),
    #[error("edge {edge} has color {color}, not in its list")]
    NotInList { edge: EdgeId, color: usize },
}

/// Adjacent hyperedges get different colors, and colors come from the
/// lists when given.
pub fn validate_hyperedge_coloring(
    h: &Hypergraph,
    colors: &[usize],
    lists: Option<&[Vec<usize>]>,
) -> Result<(), EdgeColoringViolation> {
    if colors.len() != h.m() {
        return Err(EdgeColoringViolation::LengthMismatch {
            expected: h.m(),
            got: colors.len(),
        });
    }
    if let Some(lists) = lists {
        for e in 0..h.m() {
            if !lists[e].contains(&colors[e]) {
                return Err(EdgeColoringViolation::NotInList {
                    edge: e,
                    color: colors[e],
                });
            }
        }
    }
    for v in 0..h.n() {
        let inc = h.incident(v);
        for (i, &e) in inc.iter().enumerate() {
            for &f in &inc[i + 1..] {
                if colors[e] == colors[f] {
                    return Err(EdgeColoringViolation::Conflict(e, f, colors[e]));
                }
            }
        }
    }
    Ok(())
}

pub fn validate_edge_coloring(
    g: &Graph,
    colors: &[usize],
    lists: Option<&[Vec<usize>]>,
) -> Result<(), EdgeColoringViolation> {
    validate_hyperedge_coloring(&g.to_hypergraph(), colors, lists)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListEdgeInstance {
    pub graph: Graph,
    pub lists: Vec<Vec<usize>>,
}

/// The matching instance plus, per hyperedge, the base edge and color it
/// stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub hypergraph: Hypergraph,
    pub decode: Vec<(EdgeId, usize)>,
    pub base_edges: usize,
}

fn distinct(list: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(list.len());
    for &c in list {
        if !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// Reduce list-edge-coloring of a rank-`r` hypergraph to maximal matching
/// in a rank-`(r+1)` hypergraph. Lists need more distinct colors than the
/// edge has intersecting edges.
pub fn reduce_hypergraph_list_edge_coloring(
    h: &Hypergraph,
    lists: &[Vec<usize>],
) -> Result<Reduction, EdgeColoringError> {
    if lists.len() != h.m() {
        return Err(EdgeColoringError::LengthMismatch {
            expected: h.m(),
            got: lists.len(),
        });
    }
    let lg = line_graph(h);
    let lists: Vec<Vec<usize>> = lists.iter().map(|l| distinct(l)).collect();
    for e in 0..h.m() {
        if lists[e].len() < lg.degree(e) + 1 {
            return Err(EdgeColoringError::ListTooShort {
                edge: e,
                size: lists[e].len(),
                required: lg.degree(e) + 1,
            });
        }
    }
    let mut ids: HashMap<(VertexId, usize), usize> = HashMap::new();
    let mut next = 0usize;
    let mut edges = Vec::new();
    let mut decode = Vec::new();
    let mut private = Vec::with_capacity(h.m());
    for e in 0..h.m() {
        for &c in &lists[e] {
            for &v in h.edge(e) {
                ids.entry((v, c)).or_insert_with(|| {
                    next += 1;
                    next - 1
                });
            }
        }
    }
    for _ in 0..h.m() {
        private.push(next);
        next += 1;
    }
    for e in 0..h.m() {
        for &c in &lists[e] {
            let mut he: Vec<usize> = h.edge(e).iter().map(|&v| ids[&(v, c)]).collect();
            he.push(private[e]);
            edges.push(he);
            decode.push((e, c));
        }
    }
    Ok(Reduction {
        hypergraph: Hypergraph::new(next, edges).expect("reduction builds a valid hypergraph"),
        decode,
        base_edges: h.m(),
    })
}

/// Rank-3 reduction of list-edge-coloring for graphs.
pub fn reduce_list_edge_coloring(inst: &ListEdgeInstance) -> Result<Reduction, EdgeColoringError> {
    reduce_hypergraph_list_edge_coloring(&inst.graph.to_hypergraph(), &inst.lists)
}

/// Lists `1..=2 Delta - 1` for every edge.
pub fn full_palette_lists(g: &Graph) -> Vec<Vec<usize>> {
    let k = (2 * g.max_degree()).saturating_sub(1);
    vec![(1..=k).collect(); g.m()]
}

/// Rank-3 reduction of `(2 Delta - 1)`-edge-coloring.
pub fn reduce_edge_coloring(g: &Graph) -> Reduction {
    reduce_list_edge_coloring(&ListEdgeInstance {
        graph: g.clone(),
        lists: full_palette_lists(g),
    })
    .expect("2 Delta - 1 colors exceed every edge degree")
}

/// Read one color per base edge off a matching of the reduced hypergraph.
pub fn decode_matching(red: &Reduction, m: &Matching) -> Result<Vec<usize>, EdgeColoringError> {
    let mut colors = vec![None; red.base_edges];
    let mut counts = vec![0usize; red.base_edges];
    for &he in m.edges() {
        let (e, c) = red.decode[he];
        colors[e] = Some(c);
        counts[e] += 1;
    }
    (0..red.base_edges)
        .map(|e| match (counts[e], colors[e]) {
            (1, Some(c)) => Ok(c),
            (count, _) => Err(EdgeColoringError::Decode { edge: e, count }),
        })
        .collect()
}

fn solve(red: &Reduction, session: &mut Session<'_>) -> Result<Vec<usize>, EdgeColoringError> {
    let out = maximal_matching(&red.hypergraph, None, session);
    decode_matching(red, &out.matching)
}

pub fn hypergraph_list_edge_color(
    h: &Hypergraph,
    lists: &[Vec<usize>],
    session: &mut Session<'_>,
) -> Result<Vec<usize>, EdgeColoringError> {
    solve(&reduce_hypergraph_list_edge_coloring(h, lists)?, session)
}

pub fn list_edge_color(
    inst: &ListEdgeInstance,
    session: &mut Session<'_>,
) -> Result<Vec<usize>, EdgeColoringError> {
    solve(&reduce_list_edge_coloring(inst)?, session)
}

/// Proper edge coloring with colors `1..=2 Delta - 1`.
pub fn edge_color(g: &Graph, session: &mut Session<'_>) -> Vec<usize> {
    solve(&reduce_edge_coloring(g), session).expect("decoding a maximal matching never fails")
}

/// Number of random trial rounds: `max(1, ceil(4 log2 Delta))`.
pub fn trial_rounds(delta: usize) -> usize {
    if delta <= 1 {
        1
    } else {
        ((4.0 * (delta as f64).log2()).ceil() as usize).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomizedOutcome {
    pub colors: Vec<usize>,
    pub trial_rounds: usize,
    /// Edges colored during the random trials, before the deterministic
    /// finish.
    pub colored_in_trials: usize,
}

fn components(g: &Graph, keep: &[EdgeId]) -> Vec<Vec<EdgeId>> {
    let mut parent: Vec<usize> = (0..g.n()).collect();
    fn find(p: &mut Vec<usize>, mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for &e in keep {
        let (u, v) = g.edge(e);
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<EdgeId>> = Default::default();
    for &e in keep {
        let root = find(&mut parent, g.edge(e).0);
        groups.entry(root).or_default().push(e);
    }
    groups.into_values().collect()
}

/// Color the edges in `batch` from `lists` (one per batch edge) with the
/// list algorithm, component by component. Components run in parallel, so
/// the ledger is charged with the slowest one.
fn finish_components(
    g: &Graph,
    batch: &[EdgeId],
    lists: &HashMap<EdgeId, Vec<usize>>,
    colors: &mut [usize],
    label: &str,
    session: &mut Session<'_>,
) -> Result<(), EdgeColoringError> {
    let mut slowest = 0;
    for comp in components(g, batch) {
        let pairs: Vec<(usize, usize)> = comp.iter().map(|&e| g.edge(e)).collect();
        let sub = Graph::new(g.n(), &pairs).expect("subgraph of a simple graph");
        let inst = ListEdgeInstance {
            graph: sub,
            lists: comp.iter().map(|e| lists[e].clone()).collect(),
        };
        let mut local = Session::new();
        let found = list_edge_color(&inst, &mut local)?;
        slowest = slowest.max(local.ledger.total());
        for (i, &e) in comp.iter().enumerate() {
            colors[e] = found[i];
        }
    }
    session.charge(label, "max over components", slowest);
    Ok(())
}

/// Random trials followed by the deterministic list algorithm on what is
/// left. Each trial round, every uncolored edge proposes a color from its
/// remaining palette and keeps it if no adjacent uncolored edge proposed the
/// same one.
pub fn randomized_edge_color(g: &Graph, seed: u64, session: &mut Session<'_>) -> RandomizedOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = (2 * g.max_degree()).saturating_sub(1);
    let mut palettes: Vec<Vec<usize>> = vec![(1..=k).collect(); g.m()];
    let mut colors = vec![0usize; g.m()];
    let mut done = vec![false; g.m()];
    let rounds = trial_rounds(g.max_degree());
    let adjacent = |e: EdgeId| -> Vec<EdgeId> {
        let (u, v) = g.edge(e);
        g.incident_edges(u)
            .iter()
            .chain(g.incident_edges(v))
            .copied()
            .filter(|&f| f != e)
            .collect()
    };
    for _ in 0..rounds {
        let open: Vec<EdgeId> = (0..g.m()).filter(|&e| !done[e]).collect();
        if open.is_empty() {
            break;
        }
        let mut proposal = vec![0usize; g.m()];
        for &e in &open {
            proposal[e] = palettes[e][rng.gen_range(0..palettes[e].len())];
        }
        let winners: Vec<EdgeId> = open
            .iter()
            .copied()
            .filter(|&e| {
                adjacent(e)
                    .iter()
                    .all(|&f| done[f] || proposal[f] != proposal[e])
            })
            .collect();
        for &e in &winners {
            colors[e] = proposal[e];
            done[e] = true;
        }
        for &e in &winners {
            for f in adjacent(e) {
                if !done[f] {
                    palettes[f].retain(|&c| c != colors[e]);
                }
            }
        }
    }
    session.charge("random_trials", "O(log Delta)", rounds as u64);
    let colored_in_trials = done.iter().filter(|&&d| d).count();
    let rest: Vec<EdgeId> = (0..g.m()).filter(|&e| !done[e]).collect();
    let lists: HashMap<EdgeId, Vec<usize>> = rest.iter().map(|&e| (e, palettes[e].clone())).collect();
    finish_components(g, &rest, &lists, &mut colors, "component_finish", session)
        .expect("residual palettes exceed residual degrees");
    RandomizedOutcome {
        colors,
        trial_rounds: rounds,
        colored_in_trials,
    }
}

/// Layers of an H-partition: every node of layer `i` has at most
/// `threshold` neighbors in layers `i` and later.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HPartition {
    pub layers: Vec<Vec<VertexId>>,
    pub layer_of: Vec<usize>,
    /// `floor((2 + eps) a)`: the largest integer degree allowed.
    pub threshold: usize,
}

fn degree_threshold(a: usize, eps: Ratio<u64>) -> usize {
    ((Ratio::from_integer(2) + eps) * Ratio::from_integer(a as u64)).to_integer() as usize
}

/// Peel all nodes of remaining degree at most `(2 + eps) a` at once, layer
/// by layer.
pub fn h_partition(
    g: &Graph,
    a: usize,
    eps: Ratio<u64>,
    session: &mut Session<'_>,
) -> Result<HPartition, EdgeColoringError> {
    if eps == Ratio::from_integer(0) {
        return Err(EdgeColoringError::NonPositiveEps);
    }
    let threshold = degree_threshold(a, eps);
    let mut alive = vec![true; g.n()];
    let mut degree: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    let mut layers = Vec::new();
    let mut layer_of = vec![usize::MAX; g.n()];
    let mut remaining = g.n();
    while remaining > 0 {
        let peel: Vec<VertexId> = (0..g.n())
            .filter(|&v| alive[v] && degree[v] <= threshold)
            .collect();
        if peel.is_empty() {
            return Err(EdgeColoringError::Stall {
                remaining,
                threshold,
            });
        }
        for &v in &peel {
            alive[v] = false;
            layer_of[v] = layers.len();
        }
        for &v in &peel {
            for &u in g.neighbors(v) {
                if alive[u] {
                    degree[u] -= 1;
                }
            }
        }
        remaining -= peel.len();
        layers.push(peel);
    }
    if layers.is_empty() {
        layers.push(Vec::new());
    }
    session.charge("h_partition", "O(log n / eps)", layers.len() as u64);
    Ok(HPartition {
        layers,
        layer_of,
        threshold,
    })
}

/// Palette size of [`arboricity_edge_color`]: `Delta + ceil((2 + eps) a) - 1`.
pub fn arboricity_palette(delta: usize, a: usize, eps: Ratio<u64>) -> usize {
    let t = ((Ratio::from_integer(2) + eps) * Ratio::from_integer(a as u64)).ceil().to_integer() as usize;
    (delta + t).saturating_sub(1)
}

/// Edge coloring with `Delta + ceil((2 + eps) a) - 1` colors, coloring the
/// edges introduced by each H-partition layer from the last layer to the
/// first with the list algorithm.
pub fn arboricity_edge_color(
    g: &Graph,
    a: usize,
    eps: Ratio<u64>,
    session: &mut Session<'_>,
) -> Result<Vec<usize>, EdgeColoringError> {
    let hp = h_partition(g, a, eps, session)?;
    let palette = arboricity_palette(g.max_degree(), a, eps);
    let mut colors = vec![0usize; g.m()];
    let mut colored = vec![false; g.m()];
    for layer in (0..hp.layers.len()).rev() {
        let batch: Vec<EdgeId> = (0..g.m())
            .filter(|&e| {
                let (u, v) = g.edge(e);
                hp.layer_of[u].min(hp.layer_of[v]) == layer
            })
            .collect();
        let mut lists = HashMap::new();
        for &e in &batch {
            let (u, v) = g.edge(e);
            let used: Vec<usize> = g
                .incident_edges(u)
                .iter()
                .chain(g.incident_edges(v))
                .filter(|&&f| colored[f])
                .map(|&f| colors[f])
                .collect();
            lists.insert(e, (1..=palette).filter(|c| !used.contains(c)).collect::<Vec<_>>());
        }
        finish_components(g, &batch, &lists, &mut colors, "layer_list_coloring", session)?;
        for &e in &batch {
            colored[e] = true;
        }
    }
    Ok(colors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::new(n, e).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        graph(n, &e)
    }

    fn eps(n: u64, d: u64) -> Ratio<u64> {
        Ratio::new(n, d)
    }

    #[test]
    fn reduction_sizes() {
        let single = graph(2, &[(0, 1)]);
        let red = reduce_edge_coloring(&single);
        assert_eq!(red.hypergraph.m(), 1);
        assert_eq!(red.hypergraph.rank(), 3);

        let tri = complete(3);
        let red = reduce_edge_coloring(&tri);
        assert_eq!(red.hypergraph.m(), 9);
        assert_eq!(red.hypergraph.rank(), 3);
        assert_eq!(red.hypergraph.max_degree(), 3);
        // private vertices are the last three and have degree 3 each
        let n = red.hypergraph.n();
        for w in n - 3..n {
            assert_eq!(red.hypergraph.degree(w), 3);
        }
        assert!(red.hypergraph.n() <= 3 * 3 * 2 + 3);
    }

    #[test]
    fn list_reduction_examples() {
        let mut s = Session::new();
        let single = ListEdgeInstance {
            graph: graph(2, &[(0, 1)]),
            lists: vec![vec![7]],
        };
        assert_eq!(reduce_list_edge_coloring(&single).unwrap().hypergraph.m(), 1);
        assert_eq!(list_edge_color(&single, &mut s).unwrap(), vec![7]);

        let path = ListEdgeInstance {
            graph: graph(3, &[(0, 1), (1, 2)]),
            lists: vec![vec![1, 2], vec![1, 2]],
        };
        let c = list_edge_color(&path, &mut s).unwrap();
        assert_ne!(c[0], c[1]);

        let short = ListEdgeInstance {
            graph: graph(3, &[(0, 1), (1, 2)]),
            lists: vec![vec![1, 1], vec![1, 2]],
        };
        assert_eq!(
            reduce_list_edge_coloring(&short),
            Err(EdgeColoringError::ListTooShort {
                edge: 0,
                size: 1,
                required: 2
            })
        );
    }

    #[test]
    fn hypergraph_reduction_examples() {
        let mut s = Session::new();
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let lists = vec![vec![1, 2], vec![1, 2, 3], vec![2, 3]];
        let a = reduce_list_edge_coloring(&ListEdgeInstance {
            graph: g.clone(),
            lists: lists.clone(),
        })
        .unwrap();
        let b = reduce_hypergraph_list_edge_coloring(&g.to_hypergraph(), &lists).unwrap();
        assert_eq!(a, b);

        let one = Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap();
        let red = reduce_hypergraph_list_edge_coloring(&one, &[vec![5]]).unwrap();
        assert_eq!(red.hypergraph.rank(), 4);
        assert_eq!(red.hypergraph.m(), 1);
        assert_eq!(hypergraph_list_edge_color(&one, &[vec![5]], &mut s).unwrap(), vec![5]);

        let two = Hypergraph::new(5, vec![vec![0, 1, 2], vec![2, 3, 4]]).unwrap();
        let c = hypergraph_list_edge_color(&two, &[vec![1, 2], vec![1, 2]], &mut s).unwrap();
        assert_ne!(c[0], c[1]);
    }

    #[test]
    fn plain_edge_coloring_examples() {
        let mut s = Session::new();
        let tri = complete(3);
        let c = edge_color(&tri, &mut s);
        assert!(validate_edge_coloring(&tri, &c, None).is_ok());
        assert!(c.iter().all(|&x| (1..=3).contains(&x)));

        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let c = edge_color(&star, &mut s);
        assert!(validate_edge_coloring(&star, &c, None).is_ok());
        assert!(c.iter().all(|&x| x <= 7));

        let petersen = graph(
            10,
            &[
                (0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
                (5, 7), (7, 9), (6, 9), (6, 8), (5, 8),
            ],
        );
        let c = edge_color(&petersen, &mut s);
        assert!(validate_edge_coloring(&petersen, &c, None).is_ok());
        assert!(c.iter().all(|&x| x <= 5));
    }

    #[test]
    fn validator_reports_conflict() {
        let path = graph(3, &[(0, 1), (1, 2)]);
        assert_eq!(
            validate_edge_coloring(&path, &[4, 4], None),
            Err(EdgeColoringViolation::Conflict(0, 1, 4))
        );
        assert_eq!(
            validate_edge_coloring(&path, &[1, 2], Some(&[vec![1], vec![3]])),
            Err(EdgeColoringViolation::NotInList { edge: 1, color: 2 })
        );
    }

    #[test]
    fn randomized_examples() {
        let single = graph(2, &[(0, 1)]);
        let out = randomized_edge_color(&single, 3, &mut Session::new());
        assert_eq!(out.colors, vec![1]);
        assert_eq!(out.colored_in_trials, 1);

        let k5 = complete(5);
        for seed in 0..20 {
            let a = randomized_edge_color(&k5, seed, &mut Session::new());
            assert!(validate_edge_coloring(&k5, &a.colors, None).is_ok());
            assert!(a.colors.iter().all(|&c| (1..=7).contains(&c)));
            let b = randomized_edge_color(&k5, seed, &mut Session::new());
            assert_eq!(a, b);
        }
    }

    #[test]
    fn h_partition_examples() {
        let mut s = Session::new();
        let star = graph(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        let hp = h_partition(&star, 1, eps(1, 1), &mut s).unwrap();
        assert_eq!(hp.layers, vec![vec![1, 2, 3, 4, 5], vec![0]]);

        let empty = Graph::empty(4);
        assert_eq!(h_partition(&empty, 1, eps(1, 1), &mut s).unwrap().layers.len(), 1);

        let k4 = complete(4);
        assert!(matches!(
            h_partition(&k4, 1, eps(1, 10), &mut s),
            Err(EdgeColoringError::Stall { remaining: 4, threshold: 2 })
        ));
    }

    #[test]
    fn arboricity_examples() {
        let mut s = Session::new();
        let tree = graph(7, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (1, 6)]);
        let c = arboricity_edge_color(&tree, 1, eps(1, 1), &mut s).unwrap();
        assert!(validate_edge_coloring(&tree, &c, None).is_ok());
        assert!(c.iter().all(|&x| x >= 1 && x <= 6));

        let c6: Vec<_> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
        let cyc = graph(6, &c6);
        let c = arboricity_edge_color(&cyc, 1, eps(1, 1), &mut s).unwrap();
        assert!(validate_edge_coloring(&cyc, &c, None).is_ok());
        assert!(c.iter().all(|&x| x <= 4));

        let k4 = complete(4);
        let c = arboricity_edge_color(&k4, 2, eps(1, 1), &mut s).unwrap();
        assert!(validate_edge_coloring(&k4, &c, None).is_ok());
        assert!(c.iter().all(|&x| x <= 8));
    }
}
