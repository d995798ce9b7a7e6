//! Exhaustive ground truth for small instances. Each oracle refuses inputs
//! above its budget instead of running for an unbounded time.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{EdgeId, Graph, Hypergraph, Matching, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    pub matching_edges: usize,
    pub independent_set_nodes: usize,
    pub arboricity_nodes: usize,
    pub enumeration_edges: usize,
    /// Largest neighborhood searched by the neighborhood independence
    /// oracle.
    pub neighborhood_nodes: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            matching_edges: 24,
            independent_set_nodes: 26,
            arboricity_nodes: 14,
            enumeration_edges: 12,
            neighborhood_nodes: 26,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{what} is {size}, over the budget of {budget}")]
    OverBudget {
        what: &'static str,
        size: usize,
        budget: usize,
    },
}

fn within(what: &'static str, size: usize, budget: usize) -> Result<(), OracleError> {
    if size > budget {
        return Err(OracleError::OverBudget { what, size, budget });
    }
    Ok(())
}

/// Maximum matching by branch and bound over edges in id order.
pub fn max_matching(h: &Hypergraph, budget: &OracleBudget) -> Result<Matching, OracleError> {
    within("edge count", h.m(), budget.matching_edges)?;
    struct Search<'a> {
        h: &'a Hypergraph,
        used: Vec<bool>,
        current: Vec<EdgeId>,
        best: Vec<EdgeId>,
    }
    impl Search<'_> {
        fn go(&mut self, e: EdgeId) {
            if self.current.len() + (self.h.m() - e) <= self.best.len() {
                return;
            }
            if e == self.h.m() {
                self.best = self.current.clone();
                return;
            }
            if self.h.edge(e).iter().all(|&v| !self.used[v]) {
                for &v in self.h.edge(e) {
                    self.used[v] = true;
                }
                self.current.push(e);
                self.go(e + 1);
                self.current.pop();
                for &v in self.h.edge(e) {
                    self.used[v] = false;
                }
            }
            self.go(e + 1);
        }
    }
    let mut s = Search {
        h,
        used: vec![false; h.n()],
        current: Vec::new(),
        best: Vec::new(),
    };
    s.go(0);
    Ok(Matching::new(s.best))
}

/// Maximum matching size by checking every edge subset. Second
/// implementation for cross-checks; intended for at most ~20 edges.
pub fn max_matching_by_subsets(h: &Hypergraph, budget: &OracleBudget) -> Result<usize, OracleError> {
    within("edge count", h.m(), budget.matching_edges.min(20))?;
    let mut best = 0;
    for mask in 0u32..(1u32 << h.m()) {
        let k = mask.count_ones() as usize;
        if k <= best {
            continue;
        }
        let mut used = vec![false; h.n()];
        let ok = (0..h.m()).filter(|&e| mask >> e & 1 == 1).all(|e| {
            h.edge(e).iter().all(|&v| !std::mem::replace(&mut used[v], true))
        });
        if ok {
            best = k;
        }
    }
    Ok(best)
}

fn neighbor_masks(g: &Graph) -> Vec<u64> {
    (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << u))
        .collect()
}

fn max_independent_in(adj: &[u64], candidates: u64) -> u64 {
    if candidates == 0 {
        return 0;
    }
    let v = candidates.trailing_zeros() as usize;
    let rest = candidates & !(1 << v);
    // a node with no candidate neighbors is always worth taking
    if adj[v] & rest == 0 {
        return 1 << v | max_independent_in(adj, rest);
    }
    let with = 1 << v | max_independent_in(adj, rest & !adj[v]);
    let without = max_independent_in(adj, rest);
    if with.count_ones() >= without.count_ones() {
        with
    } else {
        without
    }
}

/// Maximum independent set by branching on the lowest-id candidate.
pub fn max_independent_set(g: &Graph, budget: &OracleBudget) -> Result<Vec<VertexId>, OracleError> {
    within("node count", g.n(), budget.independent_set_nodes.min(63))?;
    let adj = neighbor_masks(g);
    let all = if g.n() == 0 { 0 } else { u64::MAX >> (64 - g.n()) };
    let best = max_independent_in(&adj, all);
    Ok((0..g.n()).filter(|&v| best >> v & 1 == 1).collect())
}

/// Independence number by checking every node subset. Second
/// implementation for cross-checks.
pub fn independence_number_by_subsets(g: &Graph, budget: &OracleBudget) -> Result<usize, OracleError> {
    within("node count", g.n(), budget.independent_set_nodes.min(20))?;
    let adj = neighbor_masks(g);
    let mut best = 0;
    for mask in 0u64..(1u64 << g.n()) {
        let k = mask.count_ones() as usize;
        if k > best && (0..g.n()).all(|v| mask >> v & 1 == 0 || adj[v] & mask == 0) {
            best = k;
        }
    }
    Ok(best)
}

/// Arboricity as the maximum of `ceil(|E(S)| / (|S| - 1))` over node
/// subsets with at least two nodes.
pub fn arboricity(g: &Graph, budget: &OracleBudget) -> Result<usize, OracleError> {
    within("node count", g.n(), budget.arboricity_nodes)?;
    let adj = neighbor_masks(g);
    let mut best = 0;
    for mask in 1u64..(1u64 << g.n()) {
        let k = mask.count_ones() as usize;
        if k < 2 {
            continue;
        }
        let edges: usize = (0..g.n())
            .filter(|&v| mask >> v & 1 == 1)
            .map(|v| (adj[v] & mask).count_ones() as usize)
            .sum::<usize>()
            / 2;
        best = best.max(edges.div_ceil(k - 1));
    }
    Ok(best)
}

/// Largest independence number of any node's neighborhood.
pub fn neighborhood_independence(g: &Graph, budget: &OracleBudget) -> Result<usize, OracleError> {
    let adj = sorted_neighbors(g);
    let mut best = 0;
    for v in 0..g.n() {
        let nb = g.neighbors(v);
        within("neighborhood size", nb.len(), budget.neighborhood_nodes.min(63))?;
        let local: Vec<u64> = nb
            .iter()
            .map(|&u| {
                nb.iter()
                    .enumerate()
                    .filter(|&(_, w)| adj[u].binary_search(w).is_ok())
                    .fold(0u64, |m, (i, _)| m | 1 << i)
            })
            .collect();
        let all = if nb.is_empty() { 0 } else { u64::MAX >> (64 - nb.len()) };
        best = best.max(max_independent_in(&local, all).count_ones() as usize);
    }
    Ok(best)
}

fn sorted_neighbors(g: &Graph) -> Vec<Vec<VertexId>> {
    (0..g.n())
        .map(|v| {
            let mut nb = g.neighbors(v).to_vec();
            nb.sort_unstable();
            nb
        })
        .collect()
}

/// Every maximal matching, each as a sorted edge list, in lexicographic
/// order.
pub fn enumerate_maximal_matchings(
    h: &Hypergraph,
    budget: &OracleBudget,
) -> Result<Vec<Matching>, OracleError> {
    within("edge count", h.m(), budget.enumeration_edges)?;
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << h.m()) {
        let chosen: Vec<EdgeId> = (0..h.m()).filter(|&e| mask >> e & 1 == 1).collect();
        let mut used = vec![false; h.n()];
        let disjoint = chosen
            .iter()
            .all(|&e| h.edge(e).iter().all(|&v| !std::mem::replace(&mut used[v], true)));
        if !disjoint {
            continue;
        }
        let maximal = (0..h.m())
            .filter(|&e| mask >> e & 1 == 0)
            .all(|e| h.edge(e).iter().any(|&v| used[v]));
        if maximal {
            out.push(Matching::new(chosen));
        }
    }
    out.sort_by(|a, b| a.edges().cmp(b.edges()));
    Ok(out)
}

/// Whether some order of the nodes makes `values` a greedy packing:
/// each node's value plus the values of its earlier neighbors is at most
/// `limit`. Values are compared as integers scaled by a common denominator.
pub fn greedy_packing_order_exists(g: &Graph, scaled: &[u64], limit: u64) -> bool {
    let n = g.n();
    assert!(n <= 10, "permutation oracle is for tiny graphs");
    let mut order: Vec<usize> = (0..n).collect();
    fn permute(k: usize, order: &mut Vec<usize>, g: &Graph, x: &[u64], limit: u64) -> bool {
        if k == order.len() {
            let mut pos = vec![0; order.len()];
            for (i, &v) in order.iter().enumerate() {
                pos[v] = i;
            }
            return (0..order.len()).all(|v| {
                let earlier: u64 = g
                    .neighbors(v)
                    .iter()
                    .filter(|&&u| pos[u] < pos[v])
                    .map(|&u| x[u])
                    .sum();
                x[v] + earlier <= limit
            });
        }
        for i in k..order.len() {
            order.swap(k, i);
            if permute(k + 1, order, g, x, limit) {
                return true;
            }
            order.swap(k, i);
        }
        false
    }
    permute(0, &mut order, g, scaled, limit)
}
