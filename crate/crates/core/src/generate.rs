//! Deterministic instance families for experiments and tests.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::format::Instance;
use crate::hypergraph::{line_graph, Graph, Hypergraph};

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// `m` hyperedges, each on a uniformly random set of `2..=r` vertices
    /// (exactly 1 when `r = 1`).
    RandomHypergraph { n: usize, m: usize, r: usize },
    /// Each pair is an edge with probability `p`.
    RandomGraph { n: usize, p: f64 },
    /// Random `d`-regular graph by the pairing model with restarts.
    Regular { n: usize, d: usize },
    /// Center 0 joined to `leaves` leaves.
    Star { leaves: usize },
    Cycle { n: usize },
    Path { n: usize },
    Complete { n: usize },
    LineGraphOf(Hypergraph),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

fn infeasible(msg: impl Into<String>) -> GenerateError {
    GenerateError::Infeasible(msg.into())
}

const PAIRING_ATTEMPTS: usize = 1000;

fn regular(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<Graph, GenerateError> {
    if d >= n.max(1) && !(n == 0 && d == 0) {
        return Err(infeasible(format!("degree {d} needs more than {n} nodes")));
    }
    if n * d % 2 == 1 {
        return Err(infeasible("n * d must be even"));
    }
    'attempt: for _ in 0..PAIRING_ATTEMPTS {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(d)).collect();
        let mut edges = Vec::with_capacity(n * d / 2);
        let mut seen = std::collections::HashSet::new();
        while !stubs.is_empty() {
            let a = stubs.swap_remove(rng.gen_range(0..stubs.len()));
            let b = stubs.swap_remove(rng.gen_range(0..stubs.len()));
            let key = (a.min(b), a.max(b));
            if a == b || !seen.insert(key) {
                continue 'attempt;
            }
            edges.push(key);
        }
        return Ok(Graph::new(n, &edges).expect("pairing without loops or repeats"));
    }
    Err(infeasible(format!("no simple {d}-regular pairing found on {n} nodes")))
}

pub fn generate(family: &Family, seed: u64) -> Result<Instance, GenerateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = |n: usize, e: &[(usize, usize)]| Graph::new(n, e).expect("generated graph");
    Ok(match family {
        &Family::RandomHypergraph { n, m, r } => {
            if r == 0 || r > n {
                return Err(infeasible(format!("rank {r} with {n} vertices")));
            }
            let lo = r.min(2);
            let edges = (0..m)
                .map(|_| {
                    let k = rng.gen_range(lo..=r);
                    sample(&mut rng, n, k).into_vec()
                })
                .collect();
            Instance::Hypergraph(Hypergraph::new(n, edges).expect("generated hypergraph"))
        }
        &Family::RandomGraph { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(infeasible(format!("probability {p}")));
            }
            let mut e = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        e.push((u, v));
                    }
                }
            }
            Instance::Graph(graph(n, &e))
        }
        &Family::Regular { n, d } => Instance::Graph(regular(n, d, &mut rng)?),
        &Family::Star { leaves } => {
            let e: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
            Instance::Graph(graph(leaves + 1, &e))
        }
        &Family::Cycle { n } => {
            if n < 3 {
                return Err(infeasible("a cycle needs at least 3 nodes"));
            }
            let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            Instance::Graph(graph(n, &e))
        }
        &Family::Path { n } => {
            let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
            Instance::Graph(graph(n, &e))
        }
        &Family::Complete { n } => {
            let mut e = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    e.push((u, v));
                }
            }
            Instance::Graph(graph(n, &e))
        }
        Family::LineGraphOf(h) => Instance::Graph(line_graph(h)),
    })
}
