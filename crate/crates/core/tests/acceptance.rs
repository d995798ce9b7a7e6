//! Acceptance checks. Prints one PASS/FAIL line per criterion. Exits
//! nonzero on a failure only when `ACCEPTANCE_STRICT=1` is set, so the
//! report stays part of a plain `cargo test` run.

use std::time::Instant;

use hypermatch::applications::{
    approx_max_graph_matching, low_outdegree_orientation, outdegree_target,
    pseudo_forest_decomposition, validate_pseudo_forests, MatchingMode,
};
use hypermatch::coloring::edge_coloring_init;
use hypermatch::edge_coloring::{
    arboricity_edge_color, arboricity_palette, decode_matching, edge_color, list_edge_color,
    randomized_edge_color, reduce_hypergraph_list_edge_coloring, reduce_list_edge_coloring,
    validate_edge_coloring, ListEdgeInstance,
};
use hypermatch::format::Instance;
use hypermatch::generate::{generate, Family};
use hypermatch::hypergraph::{
    line_graph, validate_fractional_matching, validate_matching, FractionalAssignment,
};
use hypermatch::ledger::locality::{audit_locality, Perturbation, Primitive};
use hypermatch::ledger::{check_recurrence_bound, RecurrenceConstants, StepEvent, StepObserver};
use hypermatch::oracles::{self, OracleBudget};
use hypermatch::packing::{
    approx_mis, maximal_independent_set, validate_independent_set, verify_greedy_packing,
};
use hypermatch::rounding::{
    basic_round, greedy_fractional_matching, greedy_with_denominator, maximal_matching,
    recursive_round, RoundingParams,
};
use hypermatch::{Dyadic, Graph, Hypergraph, Session};
use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: &[String], summary: String) -> Outcome {
    match failures.first() {
        None => Outcome {
            pass: true,
            detail: summary,
        },
        Some(f) => Outcome {
            pass: false,
            detail: format!("{summary}; {} failures, first: {f}", failures.len()),
        },
    }
}

fn hyper(i: Instance) -> Hypergraph {
    match i {
        Instance::Hypergraph(h) => h,
        Instance::Graph(g) => g.to_hypergraph(),
    }
}

fn graph(i: Instance) -> Graph {
    match i {
        Instance::Graph(g) => g,
        Instance::Hypergraph(_) => unreachable!("family yields graphs"),
    }
}

/// The small hypergraph corpus of criteria 1 to 3.
fn small_corpus() -> Vec<Hypergraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..100)
        .map(|i| {
            let r = [2, 3, 4][i % 3];
            let n = rng.gen_range(r.max(4)..=20);
            let m = rng.gen_range(1..=24);
            hyper(generate(&Family::RandomHypergraph { n, m, r }, rng.gen()).unwrap())
        })
        .collect()
}

/// Random graph with at most `m` edges and maximum degree at most `cap`.
fn bounded_graph(rng: &mut ChaCha8Rng, n: usize, m: usize, cap: usize) -> Graph {
    let mut deg = vec![0; n];
    let mut edges = std::collections::BTreeSet::new();
    for _ in 0..4 * m {
        if edges.len() == m || n < 2 {
            break;
        }
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v || deg[u] == cap || deg[v] == cap || !edges.insert((u.min(v), u.max(v))) {
            continue;
        }
        deg[u] += 1;
        deg[v] += 1;
    }
    Graph::new(n, &edges.into_iter().collect::<Vec<_>>()).unwrap()
}

/// Random rank-`r` hypergraph with every degree at most `cap`.
fn capped_hypergraph(rng: &mut ChaCha8Rng, n: usize, r: usize, cap: usize) -> Hypergraph {
    let mut deg = vec![0; n];
    let mut edges = Vec::new();
    for _ in 0..20 * n * cap {
        let e = rand::seq::index::sample(rng, n, r).into_vec();
        if e.iter().any(|&v| deg[v] == cap) {
            continue;
        }
        for &v in &e {
            deg[v] += 1;
        }
        edges.push(e);
    }
    Hypergraph::new(n, edges).unwrap()
}

fn sum_check(label: &str, y: Dyadic, factor: u64, x: Dyadic) -> Option<String> {
    (y.mul_int(factor) < x).then(|| format!("{label}: {y} * {factor} < {x}"))
}

#[derive(Default)]
struct Intermediate {
    steps: usize,
    failures: Vec<String>,
    /// Independence bound to check on packing steps.
    r: usize,
}

impl StepObserver for Intermediate {
    fn observe(&mut self, event: &StepEvent<'_>) {
        match event {
            StepEvent::Matching {
                stage,
                hypergraph,
                values,
            } => {
                self.steps += 1;
                let report = validate_fractional_matching(hypergraph, values);
                if let Some(v) = report.violation {
                    self.failures.push(format!("{stage}: {v}"));
                }
            }
            StepEvent::Packing {
                stage,
                graph,
                packing,
            } => {
                self.steps += 1;
                let report = verify_greedy_packing(graph, packing);
                if let Some(v) = &report.violation {
                    self.failures.push(format!("{stage}: {v}"));
                } else if !report.within_independence_bound(self.r) {
                    self.failures.push(format!(
                        "{stage}: local sum {} above r = {}",
                        report.max_local_sum, self.r
                    ));
                }
            }
            StepEvent::RecursiveIteration { .. } => {}
        }
    }
}

fn rounded_ok(
    label: &str,
    x: &FractionalAssignment,
    y: &FractionalAssignment,
    floor: Dyadic,
    h: &Hypergraph,
) -> Option<String> {
    if let Some(v) = validate_fractional_matching(h, y).violation {
        return Some(format!("{label}: invalid output: {v}"));
    }
    if y.floor() != floor || !y.respects_floor(floor) {
        return Some(format!("{label}: output not {floor}-fractional"));
    }
    let xs = x.support();
    if y.support().iter().any(|e| xs.binary_search(e).is_err()) {
        return Some(format!("{label}: support not nested"));
    }
    None
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let budget = OracleBudget::default();
    let mut failures = Vec::new();
    for (i, h) in small_corpus().iter().enumerate() {
        let opt = oracles::max_matching(h, &budget).unwrap().len() as u64;
        let x = greedy_fractional_matching(h, &mut Session::new());
        if let Some(v) = validate_fractional_matching(h, &x).violation {
            failures.push(format!("instance {i}: {v}"));
        }
        if let Some(f) = sum_check(&format!("instance {i}"), x.total(), 2 * h.rank() as u64, Dyadic::from_int(opt)) {
            failures.push(f);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 10.0 {
        failures.push(format!("took {secs:.2}s"));
    }
    outcome(&failures, format!("100 instances, sum x * 2r >= OPT, {secs:.2}s"))
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    let mut runs = 0;
    for (i, h) in small_corpus().iter().enumerate() {
        let big_d = (h.max_degree().max(1) as u64).next_power_of_two();
        let ecol = edge_coloring_init(h, &mut Session::new());
        let r = h.rank() as u64;
        for (l, d) in [(2, 4), (4, 16), (2, big_d)] {
            if big_d > d || l > d {
                continue;
            }
            runs += 1;
            let x = greedy_with_denominator(h, d, &mut Session::new());
            let params = RoundingParams::new(l, d);
            let mut obs = Intermediate::default();
            let y = match basic_round(h, &x, params, &ecol, &mut Session::with_observer(&mut obs)) {
                Ok(y) => y,
                Err(e) => {
                    failures.push(format!("instance {i} (L={l}, d={d}): {e}"));
                    continue;
                }
            };
            let label = format!("instance {i} (L={l}, d={d})");
            failures.extend(obs.failures.iter().map(|f| format!("{label}: {f}")));
            failures.extend(rounded_ok(&label, &x, &y, params.floor(), h));
            failures.extend(sum_check(&label, y.total(), 2 * r, x.total()));
        }
    }
    outcome(&failures, format!("{runs} roundings valid, nested, sum y * 2r >= sum x"))
}

fn recursive_check(
    label: &str,
    h: &Hypergraph,
    l: u64,
    d: u64,
    failures: &mut Vec<String>,
) -> Option<u64> {
    let x = greedy_with_denominator(h, d, &mut Session::new());
    let ecol = edge_coloring_init(h, &mut Session::new());
    let params = RoundingParams::new(l, d);
    let mut obs = Intermediate::default();
    let mut session = Session::with_observer(&mut obs);
    let result = recursive_round(h, &x, params, &ecol, &mut session);
    let rounds = session.ledger.total();
    drop(session);
    let y = match result {
        Ok(y) => y,
        Err(e) => {
            failures.push(format!("{label}: {e}"));
            return None;
        }
    };
    failures.extend(obs.failures.iter().map(|f| format!("{label}: {f}")));
    failures.extend(rounded_ok(label, &x, &y, params.floor(), h));
    failures.extend(sum_check(label, y.total(), 4 * h.rank() as u64, x.total()));
    Some(rounds)
}

fn criterion_3() -> Outcome {
    let mut failures = Vec::new();
    let ls = [(8u64, 128u64), (16, 256), (32, 1024)];
    let mut runs = 0;
    for (i, h) in small_corpus().iter().enumerate() {
        for &(l, d) in &ls {
            runs += 1;
            recursive_check(&format!("instance {i} (L={l}, d={d})"), h, l, d, &mut failures);
        }
    }
    // Degree sweep at fixed n for the cost bound.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = 48;
    let mut measured = Vec::new();
    for delta in [4usize, 8, 16, 32] {
        let h = capped_hypergraph(&mut rng, n, 3, delta);
        for &(l, dmin) in &ls {
            let d = dmin.max((h.max_degree() as u64).next_power_of_two());
            let label = format!("sweep Delta={} (L={l}, d={d})", h.max_degree());
            runs += 1;
            if let Some(rounds) = recursive_check(&label, &h, l, d, &mut failures) {
                measured.push((l, h.rank(), h.max_degree(), rounds));
            }
        }
    }
    let alpha = 32.0;
    let mut summary = format!("{runs} recursive roundings");
    if let Some(&(l0, r0, d0, m0)) = measured.first() {
        let unit = check_recurrence_bound(0, l0, r0, d0, RecurrenceConstants { alpha, c: 1.0 }).bound;
        let c = (m0 as f64 / unit).max(f64::MIN_POSITIVE);
        let k = RecurrenceConstants { alpha, c };
        let mut worst: f64 = 0.0;
        for &(l, r, delta, rounds) in &measured {
            let v = check_recurrence_bound(rounds, l, r, delta, k);
            worst = worst.max(rounds as f64 / v.bound);
            if !v.holds {
                failures.push(format!(
                    "L={l} Delta={delta}: {rounds} rounds above bound {:.1}",
                    v.bound
                ));
            }
        }
        summary.push_str(&format!(
            "; cost bound with alpha={alpha}, fitted c={c:.4}, worst measured/bound {worst:.3}"
        ));
    }
    outcome(&failures, summary)
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut failures = Vec::new();
    let mut max_iter = 0;
    for i in 0..200 {
        let r = rng.gen_range(2..=4);
        let n = rng.gen_range(r.max(5)..=60);
        let m = rng.gen_range(1..=3 * n);
        let h = hyper(generate(&Family::RandomHypergraph { n, m, r }, rng.gen()).unwrap());
        let out = maximal_matching(&h, None, &mut Session::new());
        if let Err(v) = validate_matching(&h, &out.matching, true) {
            failures.push(format!("instance {i}: {v}"));
        }
        let rk = h.rank() as f64;
        let cap = (32.0 * rk.powi(3) * (n as f64).log2()).ceil() as usize + 1;
        max_iter = max_iter.max(out.iterations);
        if out.iterations > cap {
            failures.push(format!("instance {i}: {} iterations > {cap}", out.iterations));
        }
    }
    outcome(&failures, format!("200 instances maximal, most iterations {max_iter}"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = Vec::new();
    for i in 0..100 {
        let n = rng.gen_range(2..=40);
        let m = rng.gen_range(0..=3 * n);
        let g = bounded_graph(&mut rng, n, m, 8);
        let k = (2 * g.max_degree()).saturating_sub(1);
        let c = edge_color(&g, &mut Session::new());
        if let Err(v) = validate_edge_coloring(&g, &c, None) {
            failures.push(format!("graph {i}: {v}"));
        }
        if c.iter().any(|&x| x == 0 || x > k) {
            failures.push(format!("graph {i}: color outside 1..={k}"));
        }
        // adversarial lists: nested prefixes, and random picks from a
        // pool barely larger than the list
        let lg = line_graph(&g.to_hypergraph());
        let prefix: Vec<Vec<usize>> = (0..g.m()).map(|e| (1..=lg.degree(e) + 1).collect()).collect();
        let pooled: Vec<Vec<usize>> = (0..g.m())
            .map(|e| {
                let mut pool: Vec<usize> = (1..=lg.degree(e) + 3).collect();
                pool.shuffle(&mut rng);
                pool.truncate(lg.degree(e) + 1);
                pool
            })
            .collect();
        for (name, lists) in [("prefix", prefix), ("pooled", pooled)] {
            let inst = ListEdgeInstance {
                graph: g.clone(),
                lists: lists.clone(),
            };
            match list_edge_color(&inst, &mut Session::new()) {
                Ok(c) => {
                    if let Err(v) = validate_edge_coloring(&g, &c, Some(&lists)) {
                        failures.push(format!("graph {i} {name} lists: {v}"));
                    }
                }
                Err(e) => failures.push(format!("graph {i} {name} lists: {e}")),
            }
        }
    }
    // reduction soundness over every maximal matching
    let budget = OracleBudget::default();
    let mut checked = 0;
    let mut matchings = 0;
    let mut attempt = 0;
    while checked < 60 && attempt < 10_000 {
        attempt += 1;
        let red = if attempt % 3 == 0 {
            let n = rng.gen_range(3..=6);
            let m = rng.gen_range(1..=3);
            let h = hyper(generate(&Family::RandomHypergraph { n, m, r: 3 }, rng.gen()).unwrap());
            let lg = line_graph(&h);
            let lists: Vec<Vec<usize>> = (0..h.m())
                .map(|e| {
                    let mut pool: Vec<usize> = (1..=lg.degree(e) + 2).collect();
                    pool.shuffle(&mut rng);
                    pool.truncate(lg.degree(e) + 1);
                    pool
                })
                .collect();
            reduce_hypergraph_list_edge_coloring(&h, &lists).unwrap()
        } else {
            let n = rng.gen_range(2..=5);
            let m = rng.gen_range(1..=4);
        let g = bounded_graph(&mut rng, n, m, 3);
            let lg = line_graph(&g.to_hypergraph());
            let lists: Vec<Vec<usize>> = (0..g.m())
                .map(|e| {
                    let mut pool: Vec<usize> = (1..=lg.degree(e) + 2).collect();
                    pool.shuffle(&mut rng);
                    pool.truncate(lg.degree(e) + 1);
                    pool
                })
                .collect();
            reduce_list_edge_coloring(&ListEdgeInstance { graph: g, lists }).unwrap()
        };
        if red.hypergraph.m() > budget.enumeration_edges {
            continue;
        }
        checked += 1;
        for mm in oracles::enumerate_maximal_matchings(&red.hypergraph, &budget).unwrap() {
            matchings += 1;
            if let Err(e) = decode_matching(&red, &mm) {
                failures.push(format!("reduction {checked}: {e}"));
            }
        }
    }
    outcome(
        &failures,
        format!("100 graphs colored with <= 2Delta-1 and both list schemes; {checked} reductions, {matchings} maximal matchings decode"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let budget = OracleBudget::default();
    let mut failures = Vec::new();
    let mut steps = 0;
    for i in 0..100 {
        let n = rng.gen_range(1..=22);
        let p = rng.gen_range(0.05..0.6);
        let g = graph(generate(&Family::RandomGraph { n, p }, rng.gen()).unwrap());
        let r = oracles::neighborhood_independence(&g, &budget).unwrap().max(1);
        let best = oracles::max_independent_set(&g, &budget).unwrap().len();
        let mut obs = Intermediate {
            r,
            ..Default::default()
        };
        let mut session = Session::with_observer(&mut obs);
        let mis = maximal_independent_set(&g, r, &mut session);
        let approx = approx_mis(&g, r, &mut session);
        drop(session);
        steps += obs.steps;
        failures.extend(obs.failures.iter().map(|f| format!("graph {i}: {f}")));
        if let Err(v) = validate_independent_set(&g, &mis.set, true) {
            failures.push(format!("graph {i} MIS: {v}"));
        }
        if let Err(v) = validate_independent_set(&g, &approx, false) {
            failures.push(format!("graph {i} approx: {v}"));
        }
        if approx.len() * 32 * r.pow(3) < best {
            failures.push(format!("graph {i}: approx {} vs optimum {best}, r = {r}", approx.len()));
        }
    }
    outcome(&failures, format!("100 graphs, {steps} intermediate packings verified"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    for i in 0..50 {
        let n = rng.gen_range(4..=30);
        let m = rng.gen_range(1..=40);
        let h = hyper(generate(&Family::RandomHypergraph { n, m, r: 3 }, rng.gen()).unwrap());
        let lg = line_graph(&h);
        let out = maximal_independent_set(&lg, h.rank(), &mut Session::new());
        let matching = hypermatch::Matching::new(out.set.nodes().to_vec());
        if let Err(v) = validate_matching(&h, &matching, true) {
            failures.push(format!("hypergraph {i}: {v}"));
        }
    }
    outcome(&failures, "50 line graphs, MIS is a maximal matching".into())
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let budget = OracleBudget::default();
    let mut failures = Vec::new();
    let eps = [Ratio::new(1u64, 1u64), Ratio::new(1, 2), Ratio::new(1, 3)];
    for i in 0..50 {
        let n = rng.gen_range(2..=24);
        let m = rng.gen_range(1..=24);
        let g = bounded_graph(&mut rng, n, m, n);
        let opt = oracles::max_matching(&g.to_hypergraph(), &budget).unwrap().len() as u64;
        for &e in &eps {
            let m = approx_max_graph_matching(&g, e, MatchingMode::Exact, &mut Session::new());
            match m {
                Ok(m) => {
                    if let Err(v) = validate_matching(&g.to_hypergraph(), &m, false) {
                        failures.push(format!("graph {i} eps {e}: {v}"));
                    }
                    let need = (Ratio::from_integer(opt) / (Ratio::from_integer(1) + e)).ceil();
                    if Ratio::from_integer(m.len() as u64) < need {
                        failures.push(format!("graph {i} eps {e}: {} < {need} (OPT {opt})", m.len()));
                    }
                }
                Err(err) => failures.push(format!("graph {i} eps {e}: {err}")),
            }
        }
    }
    outcome(&failures, "50 graphs x 3 eps, size >= ceil(OPT/(1+eps))".into())
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let budget = OracleBudget::default();
    let mut failures = Vec::new();
    for i in 0..50 {
        let n = rng.gen_range(2..=14);
        let p = rng.gen_range(0.1..0.9);
        let g = graph(generate(&Family::RandomGraph { n, p }, rng.gen()).unwrap());
        let lambda = oracles::arboricity(&g, &budget).unwrap();
        for eps in [Ratio::new(1u64, 1u64), Ratio::new(1, 2)] {
            let label = format!("graph {i} (lambda {lambda}, eps {eps})");
            match low_outdegree_orientation(&g, lambda, eps, &mut Session::new()) {
                Ok(o) => {
                    let bound = outdegree_target(lambda, eps);
                    if o.orientation.max_out_degree() > bound {
                        failures.push(format!("{label}: out-degree above {bound}"));
                    }
                    let classes = pseudo_forest_decomposition(&g, &o.orientation);
                    if classes.iter().any(|&c| c > bound) {
                        failures.push(format!("{label}: more than {bound} classes"));
                    }
                    if let Err(v) = validate_pseudo_forests(&g, &classes) {
                        failures.push(format!("{label}: {v}"));
                    }
                }
                Err(e) => failures.push(format!("{label}: {e}")),
            }
        }
    }
    outcome(&failures, "50 graphs x 2 eps, out-degree and pseudo-forests".into())
}

fn planar_like_samples(rng: &mut ChaCha8Rng) -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for n in [5, 9, 14] {
        let parent: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
        out.push((format!("tree {n}"), Graph::new(n, &parent).unwrap()));
        out.push((format!("cycle {n}"), graph(generate(&Family::Cycle { n }, 0).unwrap())));
    }
    out.push(("star 13".into(), graph(generate(&Family::Star { leaves: 13 }, 0).unwrap())));
    for (rows, cols, diag) in [(3, 4, false), (3, 4, true), (2, 7, true), (3, 3, true)] {
        let id = |r: usize, c: usize| r * cols + c;
        let mut e = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    e.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < rows {
                    e.push((id(r, c), id(r + 1, c)));
                }
                if diag && r + 1 < rows && c + 1 < cols {
                    e.push((id(r, c), id(r + 1, c + 1)));
                }
            }
        }
        let kind = if diag { "triangulated grid" } else { "grid" };
        out.push((format!("{kind} {rows}x{cols}"), Graph::new(rows * cols, &e).unwrap()));
    }
    for rim in [5, 8, 12] {
        let mut e: Vec<_> = (1..=rim).map(|i| (0, i)).collect();
        e.extend((1..=rim).map(|i| (i, i % rim + 1)));
        out.push((format!("wheel {rim}"), Graph::new(rim + 1, &e).unwrap()));
    }
    out
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let budget = OracleBudget::default();
    let mut failures = Vec::new();
    let samples = planar_like_samples(&mut rng);
    for (name, g) in &samples {
        let a = oracles::arboricity(g, &budget).unwrap();
        for eps in [Ratio::new(1u64, 1u64), Ratio::new(1, 2)] {
            let palette = arboricity_palette(g.max_degree(), a, eps);
            match arboricity_edge_color(g, a, eps, &mut Session::new()) {
                Ok(c) => {
                    if let Err(v) = validate_edge_coloring(g, &c, None) {
                        failures.push(format!("{name}: {v}"));
                    }
                    if c.iter().any(|&x| x == 0 || x > palette) {
                        failures.push(format!("{name} eps {eps}: color above {palette}"));
                    }
                }
                Err(e) => failures.push(format!("{name} eps {eps}: {e}")),
            }
        }
    }
    outcome(&failures, format!("{} samples x 2 eps within Delta + ceil((2+eps)a) - 1", samples.len()))
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut failures = Vec::new();
    for seed in 0..200u64 {
        let n = rng.gen_range(2..=30);
        let m = rng.gen_range(1..=3 * n);
        let g = bounded_graph(&mut rng, n, m, 6);
        let out = randomized_edge_color(&g, seed, &mut Session::new());
        let k = (2 * g.max_degree()).saturating_sub(1);
        if let Err(v) = validate_edge_coloring(&g, &out.colors, None) {
            failures.push(format!("seed {seed}: {v}"));
        }
        if out.colors.iter().any(|&c| c == 0 || c > k) {
            failures.push(format!("seed {seed}: color above {k}"));
        }
    }
    let (mut colored, mut total) = (0, 0);
    for seed in 0..50u64 {
        let g = graph(generate(&Family::Regular { n: 30, d: 4 }, seed).unwrap());
        let out = randomized_edge_color(&g, seed, &mut Session::new());
        colored += out.colored_in_trials;
        total += g.m();
    }
    let share = colored as f64 / total as f64;
    let soft = if share >= 0.9 { "met" } else { "NOT met" };
    outcome(
        &failures,
        format!("200 seeds proper; soft: {:.1}% of edges colored in trials on Delta=4 ({soft}, target 90%)", 100.0 * share),
    )
}

fn outside_pair(
    rng: &mut ChaCha8Rng,
    ball: &[bool],
    free: impl Fn(usize) -> bool,
) -> Option<(usize, usize)> {
    let outside: Vec<usize> = (0..ball.len()).filter(|&v| !ball[v] && free(v)).collect();
    if outside.len() < 2 {
        return None;
    }
    let u = *outside.choose(rng).unwrap();
    let v = *outside.choose(rng).unwrap();
    (u != v).then_some((u, v))
}

fn audit_graph_primitive(
    primitive: Primitive,
    g: &Graph,
    rng: &mut ChaCha8Rng,
    failures: &mut Vec<String>,
) -> usize {
    let inst = Instance::Graph(g.clone());
    let radius = primitive.declared_radius(&inst);
    let bound = match primitive {
        Primitive::PackingDoubling { .. } => {
            hypermatch::packing::packing_denominator(g) as usize - 1
        }
        _ => g.max_degree(),
    };
    let mut passed = 0;
    let mut attempts = 0;
    while passed < 20 && attempts < 2000 {
        attempts += 1;
        let v = rng.gen_range(0..g.n());
        let ball = g.ball(v, radius);
        let edit = match attempts % 3 {
            0 => Perturbation::Identity,
            1 => {
                let far: Vec<_> = g
                    .edges()
                    .iter()
                    .filter(|&&(a, b)| !ball[a] && !ball[b])
                    .collect();
                match far.choose(rng) {
                    Some(&&(a, b)) => Perturbation::RemoveEdge(a, b),
                    None => continue,
                }
            }
            _ => match outside_pair(rng, &ball, |u| g.degree(u) < bound) {
                Some((a, b)) if !g.has_edge(a, b) => Perturbation::AddEdge(a, b),
                _ => continue,
            },
        };
        match audit_locality(primitive, &inst, v, radius, &edit) {
            Ok(verdict) if verdict.holds() => passed += 1,
            Ok(verdict) => {
                failures.push(format!("{} at {v} under {edit:?}: {verdict:?}", primitive.name()));
                passed += 1;
            }
            Err(e) => failures.push(format!("{} at {v}: {e}", primitive.name())),
        }
    }
    passed
}

fn criterion_12() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut failures = Vec::new();
    let mut counts = Vec::new();

    let h = hyper(generate(&Family::RandomHypergraph { n: 400, m: 250, r: 3 }, 12).unwrap());
    let d = (h.max_degree() as u64).next_power_of_two();
    let primitive = Primitive::GreedyMatching {
        iterations: d.trailing_zeros() as usize,
    };
    let inst = Instance::Hypergraph(h.clone());
    let radius = primitive.declared_radius(&inst);
    let mut passed = 0;
    let mut attempts = 0;
    while passed < 20 && attempts < 2000 {
        attempts += 1;
        let v = rng.gen_range(0..h.n());
        let ball = h.ball(v, radius);
        let edit = match attempts % 3 {
            0 => Perturbation::Identity,
            1 => {
                let far: Vec<usize> = (0..h.m())
                    .filter(|&e| h.edge(e).iter().all(|&u| !ball[u]))
                    .collect();
                match far.choose(&mut rng) {
                    Some(&e) => Perturbation::RemoveHyperedge(e),
                    None => continue,
                }
            }
            _ => {
                let outside: Vec<usize> = (0..h.n())
                    .filter(|&u| !ball[u] && (h.degree(u) as u64) < d)
                    .collect();
                if outside.len() < 3 {
                    continue;
                }
                let e: Vec<usize> = outside.choose_multiple(&mut rng, 3).copied().collect();
                Perturbation::AddHyperedge(e)
            }
        };
        match audit_locality(primitive, &inst, v, radius, &edit) {
            Ok(verdict) if verdict.holds() => passed += 1,
            Ok(verdict) => {
                failures.push(format!("greedy_matching at {v} under {edit:?}: {verdict:?}"));
                passed += 1;
            }
            Err(e) => failures.push(format!("greedy_matching at {v}: {e}")),
        }
    }
    counts.push(("greedy_matching", passed));

    let g = graph(generate(&Family::RandomGraph { n: 400, p: 0.008 }, 12).unwrap());
    let steps = hypermatch::packing::packing_denominator(&g).trailing_zeros() as usize;
    for primitive in [
        Primitive::PackingDoubling { steps },
        Primitive::Linial,
        Primitive::Defective { p: 1 },
    ] {
        let passed = audit_graph_primitive(primitive, &g, &mut rng, &mut failures);
        counts.push((primitive.name(), passed));
    }
    for &(name, c) in &counts {
        if c < 20 {
            failures.push(format!("{name}: only {c} audits sampled"));
        }
    }
    let summary = counts
        .iter()
        .map(|(n, c)| format!("{n} {c}"))
        .collect::<Vec<_>>()
        .join(", ");
    outcome(&failures, format!("audits passed: {summary}"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("fractional greedy", criterion_1),
        ("basic rounding", criterion_2),
        ("recursive rounding", criterion_3),
        ("maximal matching", criterion_4),
        ("edge coloring", criterion_5),
        ("maximal independent set", criterion_6),
        ("line graph consistency", criterion_7),
        ("(1+eps) matching", criterion_8),
        ("orientation", criterion_9),
        ("arboricity coloring", criterion_10),
        ("randomized hybrid", criterion_11),
        ("locality audits", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let status = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {status} {name}: {} [{:.2}s]",
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("{} of 12 criteria passed", 12 - failed);
    let strict = std::env::var("ACCEPTANCE_STRICT").map_or(false, |v| v == "1");
    if failed > 0 && strict {
        std::process::exit(1);
    }
}
