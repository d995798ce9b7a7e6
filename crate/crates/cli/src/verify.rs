use std::path::Path;

use hypermatch::applications::{validate_pseudo_forests, Orientation};
use hypermatch::edge_coloring::validate_edge_coloring;
use hypermatch::format::{parse_color_lists, parse_id_list, parse_pairs, Instance};
use hypermatch::hypergraph::validate_matching;
use hypermatch::packing::{validate_independent_set, validate_vertex_coloring, IndependentSet};
use hypermatch::{Graph, Matching};

use crate::report::Verdict;
use crate::{parse_with, read_instance, read_text, CliError, Kind};

fn verdict<E: std::fmt::Display>(check: &str, r: Result<(), E>) -> Verdict {
    let (pass, detail) = match r {
        Ok(()) => (true, "ok".to_string()),
        Err(e) => (false, e.to_string()),
    };
    Verdict {
        check: check.to_string(),
        pass,
        detail,
    }
}

fn graph_of(inst: Instance, kind: Kind) -> Result<Graph, CliError> {
    match inst {
        Instance::Graph(g) => Ok(g),
        Instance::Hypergraph(h) => Graph::from_hypergraph(&h)
            .map_err(|e| CliError::Usage(format!("{kind:?} needs a graph instance: {e}"))),
    }
}

/// Values indexed by key; every key in `0..len` exactly once.
fn dense(pairs: Vec<(usize, usize)>, len: usize, what: &str) -> Result<Vec<usize>, String> {
    let mut out = vec![None; len];
    for (k, v) in pairs {
        if k >= len {
            return Err(format!("{what} {k} does not exist"));
        }
        if out[k].replace(v).is_some() {
            return Err(format!("{what} {k} appears twice"));
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(k, v)| v.ok_or_else(|| format!("{what} {k} is missing")))
        .collect()
}

pub fn verify(
    kind: Kind,
    input: &Path,
    solution: &Path,
    lists: Option<&Path>,
    bound: Option<usize>,
) -> Result<Verdict, CliError> {
    let inst = read_instance(input)?;
    let text = read_text(solution)?;
    let read_lists = |len: usize| -> Result<Option<Vec<Vec<usize>>>, CliError> {
        match lists {
            Some(p) => {
                let t = read_text(p)?;
                parse_with(p, &t, |t| parse_color_lists(t, len)).map(Some)
            }
            None => Ok(None),
        }
    };
    Ok(match kind {
        Kind::Matching | Kind::MaximalMatching => {
            let h = match inst {
                Instance::Graph(g) => g.to_hypergraph(),
                Instance::Hypergraph(h) => h,
            };
            let ids = parse_with(solution, &text, parse_id_list)?;
            let m = Matching::new(ids.clone());
            if m.len() != ids.len() {
                return Ok(verdict("matching", Err("an edge id is listed twice")));
            }
            verdict(
                "matching",
                validate_matching(&h, &m, kind == Kind::MaximalMatching),
            )
        }
        Kind::EdgeColoring => {
            let g = graph_of(inst, kind)?;
            let pairs = parse_with(solution, &text, parse_pairs)?;
            let lists = read_lists(g.m())?;
            match dense(pairs, g.m(), "edge") {
                Ok(colors) => verdict(
                    "edge coloring",
                    validate_edge_coloring(&g, &colors, lists.as_deref()),
                ),
                Err(e) => verdict("edge coloring", Err(e)),
            }
        }
        Kind::IndependentSet | Kind::MaximalIndependentSet => {
            let g = graph_of(inst, kind)?;
            let ids = parse_with(solution, &text, parse_id_list)?;
            let s = IndependentSet::new(ids);
            verdict(
                "independent set",
                validate_independent_set(&g, &s, kind == Kind::MaximalIndependentSet),
            )
        }
        Kind::VertexColoring => {
            let g = graph_of(inst, kind)?;
            let pairs = parse_with(solution, &text, parse_pairs)?;
            let lists = read_lists(g.n())?;
            match dense(pairs, g.n(), "node") {
                Ok(colors) => verdict(
                    "vertex coloring",
                    validate_vertex_coloring(&g, &colors, lists.as_deref()),
                ),
                Err(e) => verdict("vertex coloring", Err(e)),
            }
        }
        Kind::Orientation => {
            let g = graph_of(inst, kind)?;
            let arcs = parse_with(solution, &text, parse_pairs)?;
            match Orientation::from_arcs(&g, arcs) {
                None => verdict(
                    "orientation",
                    Err("arcs do not match the edges of the graph in order"),
                ),
                Some(o) => {
                    let max = o.max_out_degree();
                    match bound {
                        Some(b) if max > b => verdict(
                            "orientation",
                            Err(format!("max out-degree {max} above bound {b}")),
                        ),
                        _ => Verdict {
                            check: "orientation".to_string(),
                            pass: true,
                            detail: format!("max out-degree {max}"),
                        },
                    }
                }
            }
        }
        Kind::PseudoForests => {
            let g = graph_of(inst, kind)?;
            let pairs = parse_with(solution, &text, parse_pairs)?;
            match dense(pairs, g.m(), "edge") {
                Ok(classes) => verdict("pseudo-forests", validate_pseudo_forests(&g, &classes)),
                Err(e) => verdict("pseudo-forests", Err(e)),
            }
        }
    })
}
