use hypermatch::applications::{
    approx_max_graph_matching, low_outdegree_orientation, outdegree_target,
    pseudo_forest_decomposition, validate_pseudo_forests, MatchingMode,
};
use hypermatch::edge_coloring::{
    arboricity_edge_color, arboricity_palette, edge_color, list_edge_color, randomized_edge_color,
    validate_edge_coloring, ListEdgeInstance,
};
use hypermatch::format::{parse_color_lists, write_id_list, write_pairs, Instance};
use hypermatch::hypergraph::validate_matching;
use hypermatch::oracles::{self, OracleBudget, OracleError};
use hypermatch::packing::{
    maximal_independent_set, validate_independent_set, validate_vertex_coloring, vertex_color,
};
use hypermatch::rounding::{approx_max_matching, maximal_matching};
use hypermatch::{Graph, Hypergraph, Session};
use num_rational::Ratio;

use crate::report::{InstanceSummary, OracleComparison, RunReport};
use crate::{parse_with, read_instance, read_text, write_text, Algo, CliError, RunArgs};

struct Ctx<'a> {
    args: &'a RunArgs,
    budget: OracleBudget,
    report: RunReport,
}

impl Ctx<'_> {
    /// Oracle value, or `None` when over budget and not forced.
    fn oracle<T>(&mut self, what: &str, r: Result<T, OracleError>) -> Result<Option<T>, CliError> {
        match r {
            Ok(v) => Ok(Some(v)),
            Err(e) if self.args.oracle => Err(e.into()),
            Err(e) => {
                self.report
                    .param(&format!("oracle_{what}"), format!("skipped: {e}"));
                Ok(None)
            }
        }
    }

    fn compare(&mut self, quantity: &str, oracle: usize, solution: usize, detail: String) {
        self.report.oracle.push(OracleComparison {
            quantity: quantity.to_string(),
            oracle,
            solution,
            detail,
        });
    }

    fn eps(&mut self) -> Ratio<u64> {
        let eps = self.args.eps.unwrap_or_else(|| Ratio::from_integer(1));
        self.report.param("eps", eps);
        eps
    }

    fn save(&self, text: String) -> Result<(), CliError> {
        match &self.args.out {
            Some(path) => write_text(path, &text),
            None => Ok(()),
        }
    }

    fn lists(&self, len: usize) -> Result<Option<Vec<Vec<usize>>>, CliError> {
        match &self.args.lists {
            Some(path) => {
                let text = read_text(path)?;
                parse_with(path, &text, |t| parse_color_lists(t, len)).map(Some)
            }
            None => Ok(None),
        }
    }

    /// Neighborhood independence from the oracle when within budget, else
    /// the maximum degree.
    fn neighborhood_bound(&mut self, g: &Graph) -> Result<(usize, bool), CliError> {
        let found = oracles::neighborhood_independence(g, &self.budget);
        let (r, exact) = match self.oracle("neighborhood_independence", found)? {
            Some(r) => (r.max(1), true),
            None => (g.max_degree().max(1), false),
        };
        self.report.param("r", r);
        self.report
            .param("r_source", if exact { "oracle" } else { "max degree" });
        Ok((r, exact))
    }

    fn arboricity(
        &mut self,
        given: Option<usize>,
        flag: &str,
        g: &Graph,
    ) -> Result<usize, CliError> {
        let a = match given {
            Some(a) => a,
            None => oracles::arboricity(g, &self.budget)?,
        };
        self.report.param(flag, a);
        Ok(a)
    }
}

fn as_graph(inst: &Instance, algo: Algo) -> Result<Graph, CliError> {
    match inst {
        Instance::Graph(g) => Ok(g.clone()),
        Instance::Hypergraph(h) => Graph::from_hypergraph(h)
            .map_err(|e| CliError::Usage(format!("{} needs a graph instance: {e}", algo.name()))),
    }
}

fn as_hypergraph(inst: &Instance) -> Hypergraph {
    match inst {
        Instance::Graph(g) => g.to_hypergraph(),
        Instance::Hypergraph(h) => h.clone(),
    }
}

fn edge_color_stats(ctx: &mut Ctx<'_>, g: &Graph, colors: &[usize], lists: Option<&[Vec<usize>]>) {
    let max = colors.iter().copied().max().unwrap_or(0);
    ctx.report.stat("palette_max", max);
    ctx.report
        .verdict("proper", validate_edge_coloring(g, colors, lists));
}

pub fn run(args: &RunArgs) -> Result<RunReport, CliError> {
    let inst = read_instance(&args.input)?;
    let mut ctx = Ctx {
        args,
        budget: OracleBudget::default(),
        report: RunReport::new(&args.algo.name(), args.seed, InstanceSummary::of(&inst)),
    };
    let mut session = Session::new();
    match args.algo {
        Algo::MaximalMatching | Algo::ApproxMatching => {
            let h = as_hypergraph(&inst);
            let r = h.rank().max(1);
            let m = if args.algo == Algo::MaximalMatching {
                if let Some(s) = args.slack {
                    ctx.report.param("slack", s);
                }
                let out = maximal_matching(&h, args.slack, &mut session);
                ctx.report.stat("iterations", out.iterations);
                ctx.report.stat("unblocked", out.unblocked.len());
                ctx.report
                    .verdict("valid", validate_matching(&h, &out.matching, false));
                if args.slack.is_none() {
                    ctx.report
                        .verdict("maximal", validate_matching(&h, &out.matching, true));
                }
                out.matching
            } else {
                let m = approx_max_matching(&h, &mut session);
                ctx.report
                    .verdict("valid", validate_matching(&h, &m, false));
                m
            };
            ctx.report.stat("size", m.len());
            let opt = oracles::max_matching(&h, &ctx.budget);
            if let Some(opt) = ctx.oracle("max_matching", opt)? {
                let (factor, label) = match args.algo {
                    Algo::ApproxMatching => (32 * r * r * r, "32r^3"),
                    _ => (r, "r"),
                };
                let ok = m.len() * factor >= opt.len();
                ctx.compare(
                    "max matching",
                    opt.len(),
                    m.len(),
                    format!("factor {label} = {factor}"),
                );
                if args.algo == Algo::ApproxMatching || args.slack.is_none() {
                    ctx.report.bound(
                        "approximation",
                        ok,
                        format!("{} * {factor} vs optimum {}", m.len(), opt.len()),
                    );
                }
            }
            ctx.save(write_id_list(m.edges()))?;
        }
        Algo::EdgeColor => {
            let g = as_graph(&inst, args.algo)?;
            let colors = edge_color(&g, &mut session);
            edge_color_stats(&mut ctx, &g, &colors, None);
            let limit = (2 * g.max_degree()).saturating_sub(1);
            let max = colors.iter().copied().max().unwrap_or(0);
            ctx.report.bound(
                "palette",
                max <= limit,
                format!("max color {max}, limit {limit}"),
            );
            ctx.save(write_pairs(colors.iter().copied().enumerate()))?;
        }
        Algo::ListEdgeColor => {
            let g = as_graph(&inst, args.algo)?;
            let lists = ctx.lists(g.m())?.unwrap_or_else(|| {
                (0..g.m())
                    .map(|e| (1..=g.edge_degree(e) + 1).collect())
                    .collect()
            });
            let colors = list_edge_color(
                &ListEdgeInstance {
                    graph: g.clone(),
                    lists: lists.clone(),
                },
                &mut session,
            )
            .map_err(|e| CliError::Algorithm(e.to_string()))?;
            edge_color_stats(&mut ctx, &g, &colors, Some(&lists));
            ctx.save(write_pairs(colors.iter().copied().enumerate()))?;
        }
        Algo::RandEdgeColor => {
            let g = as_graph(&inst, args.algo)?;
            let out = randomized_edge_color(&g, args.seed, &mut session);
            ctx.report.stat("trial_rounds", out.trial_rounds);
            ctx.report.stat("colored_in_trials", out.colored_in_trials);
            edge_color_stats(&mut ctx, &g, &out.colors, None);
            let limit = (2 * g.max_degree()).saturating_sub(1);
            let max = out.colors.iter().copied().max().unwrap_or(0);
            ctx.report.bound(
                "palette",
                max <= limit,
                format!("max color {max}, limit {limit}"),
            );
            ctx.save(write_pairs(out.colors.iter().copied().enumerate()))?;
        }
        Algo::ArbEdgeColor => {
            let g = as_graph(&inst, args.algo)?;
            let eps = ctx.eps();
            let a = ctx.arboricity(args.arboricity, "arboricity", &g)?;
            let colors = arboricity_edge_color(&g, a, eps, &mut session)
                .map_err(|e| CliError::Algorithm(e.to_string()))?;
            edge_color_stats(&mut ctx, &g, &colors, None);
            let limit = arboricity_palette(g.max_degree(), a, eps);
            let max = colors.iter().copied().max().unwrap_or(0);
            ctx.report.bound(
                "palette",
                max <= limit,
                format!("max color {max}, limit {limit}"),
            );
            ctx.save(write_pairs(colors.iter().copied().enumerate()))?;
        }
        Algo::Mis => {
            let g = as_graph(&inst, args.algo)?;
            let (r, exact) = ctx.neighborhood_bound(&g)?;
            let out = maximal_independent_set(&g, r, &mut session);
            ctx.report.stat("size", out.set.len());
            ctx.report.stat("iterations", out.iterations);
            ctx.report.verdict(
                "maximal independent",
                validate_independent_set(&g, &out.set, true),
            );
            let best = oracles::max_independent_set(&g, &ctx.budget);
            if let Some(best) = ctx.oracle("max_independent_set", best)? {
                ctx.compare(
                    "independence number",
                    best.len(),
                    out.set.len(),
                    format!("factor r = {r}"),
                );
                if exact {
                    ctx.report.bound(
                        "approximation",
                        out.set.len() * r >= best.len(),
                        format!("{} * {r} vs optimum {}", out.set.len(), best.len()),
                    );
                }
            }
            ctx.save(write_id_list(out.set.nodes()))?;
        }
        Algo::VertexColor => {
            let g = as_graph(&inst, args.algo)?;
            let lists = ctx.lists(g.n())?;
            let (r, _) = ctx.neighborhood_bound(&g)?;
            let colors = vertex_color(&g, lists.as_deref(), r, &mut session)
                .map_err(|e| CliError::Algorithm(e.to_string()))?;
            ctx.report
                .stat("palette_max", colors.iter().copied().max().unwrap_or(0));
            ctx.report.verdict(
                "proper",
                validate_vertex_coloring(&g, &colors, lists.as_deref()),
            );
            if lists.is_none() {
                let limit = g.max_degree() + 1;
                let max = colors.iter().copied().max().unwrap_or(0);
                ctx.report.bound(
                    "palette",
                    max <= limit,
                    format!("max color {max}, limit {limit}"),
                );
            }
            ctx.save(write_pairs(colors.iter().copied().enumerate()))?;
        }
        Algo::ApproxGraphMatching => {
            let g = as_graph(&inst, args.algo)?;
            let eps = ctx.eps();
            let mode = if args.slack.is_some() {
                MatchingMode::AlmostMaximal
            } else {
                MatchingMode::Exact
            };
            ctx.report.param("mode", format!("{mode:?}"));
            let m = approx_max_graph_matching(&g, eps, mode, &mut session)
                .map_err(|e| CliError::Algorithm(e.to_string()))?;
            let h = g.to_hypergraph();
            ctx.report.stat("size", m.len());
            ctx.report
                .verdict("valid", validate_matching(&h, &m, false));
            let opt = oracles::max_matching(&h, &ctx.budget);
            if let Some(opt) = ctx.oracle("max_matching", opt)? {
                let need = (Ratio::from_integer(opt.len() as u64) / (Ratio::from_integer(1) + eps))
                    .ceil()
                    .to_integer() as usize;
                ctx.compare(
                    "max matching",
                    opt.len(),
                    m.len(),
                    format!("needs at least {need}"),
                );
                ctx.report.bound(
                    "approximation",
                    m.len() >= need,
                    format!("size {} vs ceil(OPT/(1+eps)) = {need}", m.len()),
                );
            }
            ctx.save(write_id_list(m.edges()))?;
        }
        Algo::Orientation | Algo::PseudoForests => {
            let g = as_graph(&inst, args.algo)?;
            let eps = ctx.eps();
            let lambda = ctx.arboricity(args.lambda, "lambda", &g)?;
            let out = low_outdegree_orientation(&g, lambda, eps, &mut session)
                .map_err(|e| CliError::Algorithm(e.to_string()))?;
            let target = outdegree_target(lambda, eps);
            let max = out.orientation.max_out_degree();
            ctx.report.stat("max_out_degree", max);
            ctx.report.stat("iterations", out.iterations);
            ctx.report
                .stat("paths_reversed", out.reversed.iter().sum::<usize>());
            ctx.report.bound(
                "out-degree",
                max <= target,
                format!("max out-degree {max}, target {target}"),
            );
            if args.algo == Algo::Orientation {
                ctx.save(write_pairs(out.orientation.arcs().iter().copied()))?;
            } else {
                let classes = pseudo_forest_decomposition(&g, &out.orientation);
                let count = classes.iter().copied().max().unwrap_or(0);
                ctx.report.stat("classes", count);
                ctx.report
                    .verdict("pseudo-forests", validate_pseudo_forests(&g, &classes));
                ctx.report.bound(
                    "class count",
                    count <= target,
                    format!("{count} classes, target {target}"),
                );
                ctx.save(write_pairs(classes.iter().copied().enumerate()))?;
            }
        }
    }
    ctx.report.set_ledger(session.ledger);
    Ok(ctx.report)
}
