//! Locality audit: rerun a primitive on an instance edited outside a ball
//! around a vertex and compare that vertex's output.
//!
//! Declared radii:
//! - greedy matching doubling, `t` iterations: `t`
//! - packing doubling, `t` steps: `t`
//! - Linial and defective coloring: the length of the color-reduction
//!   schedule, which depends only on the palette size and degree bound
//!
//! Global quantities every node is assumed to know (denominator, degree
//! bound, initial palette) are fixed from the original instance. An edit
//! that would break them is rejected rather than silently changing them.

use thiserror::Error;

use crate::coloring::{
    defective_coloring_bounded, defective_rounds, linial_coloring_bounded, linial_schedule,
    VertexColoring,
};
use crate::dyadic::Dyadic;
use crate::format::Instance;
use crate::hypergraph::{EdgeId, Graph, Hypergraph, InstanceError, VertexId};
use crate::ledger::Session;
use crate::packing::{packing_denominator, packing_doubling_steps};
use crate::rounding::greedy_steps;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Primitive {
    GreedyMatching { iterations: usize },
    PackingDoubling { steps: usize },
    Linial,
    Defective { p: usize },
}

impl Primitive {
    pub fn name(&self) -> &'static str {
        match self {
            Primitive::GreedyMatching { .. } => "greedy_matching",
            Primitive::PackingDoubling { .. } => "packing_doubling",
            Primitive::Linial => "linial",
            Primitive::Defective { .. } => "defective",
        }
    }

    /// Radius the primitive's output at a vertex depends on, for `inst`.
    pub fn declared_radius(&self, inst: &Instance) -> usize {
        match *self {
            Primitive::GreedyMatching { iterations } => iterations,
            Primitive::PackingDoubling { steps } => steps,
            Primitive::Linial => match inst {
                Instance::Graph(g) if g.max_degree() > 0 => {
                    linial_schedule(g.n().max(1), g.max_degree()).len()
                }
                _ => 0,
            },
            Primitive::Defective { p } => match inst {
                Instance::Graph(g) => defective_rounds(g.n().max(1), g.max_degree(), p),
                _ => 0,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Perturbation {
    Identity,
    AddEdge(VertexId, VertexId),
    RemoveEdge(VertexId, VertexId),
    AddHyperedge(Vec<VertexId>),
    RemoveHyperedge(EdgeId),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LocalityError {
    #[error("perturbation touches vertex {vertex} inside the radius-{radius} ball")]
    InsideBall { vertex: VertexId, radius: usize },
    #[error("radius {radius} is below the declared radius {declared}")]
    RadiusTooSmall { radius: usize, declared: usize },
    #[error("perturbed maximum degree {actual} exceeds the fixed bound {bound}")]
    GlobalParameter { bound: usize, actual: usize },
    #[error("{0} does not apply to this kind of instance")]
    KindMismatch(&'static str),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(VertexId),
    #[error("edit to a missing element")]
    MissingElement,
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// What a primitive outputs at one vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalOutput {
    /// Values of the incident hyperedges, in incidence order.
    EdgeValues(Vec<Dyadic>),
    Value(Dyadic),
    Color(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalityVerdict {
    pub declared_radius: usize,
    pub original: LocalOutput,
    pub perturbed: LocalOutput,
}

impl LocalityVerdict {
    pub fn holds(&self) -> bool {
        self.original == self.perturbed
    }
}

fn perturb_graph(g: &Graph, edit: &Perturbation) -> Result<(Graph, Vec<VertexId>), LocalityError> {
    let mut edges = g.edges().to_vec();
    let touched = match *edit {
        Perturbation::Identity => vec![],
        Perturbation::AddEdge(u, v) => {
            edges.push((u, v));
            vec![u, v]
        }
        Perturbation::RemoveEdge(u, v) => {
            let key = (u.min(v), u.max(v));
            let pos = edges
                .iter()
                .position(|&e| e == key)
                .ok_or(LocalityError::MissingElement)?;
            edges.remove(pos);
            vec![u, v]
        }
        _ => return Err(LocalityError::KindMismatch("hyperedge edit")),
    };
    Ok((Graph::new(g.n(), &edges)?, touched))
}

fn perturb_hypergraph(
    h: &Hypergraph,
    edit: &Perturbation,
) -> Result<(Hypergraph, Vec<VertexId>), LocalityError> {
    let mut edges = h.edges().to_vec();
    let touched = match edit {
        Perturbation::Identity => vec![],
        Perturbation::AddHyperedge(e) => {
            edges.push(e.clone());
            e.clone()
        }
        Perturbation::RemoveHyperedge(e) => {
            if *e >= edges.len() {
                return Err(LocalityError::MissingElement);
            }
            edges.remove(*e)
        }
        _ => return Err(LocalityError::KindMismatch("graph edge edit")),
    };
    Ok((Hypergraph::new(h.n(), edges)?, touched))
}

fn check_outside(ball: &[bool], touched: &[VertexId], radius: usize) -> Result<(), LocalityError> {
    for &v in touched {
        if v >= ball.len() {
            return Err(LocalityError::VertexOutOfRange(v));
        }
        if ball[v] {
            return Err(LocalityError::InsideBall { vertex: v, radius });
        }
    }
    Ok(())
}

fn check_bound(bound: usize, actual: usize) -> Result<(), LocalityError> {
    if actual > bound {
        return Err(LocalityError::GlobalParameter { bound, actual });
    }
    Ok(())
}

fn greedy_output(h: &Hypergraph, d: u64, steps: usize, v: VertexId) -> LocalOutput {
    let x = greedy_steps(h, d, steps);
    LocalOutput::EdgeValues(h.incident(v).iter().map(|&e| x.get(e)).collect())
}

fn coloring_output(
    g: &Graph,
    primitive: Primitive,
    bound: usize,
    palette: usize,
    v: VertexId,
) -> LocalOutput {
    let initial = VertexColoring::new((0..g.n()).collect(), palette, 0);
    let mut session = Session::new();
    let col = match primitive {
        Primitive::Linial => linial_coloring_bounded(g, &initial, bound, &mut session),
        Primitive::Defective { p } => {
            defective_coloring_bounded(g, &initial, p, bound, &mut session)
        }
        _ => unreachable!(),
    }
    .expect("ids are proper and the degree bound was checked");
    LocalOutput::Color(col.color(v))
}

/// Run `primitive` on `inst` and on `inst` edited by `perturbation`, and
/// compare the outputs at `vertex`. The edit must avoid the radius ball of
/// `vertex`, and `radius` must be at least the declared radius.
pub fn audit_locality(
    primitive: Primitive,
    inst: &Instance,
    vertex: VertexId,
    radius: usize,
    perturbation: &Perturbation,
) -> Result<LocalityVerdict, LocalityError> {
    let declared = primitive.declared_radius(inst);
    if radius < declared {
        return Err(LocalityError::RadiusTooSmall { radius, declared });
    }
    match (primitive, inst) {
        (Primitive::GreedyMatching { iterations }, Instance::Hypergraph(h)) => {
            if vertex >= h.n() {
                return Err(LocalityError::VertexOutOfRange(vertex));
            }
            let (h2, touched) = perturb_hypergraph(h, perturbation)?;
            check_outside(&h.ball(vertex, radius), &touched, radius)?;
            let d = (h.max_degree().max(1) as u64).next_power_of_two();
            check_bound(d as usize, h2.max_degree())?;
            Ok(LocalityVerdict {
                declared_radius: declared,
                original: greedy_output(h, d, iterations, vertex),
                perturbed: greedy_output(&h2, d, iterations, vertex),
            })
        }
        (Primitive::GreedyMatching { .. }, Instance::Graph(_)) => {
            Err(LocalityError::KindMismatch("greedy matching on a graph"))
        }
        (_, Instance::Hypergraph(_)) => Err(LocalityError::KindMismatch(primitive.name())),
        (Primitive::PackingDoubling { steps }, Instance::Graph(g)) => {
            if vertex >= g.n() {
                return Err(LocalityError::VertexOutOfRange(vertex));
            }
            let (g2, touched) = perturb_graph(g, perturbation)?;
            check_outside(&g.ball(vertex, radius), &touched, radius)?;
            let d = packing_denominator(g);
            check_bound(d as usize - 1, g2.max_degree())?;
            let a = packing_doubling_steps(g, d, steps);
            let b = packing_doubling_steps(&g2, d, steps);
            Ok(LocalityVerdict {
                declared_radius: declared,
                original: LocalOutput::Value(a.get(vertex)),
                perturbed: LocalOutput::Value(b.get(vertex)),
            })
        }
        (Primitive::Linial | Primitive::Defective { .. }, Instance::Graph(g)) => {
            if vertex >= g.n() {
                return Err(LocalityError::VertexOutOfRange(vertex));
            }
            let (g2, touched) = perturb_graph(g, perturbation)?;
            check_outside(&g.ball(vertex, radius), &touched, radius)?;
            let bound = g.max_degree();
            check_bound(bound, g2.max_degree())?;
            let palette = g.n().max(1);
            Ok(LocalityVerdict {
                declared_radius: declared,
                original: coloring_output(g, primitive, bound, palette, vertex),
                perturbed: coloring_output(&g2, primitive, bound, palette, vertex),
            })
        }
    }
}
