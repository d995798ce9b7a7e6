//! Greedy packings on graphs of bounded neighborhood independence, their
//! rounding to independent sets, and the MIS and vertex-coloring drivers
//! built on them.
//!
//! A greedy packing is a node vector `x` with an order under which
//! `x_v + sum of x_u over earlier neighbors u <= 1` for every node. The
//! order is kept explicitly as a witness. Only nodes listed in the witness
//! may carry positive values; unlisted nodes count as coming first.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{
    defective_coloring_bounded, defective_palette, defective_rounds, linial_coloring, ColoringError,
    VertexColoring,
};
use crate::dyadic::Dyadic;
use crate::hypergraph::{Graph, VertexId};
use crate::ledger::{RecursiveKind, Session, StepEvent};
use crate::rounding::{nested_factor, rounding_plan, RoundingParams};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyPacking {
    values: Vec<Dyadic>,
    floor: Dyadic,
    order: Vec<VertexId>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PackingViolation {
    #[error("packing has {got} values but the graph has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("node {0} in the witness order does not exist")]
    UnknownNode(VertexId),
    #[error("node {0} appears twice in the witness order")]
    Repeated(VertexId),
    #[error("node {0} has a positive value but is missing from the witness order")]
    Unordered(VertexId),
    #[error("node {vertex}: value plus earlier neighbors is {sum} > 1")]
    Exceeds { vertex: VertexId, sum: Dyadic },
    #[error("node {vertex} has value {value} below the floor {floor}")]
    BelowFloor {
        vertex: VertexId,
        value: Dyadic,
        floor: Dyadic,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingReport {
    pub violation: Option<PackingViolation>,
    /// `max_v` of the closed-neighborhood sum.
    pub max_local_sum: Dyadic,
}

impl PackingReport {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }

    /// Does the closed-neighborhood sum stay within the neighborhood
    /// independence `r` everywhere?
    pub fn within_independence_bound(&self, r: usize) -> bool {
        self.max_local_sum <= Dyadic::from_int(r as u64)
    }
}

impl GreedyPacking {
    pub fn new(values: Vec<Dyadic>, floor: Dyadic, order: Vec<VertexId>) -> Self {
        GreedyPacking {
            values,
            floor,
            order,
        }
    }

    pub fn zeros(n: usize, floor: Dyadic) -> Self {
        GreedyPacking::new(vec![Dyadic::ZERO; n], floor, Vec::new())
    }

    pub fn values(&self) -> &[Dyadic] {
        &self.values
    }

    pub fn get(&self, v: VertexId) -> Dyadic {
        self.values[v]
    }

    pub fn floor(&self) -> Dyadic {
        self.floor
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> Dyadic {
        self.values.iter().sum()
    }

    pub fn support(&self) -> Vec<VertexId> {
        (0..self.values.len())
            .filter(|&v| !self.values[v].is_zero())
            .collect()
    }

    /// Sum of the values on the closed neighborhood of `v`.
    pub fn local_sum(&self, g: &Graph, v: VertexId) -> Dyadic {
        self.values[v] + g.neighbors(v).iter().map(|&u| self.values[u]).sum::<Dyadic>()
    }

    fn local_sums(&self, g: &Graph) -> Vec<Dyadic> {
        (0..g.n()).map(|v| self.local_sum(g, v)).collect()
    }

    /// Move `moved` (in the given order) to the end of the witness.
    fn move_to_end(&mut self, moved: &[VertexId]) {
        let mut is_moved = vec![false; self.values.len()];
        for &v in moved {
            is_moved[v] = true;
        }
        self.order.retain(|&v| !is_moved[v]);
        self.order.extend_from_slice(moved);
    }
}

/// Check the witness-order inequality exactly for every node and report the
/// largest closed-neighborhood sum.
pub fn verify_greedy_packing(g: &Graph, p: &GreedyPacking) -> PackingReport {
    let fail = |violation| PackingReport {
        violation: Some(violation),
        max_local_sum: Dyadic::ZERO,
    };
    if p.len() != g.n() {
        return fail(PackingViolation::LengthMismatch {
            expected: g.n(),
            got: p.len(),
        });
    }
    let mut pos = vec![None; g.n()];
    for (i, &v) in p.order().iter().enumerate() {
        if v >= g.n() {
            return fail(PackingViolation::UnknownNode(v));
        }
        if pos[v].is_some() {
            return fail(PackingViolation::Repeated(v));
        }
        pos[v] = Some(i);
    }
    let max_local_sum = (0..g.n())
        .map(|v| p.local_sum(g, v))
        .max()
        .unwrap_or(Dyadic::ZERO);
    let mut violation = None;
    for v in 0..g.n() {
        let x = p.get(v);
        if x.is_zero() {
            continue;
        }
        if x < p.floor() {
            violation = Some(PackingViolation::BelowFloor {
                vertex: v,
                value: x,
                floor: p.floor(),
            });
            break;
        }
        let Some(pv) = pos[v] else {
            violation = Some(PackingViolation::Unordered(v));
            break;
        };
        let earlier: Dyadic = g
            .neighbors(v)
            .iter()
            .filter(|&&u| pos[u].map_or(false, |pu| pu < pv))
            .map(|&u| p.get(u))
            .sum();
        if x + earlier > Dyadic::ONE {
            violation = Some(PackingViolation::Exceeds {
                vertex: v,
                sum: x + earlier,
            });
            break;
        }
    }
    PackingReport {
        violation,
        max_local_sum,
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum PackingError {
    #[error("{name} = {value} is not a power of two")]
    NotPowerOfTwo { name: &'static str, value: u64 },
    #[error("rounding factor {l} exceeds the denominator {d}")]
    FactorTooLarge { l: u64, d: u64 },
    #[error("recursive packing rounding needs 2L < d, got L = {l}, d = {d}")]
    RecursionCondition { l: u64, d: u64 },
    #[error("input is not a (1/{d})-fractional greedy packing: {violation}")]
    InvalidInput {
        d: u64,
        violation: PackingViolation,
    },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

fn check_params(params: RoundingParams) -> Result<(), PackingError> {
    for (name, value) in [("L", params.l), ("d", params.d)] {
        if !value.is_power_of_two() {
            return Err(PackingError::NotPowerOfTwo { name, value });
        }
    }
    if params.l > params.d {
        return Err(PackingError::FactorTooLarge {
            l: params.l,
            d: params.d,
        });
    }
    Ok(())
}

fn check_input(g: &Graph, x: &GreedyPacking, d: u64) -> Result<(), PackingError> {
    let probe = GreedyPacking::new(x.values.clone(), Dyadic::recip_pow2(d), x.order.clone());
    match verify_greedy_packing(g, &probe).violation {
        Some(violation) => Err(PackingError::InvalidInput { d, violation }),
        None => Ok(()),
    }
}

/// Denominator of the initial packing: a power of two at least `Delta + 1`,
/// so that the closed-neighborhood sum of the uniform start is at most 1.
pub fn packing_denominator(g: &Graph) -> u64 {
    (g.max_degree() as u64 + 1).next_power_of_two()
}

/// One doubling step: every positive node with closed-neighborhood sum
/// below 1/2 doubles and moves to the end of the witness. Returns the
/// doubled nodes.
pub fn packing_doubling_step(g: &Graph, x: &mut GreedyPacking) -> Vec<VertexId> {
    let sums = x.local_sums(g);
    let grow: Vec<VertexId> = (0..g.n())
        .filter(|&v| !x.values[v].is_zero() && sums[v] < Dyadic::half())
        .collect();
    for &v in &grow {
        x.values[v] = x.values[v].doubled();
    }
    x.move_to_end(&grow);
    grow
}

/// `steps` doubling steps from the uniform packing `1/d`.
pub fn packing_doubling_steps(g: &Graph, d: u64, steps: usize) -> GreedyPacking {
    let floor = Dyadic::recip_pow2(d);
    let mut x = GreedyPacking::new(vec![floor; g.n()], floor, (0..g.n()).collect());
    for _ in 0..steps {
        packing_doubling_step(g, &mut x);
    }
    x
}

/// Greedy packing with every closed-neighborhood sum at least 1/2, hence
/// at least `1/(2r)` of any independent set.
pub fn initial_packing(g: &Graph, session: &mut Session<'_>) -> GreedyPacking {
    initial_packing_with(g, packing_denominator(g), session)
}

/// [`initial_packing`] with an explicit power-of-two denominator
/// `d >= Delta + 1`.
pub fn initial_packing_with(g: &Graph, d: u64, session: &mut Session<'_>) -> GreedyPacking {
    assert!(d.is_power_of_two() && d as usize > g.max_degree());
    let floor = Dyadic::recip_pow2(d);
    let mut x = GreedyPacking::new(vec![floor; g.n()], floor, (0..g.n()).collect());
    session.observe(StepEvent::Packing {
        stage: "packing_init",
        graph: g,
        packing: &x,
    });
    let steps = d.trailing_zeros();
    for _ in 0..steps {
        packing_doubling_step(g, &mut x);
        session.observe(StepEvent::Packing {
            stage: "packing_doubling",
            graph: g,
            packing: &x,
        });
    }
    session.charge("greedy_packing", "log(Delta)", steps as u64);
    x
}

/// Round a `(1/d)`-fractional greedy packing to an `(L/d)`-fractional one
/// of at least `1/(2r)` of its size, supported inside the input support.
///
/// `r` bounds the neighborhood independence; `vcol` is a proper coloring of
/// `g`.
pub fn basic_round_packing(
    g: &Graph,
    x: &GreedyPacking,
    params: RoundingParams,
    r: usize,
    vcol: &VertexColoring,
    session: &mut Session<'_>,
) -> Result<GreedyPacking, PackingError> {
    check_params(params)?;
    check_input(g, x, params.d)?;
    let (l, d) = (params.l, params.d);
    let step = params.floor();
    let mut y = GreedyPacking::zeros(g.n(), step);
    let support = x.support();
    let p = (d / (2 * l)).saturating_sub(1) as usize;
    let doublings = d.trailing_zeros() - l.trailing_zeros();
    if support.is_empty() {
        // The schedule runs even when no node holds any value.
        let bound = r.max(1) * d as usize;
        let palette = vcol.palette_size();
        session.charge("defective", "log*(C)", defective_rounds(palette, bound, p) as u64);
        session.charge(
            "basic_round_packing",
            "O((rL)^2) color classes",
            defective_palette(palette, bound, p) as u64,
        );
        session.charge("basic_round_packing", "log(d/L) doublings", doublings as u64);
        return Ok(y);
    }

    let mut mask = vec![false; g.n()];
    for &v in &support {
        mask[v] = true;
    }
    let (gx, old_ids) = g.induced(&mask);
    let bound = (r.max(1) * d as usize).max(gx.max_degree());
    let classes = defective_coloring_bounded(&gx, &vcol.restrict(&old_ids), p, bound, session)?;

    let mut by_color: Vec<(usize, VertexId)> = (0..old_ids.len())
        .map(|i| (classes.color(i), old_ids[i]))
        .collect();
    by_color.sort_unstable();
    let mut i = 0;
    while i < by_color.len() {
        let color = by_color[i].0;
        let mut j = i;
        while j < by_color.len() && by_color[j].0 == color {
            j += 1;
        }
        let raise: Vec<VertexId> = by_color[i..j]
            .iter()
            .map(|&(_, v)| v)
            .filter(|&v| y.local_sum(g, v) <= Dyadic::half())
            .collect();
        for &v in &raise {
            y.values[v] = step;
        }
        y.move_to_end(&raise);
        session.observe(StepEvent::Packing {
            stage: "basic_color_class",
            graph: g,
            packing: &y,
        });
        i = j;
    }
    session.charge(
        "basic_round_packing",
        "O((rL)^2) color classes",
        classes.palette_size() as u64,
    );

    for _ in 0..doublings {
        packing_doubling_step(g, &mut y);
        session.observe(StepEvent::Packing {
            stage: "basic_doubling",
            graph: g,
            packing: &y,
        });
    }
    session.charge("basic_round_packing", "log(d/L) doublings", doublings as u64);
    Ok(y)
}

fn round_nested(
    g: &Graph,
    x: &GreedyPacking,
    params: RoundingParams,
    r: usize,
    vcol: &VertexColoring,
    session: &mut Session<'_>,
) -> Result<GreedyPacking, PackingError> {
    if params.l <= 4 || 2 * params.l >= params.d {
        basic_round_packing(g, x, params, r, vcol, session)
    } else {
        recursive_round_packing(g, x, params, r, vcol, session)
    }
}

/// Round a `(1/d)`-fractional greedy packing to an `(L/d)`-fractional one
/// of at least `1/(4r)` of its size. Requires `2L < d`; `L <= 4` is
/// [`basic_round_packing`].
pub fn recursive_round_packing(
    g: &Graph,
    x: &GreedyPacking,
    params: RoundingParams,
    r: usize,
    vcol: &VertexColoring,
    session: &mut Session<'_>,
) -> Result<GreedyPacking, PackingError> {
    check_params(params)?;
    if params.l <= 4 {
        return basic_round_packing(g, x, params, r, vcol, session);
    }
    if 2 * params.l >= params.d {
        return Err(PackingError::RecursionCondition {
            l: params.l,
            d: params.d,
        });
    }
    check_input(g, x, params.d)?;
    let r = r.max(1);
    let cap = params.iteration_cap.unwrap_or(16 * r);
    let inner = nested_factor(params.l);
    let input_total = x.total();
    let mut y = GreedyPacking::zeros(g.n(), params.floor());

    for _ in 0..cap {
        let before = y.total();
        if before.mul_int(4 * r as u64) >= input_total {
            break;
        }
        let sums = y.local_sums(g);
        let open: Vec<bool> = sums.iter().map(|&s| s < Dyadic::half()).collect();
        let z = GreedyPacking::new(
            (0..g.n())
                .map(|v| if open[v] { x.get(v) } else { Dyadic::ZERO })
                .collect(),
            x.floor(),
            x.order().iter().copied().filter(|&v| open[v]).collect(),
        );
        let z1 = round_nested(g, &z, RoundingParams::new(inner, params.d), r, vcol, session)?;
        let z2 = round_nested(
            g,
            &z1,
            RoundingParams::new(inner, params.d / inner),
            r,
            vcol,
            session,
        )?;

        // Saturated nodes keep their place, then the open nodes z2 leaves
        // alone, then z2's own witness.
        let mut order: Vec<VertexId> = y.order().iter().copied().filter(|&v| !open[v]).collect();
        order.extend(
            y.order()
                .iter()
                .copied()
                .filter(|&v| open[v] && z2.get(v).is_zero()),
        );
        order.extend(z2.order().iter().copied().filter(|&v| !z2.get(v).is_zero()));
        let mut added = Dyadic::ZERO;
        for v in 0..g.n() {
            let half = z2.get(v).halved();
            y.values[v] += half;
            added += half;
        }
        y.order = order;

        session.charge("recursive_round_packing", "O(1) per phase", 2);
        session.observe(StepEvent::RecursiveIteration {
            kind: RecursiveKind::Packing,
            r,
            input_total,
            before,
            added,
        });
        session.observe(StepEvent::Packing {
            stage: "recursive_update",
            graph: g,
            packing: &y,
        });
    }
    Ok(y)
}

/// A set of nodes, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependentSet {
    nodes: Vec<VertexId>,
}

impl IndependentSet {
    pub fn new(mut nodes: Vec<VertexId>) -> Self {
        nodes.sort_unstable();
        nodes.dedup();
        IndependentSet { nodes }
    }

    pub fn nodes(&self) -> &[VertexId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.nodes.binary_search(&v).is_ok()
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum IndependenceViolation {
    #[error("node {0} does not exist")]
    UnknownNode(VertexId),
    #[error("nodes {0} and {1} are adjacent")]
    Adjacent(VertexId, VertexId),
    #[error("node {0} is neither in the set nor adjacent to it")]
    NotDominated(VertexId),
}

pub fn validate_independent_set(
    g: &Graph,
    s: &IndependentSet,
    require_maximal: bool,
) -> Result<(), IndependenceViolation> {
    let mut inside = vec![false; g.n()];
    for &v in s.nodes() {
        if v >= g.n() {
            return Err(IndependenceViolation::UnknownNode(v));
        }
        inside[v] = true;
    }
    for &(u, v) in g.edges() {
        if inside[u] && inside[v] {
            return Err(IndependenceViolation::Adjacent(u, v));
        }
    }
    if require_maximal {
        for v in 0..g.n() {
            if !inside[v] && !g.neighbors(v).iter().any(|&u| inside[u]) {
                return Err(IndependenceViolation::NotDominated(v));
            }
        }
    }
    Ok(())
}

/// A `(32 r^3)`-approximate maximum independent set in a graph of
/// neighborhood independence at most `r`.
pub fn approx_mis(g: &Graph, r: usize, session: &mut Session<'_>) -> IndependentSet {
    let vcol = linial_coloring(g, &VertexColoring::from_ids(g.n()), session)
        .expect("node ids are a proper coloring");
    approx_mis_with(g, &vcol, packing_denominator(g), r, session)
}

/// [`approx_mis`] with a precomputed proper coloring and initial
/// denominator `d >= Delta + 1`.
pub fn approx_mis_with(
    g: &Graph,
    vcol: &VertexColoring,
    d: u64,
    r: usize,
    session: &mut Session<'_>,
) -> IndependentSet {
    if g.n() == 0 {
        return IndependentSet::default();
    }
    let x = initial_packing_with(g, d, session);
    let y = match rounding_plan(d) {
        None => basic_round_packing(g, &x, RoundingParams::new(d, d), r, vcol, session),
        Some((l1, l2)) => {
            recursive_round_packing(g, &x, RoundingParams::new(l1, d), r, vcol, session).and_then(
                |x1| basic_round_packing(g, &x1, RoundingParams::new(l2, l2), r, vcol, session),
            )
        }
    }
    .expect("parameters of the approximation pipeline are always admissible");
    IndependentSet::new((0..g.n()).filter(|&v| y.get(v) == Dyadic::ONE).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MisOutcome {
    pub set: IndependentSet,
    pub iterations: usize,
}

/// Maximal independent set by repeated approximation on the nodes not yet
/// in or next to the set.
pub fn maximal_independent_set(g: &Graph, r: usize, session: &mut Session<'_>) -> MisOutcome {
    let mut out = MisOutcome {
        set: IndependentSet::default(),
        iterations: 0,
    };
    if g.n() == 0 {
        return out;
    }
    let vcol = linial_coloring(g, &VertexColoring::from_ids(g.n()), session)
        .expect("node ids are a proper coloring");
    let d = packing_denominator(g);
    let mut alive = vec![true; g.n()];
    let mut chosen = Vec::new();
    while alive.iter().any(|&a| a) {
        let (sub, old_ids) = g.induced(&alive);
        let s = approx_mis_with(&sub, &vcol.restrict(&old_ids), d, r, session);
        assert!(!s.is_empty(), "approximation returned nothing on a nonempty graph");
        for &v in s.nodes() {
            let v = old_ids[v];
            chosen.push(v);
            alive[v] = false;
            for &u in g.neighbors(v) {
                alive[u] = false;
            }
        }
        out.iterations += 1;
        session.charge("mis_driver", "1 per repetition", 1);
    }
    out.set = IndependentSet::new(chosen);
    out
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum VertexColorError {
    #[error("node {vertex} has {size} colors, needs at least {required}")]
    ListTooShort {
        vertex: VertexId,
        size: usize,
        required: usize,
    },
    #[error("{got} color lists for {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("node {vertex} received {count} colors from the independent set")]
    Decode { vertex: VertexId, count: usize },
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum VertexColoringViolation {
    #[error("{got} colors for {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("adjacent nodes {0} and {1} share color {2}")]
    Conflict(VertexId, VertexId, usize),
    #[error("node {vertex} has color {color}, not in its list")]
    NotInList { vertex: VertexId, color: usize },
}

pub fn validate_vertex_coloring(
    g: &Graph,
    colors: &[usize],
    lists: Option<&[Vec<usize>]>,
) -> Result<(), VertexColoringViolation> {
    if colors.len() != g.n() {
        return Err(VertexColoringViolation::LengthMismatch {
            expected: g.n(),
            got: colors.len(),
        });
    }
    if let Some(lists) = lists {
        for v in 0..g.n() {
            if !lists[v].contains(&colors[v]) {
                return Err(VertexColoringViolation::NotInList {
                    vertex: v,
                    color: colors[v],
                });
            }
        }
    }
    for &(u, v) in g.edges() {
        if colors[u] == colors[v] {
            return Err(VertexColoringViolation::Conflict(u, v, colors[u]));
        }
    }
    Ok(())
}

/// The conflict graph whose maximal independent sets are list colorings:
/// one node per (vertex, color) pair, a clique on each vertex's pairs, and
/// an edge between equal colors of adjacent vertices. Returns the graph
/// and the pair behind each node.
pub fn color_product(g: &Graph, lists: &[Vec<usize>]) -> (Graph, Vec<(VertexId, usize)>) {
    let mut pairs = Vec::new();
    let mut first = Vec::with_capacity(g.n());
    for (v, list) in lists.iter().enumerate() {
        first.push(pairs.len());
        for &c in list {
            pairs.push((v, c));
        }
    }
    let mut edges = Vec::new();
    for v in 0..g.n() {
        let k = lists[v].len();
        for i in 0..k {
            for j in i + 1..k {
                edges.push((first[v] + i, first[v] + j));
            }
        }
    }
    for &(u, v) in g.edges() {
        for (i, c) in lists[u].iter().enumerate() {
            if let Some(j) = lists[v].iter().position(|x| x == c) {
                edges.push((first[u] + i, first[v] + j));
            }
        }
    }
    (
        Graph::new(pairs.len(), &edges).expect("product graph is simple"),
        pairs,
    )
}

/// List vertex coloring through an MIS of [`color_product`]. Without lists
/// every node uses `1..=Delta+1`. `r` bounds the neighborhood independence
/// of `g`; the product's is at most `r + 1`.
pub fn vertex_color(
    g: &Graph,
    lists: Option<&[Vec<usize>]>,
    r: usize,
    session: &mut Session<'_>,
) -> Result<Vec<usize>, VertexColorError> {
    let default: Vec<Vec<usize>>;
    let lists = match lists {
        Some(l) => l,
        None => {
            default = vec![(1..=g.max_degree() + 1).collect(); g.n()];
            &default
        }
    };
    if lists.len() != g.n() {
        return Err(VertexColorError::LengthMismatch {
            expected: g.n(),
            got: lists.len(),
        });
    }
    for v in 0..g.n() {
        let mut l = lists[v].clone();
        l.sort_unstable();
        l.dedup();
        if l.len() < g.degree(v) + 1 {
            return Err(VertexColorError::ListTooShort {
                vertex: v,
                size: l.len(),
                required: g.degree(v) + 1,
            });
        }
    }
    let dedup: Vec<Vec<usize>> = lists
        .iter()
        .map(|l| {
            let mut seen = Vec::new();
            for &c in l {
                if !seen.contains(&c) {
                    seen.push(c);
                }
            }
            seen
        })
        .collect();
    let (product, pairs) = color_product(g, &dedup);
    let mis = maximal_independent_set(&product, r + 1, session);
    let mut colors = vec![None; g.n()];
    let mut counts = vec![0usize; g.n()];
    for &i in mis.set.nodes() {
        let (v, c) = pairs[i];
        colors[v] = Some(c);
        counts[v] += 1;
    }
    (0..g.n())
        .map(|v| match (counts[v], colors[v]) {
            (1, Some(c)) => Ok(c),
            (count, _) => Err(VertexColorError::Decode { vertex: v, count }),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::new(n, e).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        graph(n, &e)
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

    fn dy(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn verify_examples() {
        let tri = complete(3);
        let zero = GreedyPacking::zeros(3, dy("1/4"));
        assert!(verify_greedy_packing(&tri, &zero).is_valid());
        let single = Graph::empty(1);
        let one = GreedyPacking::new(vec![Dyadic::ONE], Dyadic::ONE, vec![0]);
        assert!(verify_greedy_packing(&single, &one).is_valid());
        let ones = GreedyPacking::new(vec![Dyadic::ONE; 3], Dyadic::ONE, vec![0, 1, 2]);
        assert!(matches!(
            verify_greedy_packing(&tri, &ones).violation,
            Some(PackingViolation::Exceeds { vertex: 1, .. })
        ));
        let unordered = GreedyPacking::new(vec![Dyadic::ONE], Dyadic::ONE, vec![]);
        assert_eq!(
            verify_greedy_packing(&single, &unordered).violation,
            Some(PackingViolation::Unordered(0))
        );
    }

    #[test]
    fn zero_nodes_come_first() {
        // A center with value 0 after its leaves is fine only because
        // unlisted nodes count as first.
        let star = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        let p = GreedyPacking::new(
            vec![Dyadic::ZERO, Dyadic::ONE, Dyadic::ONE, Dyadic::ONE],
            Dyadic::ONE,
            vec![1, 2, 3],
        );
        let rep = verify_greedy_packing(&star, &p);
        assert!(rep.is_valid());
        assert_eq!(rep.max_local_sum, Dyadic::from_int(3));
        assert!(rep.within_independence_bound(3));
        assert!(!rep.within_independence_bound(2));
    }

    #[test]
    fn initial_packing_examples() {
        let mut s = Session::new();
        let iso = Graph::empty(1);
        assert_eq!(initial_packing(&iso, &mut s).values(), &[Dyadic::ONE]);

        let star = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        let x = initial_packing(&star, &mut s);
        assert_eq!(x.values(), &[dy("1/4"); 4]);

        let c5 = cycle(5);
        let x = initial_packing(&c5, &mut s);
        assert_eq!(x.values(), &[dy("1/4"); 5]);
        assert!(verify_greedy_packing(&c5, &x).is_valid());
        for v in 0..5 {
            assert!(x.local_sum(&c5, v) >= Dyadic::half());
        }
    }

    #[test]
    fn basic_packing_examples() {
        let mut s = Session::new();
        let iso = Graph::empty(1);
        let vcol = VertexColoring::from_ids(1);
        let x = GreedyPacking::new(vec![dy("1/4")], dy("1/4"), vec![0]);
        let y = basic_round_packing(&iso, &x, RoundingParams::new(2, 4), 1, &vcol, &mut s).unwrap();
        assert_eq!(y.values(), &[dy("1/2")]);

        let k4 = complete(4);
        let vcol = VertexColoring::from_ids(4);
        let x = GreedyPacking::new(vec![dy("1/8"); 4], dy("1/8"), vec![0, 1, 2, 3]);
        let y = basic_round_packing(&k4, &x, RoundingParams::new(8, 8), 1, &vcol, &mut s).unwrap();
        assert_eq!(y.support().len(), 1);
        assert_eq!(y.total(), Dyadic::ONE);
        assert!(verify_greedy_packing(&k4, &y).is_valid());
        assert!(y.total().mul_int(2) >= x.total());
    }

    #[test]
    fn recursive_packing_zero_and_condition() {
        let mut s = Session::new();
        let c5 = cycle(5);
        let vcol = VertexColoring::from_ids(5);
        let zero = GreedyPacking::zeros(5, dy("1/64"));
        let y = recursive_round_packing(&c5, &zero, RoundingParams::new(8, 64), 2, &vcol, &mut s)
            .unwrap();
        assert!(y.total().is_zero());
        assert!(matches!(
            recursive_round_packing(&c5, &zero, RoundingParams::new(8, 16), 2, &vcol, &mut s),
            Err(PackingError::RecursionCondition { .. })
        ));
    }

    #[test]
    fn mis_examples() {
        let mut s = Session::new();
        let k5 = complete(5);
        let out = maximal_independent_set(&k5, 1, &mut s);
        assert_eq!(out.set.len(), 1);
        assert!(validate_independent_set(&k5, &out.set, true).is_ok());

        let c5 = cycle(5);
        let out = maximal_independent_set(&c5, 2, &mut s);
        assert_eq!(out.set.len(), 2);
        assert!(validate_independent_set(&c5, &out.set, true).is_ok());
    }

    #[test]
    fn vertex_color_examples() {
        let mut s = Session::new();
        let single = Graph::empty(1);
        assert_eq!(vertex_color(&single, None, 1, &mut s).unwrap(), vec![1]);

        let k3 = complete(3);
        let c = vertex_color(&k3, None, 1, &mut s).unwrap();
        assert!(validate_vertex_coloring(&k3, &c, None).is_ok());
        let mut sorted = c.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![1, 2, 3]);

        let c5 = cycle(5);
        let lists: Vec<Vec<usize>> = (0..5).map(|v| vec![v, v + 1, 10]).collect();
        let c = vertex_color(&c5, Some(&lists), 2, &mut s).unwrap();
        assert!(validate_vertex_coloring(&c5, &c, Some(&lists)).is_ok());

        let short = vec![vec![1], vec![1, 2], vec![1, 2, 3, 4, 5]];
        assert!(matches!(
            vertex_color(&graph(3, &[(0, 1)]), Some(&short), 1, &mut s),
            Err(VertexColorError::ListTooShort { vertex: 0, .. })
        ));
    }
}
