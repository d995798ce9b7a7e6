//! Fractional matchings in hypergraphs and their deterministic rounding.
//!
//! The pipeline is: a greedy `(1/D)`-fractional matching, a recursive
//! rounding that raises the fractionality floor by a factor `L`, a basic
//! rounding that finishes at floor 1, and a driver that repeats the
//! resulting constant-factor approximation until the matching is maximal.
//!
//! All rounding factors and denominators are powers of two, so every value
//! is an exact [`Dyadic`].

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{
    defective_coloring_bounded, defective_palette, defective_rounds, edge_coloring_init,
    ColoringError, VertexColoring,
};
use crate::dyadic::Dyadic;
use crate::hypergraph::{
    line_graph, validate_fractional_matching, EdgeId, FractionalAssignment, FractionalViolation,
    Hypergraph, Matching,
};
use crate::ledger::{RecursiveKind, Session, StepEvent};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum RoundingError {
    #[error("{name} = {value} is not a power of two")]
    NotPowerOfTwo { name: &'static str, value: u64 },
    #[error("rounding factor {l} exceeds the denominator {d}")]
    FactorTooLarge { l: u64, d: u64 },
    #[error("recursive rounding needs L log2(L)^2 <= d, got L = {l}, d = {d}")]
    RecursionCondition { l: u64, d: u64 },
    #[error("input is not a valid (1/{d})-fractional matching: {violation}")]
    InvalidInput {
        d: u64,
        violation: FractionalViolation,
    },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// Rounding factor `l`, fractionality denominator `d`, and an optional cap
/// on recursive iterations (default `16 r`; the loop stops early once the
/// output reaches a `1/(4 r)` share of the input).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundingParams {
    pub l: u64,
    pub d: u64,
    pub iteration_cap: Option<usize>,
}

impl RoundingParams {
    pub fn new(l: u64, d: u64) -> Self {
        RoundingParams {
            l,
            d,
            iteration_cap: None,
        }
    }

    fn check(&self) -> Result<(), RoundingError> {
        for (name, value) in [("L", self.l), ("d", self.d)] {
            if !value.is_power_of_two() {
                return Err(RoundingError::NotPowerOfTwo { name, value });
            }
        }
        if self.l > self.d {
            return Err(RoundingError::FactorTooLarge {
                l: self.l,
                d: self.d,
            });
        }
        Ok(())
    }

    /// `L log2(L)^2 <= d`.
    pub fn recursion_allowed(&self) -> bool {
        let lg = self.l.trailing_zeros() as u128;
        (self.l as u128) * lg * lg <= self.d as u128
    }

    pub fn floor(&self) -> Dyadic {
        Dyadic::recip_pow2(self.d).mul_int(self.l)
    }
}

fn log2(v: u64) -> u32 {
    debug_assert!(v.is_power_of_two());
    v.trailing_zeros()
}

fn loads(h: &Hypergraph, values: &[Dyadic]) -> Vec<Dyadic> {
    let mut out = vec![Dyadic::ZERO; h.n()];
    for (e, &x) in values.iter().enumerate() {
        if !x.is_zero() {
            for &v in h.edge(e) {
                out[v] += x;
            }
        }
    }
    out
}

fn touches_half_tight(h: &Hypergraph, load: &[Dyadic], e: EdgeId) -> bool {
    h.edge(e).iter().any(|&v| load[v] >= Dyadic::half())
}

fn check_input(h: &Hypergraph, x: &FractionalAssignment, d: u64) -> Result<(), RoundingError> {
    let probe = x.clone().with_floor(Dyadic::recip_pow2(d));
    match validate_fractional_matching(h, &probe).violation {
        Some(violation) => Err(RoundingError::InvalidInput { d, violation }),
        None => Ok(()),
    }
}

/// One synchronous doubling step of the greedy fractional matching: every
/// edge without a half-tight vertex doubles. Returns whether anything
/// changed.
pub fn greedy_step(h: &Hypergraph, x: &mut FractionalAssignment) -> bool {
    let load = loads(h, x.values());
    let grow: Vec<EdgeId> = (0..h.m())
        .filter(|&e| !touches_half_tight(h, &load, e))
        .collect();
    for &e in &grow {
        x.set(e, x.get(e).doubled());
    }
    !grow.is_empty()
}

/// `steps` greedy iterations from the uniform assignment `1/d`.
pub fn greedy_steps(h: &Hypergraph, d: u64, steps: usize) -> FractionalAssignment {
    let floor = Dyadic::recip_pow2(d);
    let mut x = FractionalAssignment::from_values(vec![floor; h.m()], floor);
    for _ in 0..steps {
        greedy_step(h, &mut x);
    }
    x
}

/// Greedy `(2r)`-approximate fractional matching with denominator
/// `D = next_power_of_two(Delta)`.
pub fn greedy_fractional_matching(h: &Hypergraph, session: &mut Session<'_>) -> FractionalAssignment {
    let d = (h.max_degree().max(1) as u64).next_power_of_two();
    greedy_with_denominator(h, d, session)
}

/// Greedy fractional matching started from `1/d`, where `d` is a power of
/// two at least the maximum degree. Runs `log2 d` iterations; afterwards
/// every edge has a half-tight vertex.
pub fn greedy_with_denominator(
    h: &Hypergraph,
    d: u64,
    session: &mut Session<'_>,
) -> FractionalAssignment {
    assert!(d.is_power_of_two() && d as usize >= h.max_degree());
    let floor = Dyadic::recip_pow2(d);
    let mut x = FractionalAssignment::from_values(vec![floor; h.m()], floor);
    session.observe(StepEvent::Matching {
        stage: "greedy_init",
        hypergraph: h,
        values: &x,
    });
    for _ in 0..log2(d) {
        greedy_step(h, &mut x);
        session.observe(StepEvent::Matching {
            stage: "greedy_step",
            hypergraph: h,
            values: &x,
        });
    }
    session.charge("greedy", "log(Delta)", log2(d) as u64);
    x
}

/// Round a `(1/d)`-fractional matching to an `(L/d)`-fractional one of at
/// least `1/(2r)` of its size, using a defective coloring of the line graph
/// of the support.
///
/// `ecol` must be a proper coloring of the line graph of `h`, such as
/// [`edge_coloring_init`] returns.
pub fn basic_round(
    h: &Hypergraph,
    x: &FractionalAssignment,
    params: RoundingParams,
    ecol: &VertexColoring,
    session: &mut Session<'_>,
) -> Result<FractionalAssignment, RoundingError> {
    params.check()?;
    check_input(h, x, params.d)?;
    let (l, d) = (params.l, params.d);
    let step = params.floor();
    let mut y = FractionalAssignment::zeros(h.m(), step);
    let support = x.support();
    let p = (d / (2 * l)).saturating_sub(1) as usize;
    let doublings = log2(d) - log2(l);
    if support.is_empty() {
        // Nodes cannot see that the input is empty everywhere, so the
        // schedule runs anyway.
        let bound = h.rank().max(1) * d as usize;
        let palette = ecol.palette_size();
        session.charge("defective", "log*(C)", defective_rounds(palette, bound, p) as u64);
        session.charge(
            "basic_round",
            "O(L^2 r^2) color classes",
            defective_palette(palette, bound, p) as u64,
        );
        session.charge("basic_round", "log(d/L) doublings", doublings as u64);
        return Ok(y);
    }

    let sub = h.restrict(&support);
    let f = line_graph(&sub);
    let bound = (h.rank() * d as usize).max(f.max_degree());
    let classes = defective_coloring_bounded(&f, &ecol.restrict(&support), p, bound, session)?;

    let mut by_color: Vec<(usize, EdgeId)> = (0..support.len())
        .map(|i| (classes.color(i), support[i]))
        .collect();
    by_color.sort_unstable();

    let mut load = vec![Dyadic::ZERO; h.n()];
    let mut i = 0;
    while i < by_color.len() {
        let color = by_color[i].0;
        let mut j = i;
        while j < by_color.len() && by_color[j].0 == color {
            j += 1;
        }
        let raise: Vec<EdgeId> = by_color[i..j]
            .iter()
            .map(|&(_, e)| e)
            .filter(|&e| !touches_half_tight(h, &load, e))
            .collect();
        for &e in &raise {
            y.set(e, step);
            for &v in h.edge(e) {
                load[v] += step;
            }
        }
        session.observe(StepEvent::Matching {
            stage: "basic_color_class",
            hypergraph: h,
            values: &y,
        });
        i = j;
    }
    session.charge(
        "basic_round",
        "O(L^2 r^2) color classes",
        classes.palette_size() as u64,
    );

    for _ in 0..doublings {
        let grow: Vec<EdgeId> = support
            .iter()
            .copied()
            .filter(|&e| !y.get(e).is_zero() && !touches_half_tight(h, &load, e))
            .collect();
        for &e in &grow {
            let old = y.get(e);
            y.set(e, old.doubled());
            for &v in h.edge(e) {
                load[v] += old;
            }
        }
        session.observe(StepEvent::Matching {
            stage: "basic_doubling",
            hypergraph: h,
            values: &y,
        });
    }
    session.charge("basic_round", "log(d/L) doublings", doublings as u64);
    Ok(y)
}

/// The factor used by the two nested calls: `sqrt(2L)` rounded up to a
/// power of two.
pub fn nested_factor(l: u64) -> u64 {
    1 << ((log2(l) + 2) / 2)
}

fn round_nested(
    h: &Hypergraph,
    x: &FractionalAssignment,
    params: RoundingParams,
    ecol: &VertexColoring,
    session: &mut Session<'_>,
) -> Result<FractionalAssignment, RoundingError> {
    if params.l <= 4 || !params.recursion_allowed() {
        basic_round(h, x, params, ecol, session)
    } else {
        recursive_round(h, x, params, ecol, session)
    }
}

/// Round a `(1/d)`-fractional matching to an `(L/d)`-fractional one of at
/// least `1/(4r)` of its size, by repeatedly rounding the part of `x` not
/// yet blocked by half-tight vertices with two nested calls at factor
/// `~sqrt(2L)`.
///
/// Requires `L log2(L)^2 <= d`. For `L <= 4` this is [`basic_round`]. A
/// nested call whose own parameters fail the condition uses basic rounding
/// instead.
pub fn recursive_round(
    h: &Hypergraph,
    x: &FractionalAssignment,
    params: RoundingParams,
    ecol: &VertexColoring,
    session: &mut Session<'_>,
) -> Result<FractionalAssignment, RoundingError> {
    params.check()?;
    if params.l <= 4 {
        return basic_round(h, x, params, ecol, session);
    }
    if !params.recursion_allowed() {
        return Err(RoundingError::RecursionCondition {
            l: params.l,
            d: params.d,
        });
    }
    check_input(h, x, params.d)?;
    let r = h.rank().max(1);
    let cap = params.iteration_cap.unwrap_or(16 * r);
    let inner = nested_factor(params.l);
    let input_total = x.total();
    let mut y = FractionalAssignment::zeros(h.m(), params.floor());

    for _ in 0..cap {
        let before = y.total();
        if before.mul_int(4 * r as u64) >= input_total {
            break;
        }
        let load = loads(h, y.values());
        let mut z = x.clone();
        for e in 0..h.m() {
            if touches_half_tight(h, &load, e) {
                z.set(e, Dyadic::ZERO);
            }
        }
        let first = RoundingParams::new(inner, params.d);
        let z1 = round_nested(h, &z, first, ecol, session)?;
        let second = RoundingParams::new(inner, params.d / inner);
        let z2 = round_nested(h, &z1, second, ecol, session)?;
        let mut added = Dyadic::ZERO;
        for e in 0..h.m() {
            let v = z2.get(e);
            if !v.is_zero() {
                y.set(e, y.get(e) + v.halved());
                added += v.halved();
            }
        }
        session.charge("recursive_round", "O(1) per iteration", 2);
        session.observe(StepEvent::RecursiveIteration {
            kind: RecursiveKind::Matching,
            r,
            input_total,
            before,
            added,
        });
        session.observe(StepEvent::Matching {
            stage: "recursive_update",
            hypergraph: h,
            values: &y,
        });
    }
    Ok(y)
}

/// `(L1, L2)` used by the approximation for initial denominator `D`: `None`
/// when `D` is too small for recursion and a single basic rounding with
/// `L = D` is used.
pub fn rounding_plan(d: u64) -> Option<(u64, u64)> {
    let lg = log2(d) as u64;
    if lg == 0 || d <= lg * lg {
        return None;
    }
    let l1 = 1u64 << (63 - (d / (lg * lg)).leading_zeros());
    if l1 < 2 {
        return None;
    }
    Some((l1, d / l1))
}

/// A `(32 r^3)`-approximate maximum matching.
pub fn approx_max_matching(h: &Hypergraph, session: &mut Session<'_>) -> Matching {
    let ecol = edge_coloring_init(h, session);
    let d = (h.max_degree().max(1) as u64).next_power_of_two();
    approx_max_matching_with(h, &ecol, d, session)
}

/// [`approx_max_matching`] with a precomputed line-graph coloring and a
/// denominator `d` (power of two, at least the maximum degree).
pub fn approx_max_matching_with(
    h: &Hypergraph,
    ecol: &VertexColoring,
    d: u64,
    session: &mut Session<'_>,
) -> Matching {
    if h.m() == 0 {
        return Matching::default();
    }
    let x = greedy_with_denominator(h, d, session);
    let y = match rounding_plan(d) {
        None => basic_round(h, &x, RoundingParams::new(d, d), ecol, session),
        Some((l1, l2)) => recursive_round(h, &x, RoundingParams::new(l1, d), ecol, session)
            .and_then(|x1| basic_round(h, &x1, RoundingParams::new(l2, l2), ecol, session)),
    }
    .expect("parameters of the approximation pipeline are always admissible");
    Matching::new(
        (0..h.m())
            .filter(|&e| y.get(e) == Dyadic::ONE)
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalOutcome {
    pub matching: Matching,
    /// Edges disjoint from the matching when the iteration cap stopped the
    /// driver; empty for an uncapped run.
    pub unblocked: Vec<EdgeId>,
    pub iterations: usize,
}

/// Iteration cap used for a slack `eps`: `ceil(32 r^3 ln(1/eps))`.
pub fn slack_iterations(rank: usize, eps: f64) -> usize {
    let r = rank.max(1) as f64;
    (32.0 * r * r * r * (1.0 / eps).ln()).ceil().max(1.0) as usize
}

/// Maximal matching by repeated approximation on the hypergraph of edges
/// still disjoint from the matching. With `slack = Some(eps)` the driver
/// stops after [`slack_iterations`] rounds and reports the edges that are
/// still unblocked.
pub fn maximal_matching(
    h: &Hypergraph,
    slack: Option<f64>,
    session: &mut Session<'_>,
) -> MaximalOutcome {
    let mut outcome = MaximalOutcome {
        matching: Matching::default(),
        unblocked: Vec::new(),
        iterations: 0,
    };
    if h.m() == 0 {
        return outcome;
    }
    let ecol = edge_coloring_init(h, session);
    let d = (h.max_degree() as u64).next_power_of_two();
    let cap = slack.map(|eps| slack_iterations(h.rank(), eps));
    let mut used = vec![false; h.n()];
    let mut active: Vec<EdgeId> = (0..h.m()).collect();
    let mut chosen = Vec::new();
    while !active.is_empty() && cap.map_or(true, |c| outcome.iterations < c) {
        let sub = h.restrict(&active);
        let m = approx_max_matching_with(&sub, &ecol.restrict(&active), d, session);
        assert!(!m.is_empty(), "approximation returned nothing on a nonempty hypergraph");
        for &e in m.edges() {
            let e = active[e];
            chosen.push(e);
            for &v in h.edge(e) {
                used[v] = true;
            }
        }
        active.retain(|&e| h.edge(e).iter().all(|&v| !used[v]));
        outcome.iterations += 1;
        session.charge("maximal_driver", "1 per repetition", 1);
    }
    outcome.matching = Matching::new(chosen);
    outcome.unblocked = active;
    outcome
}
