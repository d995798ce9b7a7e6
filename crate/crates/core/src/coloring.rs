//! Deterministic color reduction.
//!
//! Both primitives use the polynomial cover-free family: a color `c < q^(k+1)`
//! is read as a polynomial `f_c` of degree at most `k` over `GF(q)` (its
//! base-`q` digits), and a vertex picks an evaluation point `x` at which its
//! polynomial disagrees with (almost) all neighbors. The new color is
//! `(x, f(x))`, one of `q^2`. Two distinct polynomials agree on at most `k`
//! points, so a point with at most `b` conflicts exists whenever
//! `q (b + 1) > k Delta`.
//!
//! Every step is one synchronous round. The sequence of `(k, q, budget)`
//! steps is a pure function of the palette size, the degree bound and the
//! defect, so all vertices agree on it without communication.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{line_graph, Graph, Hypergraph, VertexId};
use crate::ledger::Session;

/// Palette bound of [`linial_coloring`]: at most `K_LIN * Delta^2` colors.
pub const K_LIN: usize = 16;

/// Palette bound of [`defective_coloring`]: at most
/// `K_DEF * (Delta / max(p, 1))^2` colors.
pub const K_DEF: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexColoring {
    colors: Vec<usize>,
    palette_size: usize,
    defect: usize,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("input coloring is not proper: {u} and {v} both have color {color}")]
    Improper { u: VertexId, v: VertexId, color: usize },
    #[error("coloring has {got} entries for {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("color {color} of vertex {vertex} is outside the palette of size {palette}")]
    OutOfPalette {
        vertex: VertexId,
        color: usize,
        palette: usize,
    },
    #[error("degree bound {bound} is below the actual maximum degree {actual}")]
    DegreeBound { bound: usize, actual: usize },
}

impl VertexColoring {
    /// Wrap colors with a declared palette size and defect.
    pub fn new(colors: Vec<usize>, palette_size: usize, defect: usize) -> Self {
        VertexColoring {
            colors,
            palette_size,
            defect,
        }
    }

    /// The identity coloring `v -> v` on `n` vertices.
    pub fn from_ids(n: usize) -> Self {
        VertexColoring::new((0..n).collect(), n.max(1), 0)
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, v: VertexId) -> usize {
        self.colors[v]
    }

    pub fn palette_size(&self) -> usize {
        self.palette_size
    }

    pub fn defect(&self) -> usize {
        self.defect
    }

    /// Restrict to a subset of vertices (e.g. an induced subgraph), keeping
    /// the palette.
    pub fn restrict(&self, old_ids: &[VertexId]) -> VertexColoring {
        VertexColoring::new(
            old_ids.iter().map(|&v| self.colors[v]).collect(),
            self.palette_size,
            self.defect,
        )
    }

    fn check_against(&self, g: &Graph) -> Result<(), ColoringError> {
        if self.colors.len() != g.n() {
            return Err(ColoringError::LengthMismatch {
                expected: g.n(),
                got: self.colors.len(),
            });
        }
        if let Some((v, &c)) = self
            .colors
            .iter()
            .enumerate()
            .find(|(_, &c)| c >= self.palette_size)
        {
            return Err(ColoringError::OutOfPalette {
                vertex: v,
                color: c,
                palette: self.palette_size,
            });
        }
        Ok(())
    }
}

/// Largest number of same-colored neighbors over all vertices.
pub fn max_defect(g: &Graph, colors: &[usize]) -> usize {
    (0..g.n())
        .map(|v| {
            g.neighbors(v)
                .iter()
                .filter(|&&u| colors[u] == colors[v])
                .count()
        })
        .max()
        .unwrap_or(0)
}

pub fn first_conflict(g: &Graph, colors: &[usize]) -> Option<(VertexId, VertexId)> {
    g.edges()
        .iter()
        .copied()
        .find(|&(u, v)| colors[u] == colors[v])
}

fn require_proper(g: &Graph, c: &VertexColoring) -> Result<(), ColoringError> {
    c.check_against(g)?;
    match first_conflict(g, c.colors()) {
        Some((u, v)) => Err(ColoringError::Improper {
            u,
            v,
            color: c.color(u),
        }),
        None => Ok(()),
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut i = 3;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 2;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u64) -> u64 {
    let mut p = n.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// Smallest integer `x` with `x^e >= c`.
fn int_root_ceil(c: u128, e: u32) -> u64 {
    if c <= 1 {
        return 1;
    }
    let mut x = (c as f64).powf(1.0 / e as f64).floor().max(1.0) as u64;
    let pow_ge = |x: u64| -> bool {
        let mut acc: u128 = 1;
        for _ in 0..e {
            acc = match acc.checked_mul(x as u128) {
                Some(a) => a,
                None => return true,
            };
            if acc >= c {
                return true;
            }
        }
        acc >= c
    };
    while x > 1 && pow_ge(x - 1) {
        x -= 1;
    }
    while !pow_ge(x) {
        x += 1;
    }
    x
}

/// One round of color reduction: polynomials of degree `k` over `GF(q)`,
/// tolerating up to `budget` conflicting neighbors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub k: u32,
    pub q: u64,
    pub budget: usize,
}

impl ReductionStep {
    pub fn palette(&self) -> usize {
        (self.q * self.q) as usize
    }
}

/// The cheapest step from `palette` colors at degree bound `degree` with the
/// given conflict budget: minimizes `q^2` over `k` subject to
/// `q^(k+1) >= palette` and `q (budget + 1) > k degree`.
pub fn best_step(palette: usize, degree: usize, budget: usize) -> ReductionStep {
    let mut best: Option<ReductionStep> = None;
    for k in 1..=64u32 {
        let lo = (k as u64 * degree as u64) / (budget as u64 + 1) + 1;
        let root = int_root_ceil(palette as u128, k + 1);
        let q = next_prime(lo.max(root));
        if best.map_or(true, |b| q < b.q) {
            best = Some(ReductionStep { k, q, budget });
        }
        if root <= 2 {
            break;
        }
    }
    best.expect("at least one k considered")
}

/// Proper-reduction steps from `palette` colors until the palette stops
/// shrinking.
pub fn linial_schedule(palette: usize, degree: usize) -> Vec<ReductionStep> {
    let mut steps = Vec::new();
    if degree == 0 {
        return steps;
    }
    let mut c = palette;
    loop {
        let s = best_step(c, degree, 0);
        if s.palette() >= c {
            return steps;
        }
        c = s.palette();
        steps.push(s);
    }
}

/// Full schedule for a `p`-defective coloring: proper reduction first, then
/// defective steps spending two thirds of the remaining defect budget each,
/// finishing with whatever budget is left when that still helps.
pub fn defective_schedule(palette: usize, degree: usize, p: usize) -> Vec<ReductionStep> {
    let mut steps = linial_schedule(palette, degree);
    if degree == 0 || p == 0 {
        return steps;
    }
    let mut c = steps.last().map_or(palette, ReductionStep::palette);
    let mut remaining = p;
    while remaining > 0 {
        let mut s = best_step(c, degree, (2 * remaining / 3).max(1));
        if s.palette() >= c {
            s = best_step(c, degree, remaining);
            if s.palette() >= c {
                break;
            }
        }
        remaining -= s.budget;
        c = s.palette();
        steps.push(s);
    }
    steps
}

fn eval_poly(color: usize, k: u32, q: u64, x: u64) -> u64 {
    // Digits of `color` in base q, most significant first, via Horner.
    let mut digits = Vec::with_capacity(k as usize + 1);
    let mut c = color as u64;
    for _ in 0..=k {
        digits.push(c % q);
        c /= q;
    }
    debug_assert_eq!(c, 0, "color does not fit in k+1 digits");
    digits
        .iter()
        .rev()
        .fold(0u128, |acc, &d| (acc * x as u128 + d as u128) % q as u128) as u64
}

/// Apply one reduction step to every vertex. Vertex `v` picks the smallest
/// point `x` with at most `budget` neighbors of a different old color whose
/// polynomial agrees with its own at `x`.
pub fn apply_step(g: &Graph, colors: &[usize], step: ReductionStep) -> Vec<usize> {
    (0..g.n())
        .map(|v| {
            let mine = colors[v];
            let others: Vec<usize> = g
                .neighbors(v)
                .iter()
                .map(|&u| colors[u])
                .filter(|&c| c != mine)
                .collect();
            let x = (0..step.q)
                .find(|&x| {
                    let fv = eval_poly(mine, step.k, step.q, x);
                    others
                        .iter()
                        .filter(|&&c| eval_poly(c, step.k, step.q, x) == fv)
                        .count()
                        <= step.budget
                })
                .expect("step parameters guarantee a feasible point");
            (x * step.q + eval_poly(mine, step.k, step.q, x)) as usize
        })
        .collect()
}

fn run_schedule(g: &Graph, start: &VertexColoring, steps: &[ReductionStep]) -> Vec<usize> {
    let mut colors = start.colors().to_vec();
    for &s in steps {
        colors = apply_step(g, &colors, s);
    }
    colors
}

/// Reduce a proper coloring to at most `K_LIN * Delta^2` colors in
/// `O(log* C)` rounds.
pub fn linial_coloring(
    g: &Graph,
    initial: &VertexColoring,
    session: &mut Session<'_>,
) -> Result<VertexColoring, ColoringError> {
    linial_coloring_bounded(g, initial, g.max_degree(), session)
}

/// [`linial_coloring`] with an explicit degree bound known to all vertices.
pub fn linial_coloring_bounded(
    g: &Graph,
    initial: &VertexColoring,
    degree_bound: usize,
    session: &mut Session<'_>,
) -> Result<VertexColoring, ColoringError> {
    require_proper(g, initial)?;
    if degree_bound < g.max_degree() {
        return Err(ColoringError::DegreeBound {
            bound: degree_bound,
            actual: g.max_degree(),
        });
    }
    if degree_bound == 0 {
        session.charge("linial", "log*(C)", 0);
        return Ok(VertexColoring::new(vec![0; g.n()], 1, 0));
    }
    let steps = linial_schedule(initial.palette_size(), degree_bound);
    session.charge("linial", "log*(C)", steps.len() as u64);
    let palette = steps
        .last()
        .map_or(initial.palette_size(), ReductionStep::palette);
    Ok(VertexColoring::new(run_schedule(g, initial, &steps), palette, 0))
}

/// A proper `O((r Delta)^2)` coloring of the line graph of `h`, starting
/// from edge ids.
pub fn edge_coloring_init(h: &Hypergraph, session: &mut Session<'_>) -> VertexColoring {
    let f = line_graph(h);
    linial_coloring(&f, &VertexColoring::from_ids(h.m()), session)
        .expect("edge ids are a proper coloring of the line graph")
}

/// A `p`-defective coloring (every vertex has at most `p` same-colored
/// neighbors) with at most `K_DEF * (Delta / max(p, 1))^2` colors, computed
/// from a proper coloring in `O(log* C)` rounds.
pub fn defective_coloring(
    g: &Graph,
    given: &VertexColoring,
    p: usize,
    session: &mut Session<'_>,
) -> Result<VertexColoring, ColoringError> {
    defective_coloring_bounded(g, given, p, g.max_degree(), session)
}

/// [`defective_coloring`] with an explicit degree bound known to all
/// vertices.
pub fn defective_coloring_bounded(
    g: &Graph,
    given: &VertexColoring,
    p: usize,
    degree_bound: usize,
    session: &mut Session<'_>,
) -> Result<VertexColoring, ColoringError> {
    require_proper(g, given)?;
    if degree_bound < g.max_degree() {
        return Err(ColoringError::DegreeBound {
            bound: degree_bound,
            actual: g.max_degree(),
        });
    }
    if p >= degree_bound {
        session.charge("defective", "log*(C)", 0);
        return Ok(VertexColoring::new(vec![0; g.n()], 1, p));
    }
    let steps = defective_schedule(given.palette_size(), degree_bound, p);
    session.charge("defective", "log*(C)", steps.len() as u64);
    let palette = steps
        .last()
        .map_or(given.palette_size(), ReductionStep::palette);
    Ok(VertexColoring::new(run_schedule(g, given, &steps), palette, p))
}

/// Palette size [`defective_coloring_bounded`] ends with, without running it.
pub fn defective_palette(palette: usize, degree: usize, p: usize) -> usize {
    if p >= degree {
        return 1;
    }
    defective_schedule(palette, degree, p)
        .last()
        .map_or(palette, ReductionStep::palette)
}

/// Number of rounds (schedule steps) of a defective coloring run.
pub fn defective_rounds(palette: usize, degree: usize, p: usize) -> usize {
    if p >= degree {
        return 0;
    }
    defective_schedule(palette, degree, p).len()
}
