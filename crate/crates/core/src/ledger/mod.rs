//! LOCAL-model round accounting.
//!
//! Algorithms run as ordinary sequential procedures; every primitive charges
//! the number of synchronous rounds its distributed counterpart would spend,
//! using concrete counts (schedule lengths, palette sizes, doubling steps)
//! rather than asymptotic formulas. [`locality`] spot-checks that outputs
//! really are functions of bounded-radius neighborhoods.

pub mod locality;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dyadic::Dyadic;
use crate::hypergraph::{FractionalAssignment, Graph, Hypergraph};
use crate::packing::GreedyPacking;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub label: String,
    /// The cost expression this charge instantiates, e.g. `"log*(C)"`.
    pub cost: String,
    pub rounds: u64,
}

/// Append-only list of round charges.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundLedger {
    entries: Vec<LedgerEntry>,
    total: u64,
}

impl RoundLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn charge(&mut self, label: &str, rounds: u64) {
        self.charge_formula(label, "", rounds);
    }

    pub fn charge_formula(&mut self, label: &str, cost: &str, rounds: u64) {
        self.total += rounds;
        self.entries.push(LedgerEntry {
            label: label.to_string(),
            cost: cost.to_string(),
            rounds,
        });
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn entries(&self) -> &[LedgerEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Rounds charged by entries appended at or after position `mark`.
    pub fn total_since(&self, mark: usize) -> u64 {
        self.entries[mark..].iter().map(|e| e.rounds).sum()
    }

    pub fn totals_by_label(&self) -> BTreeMap<String, u64> {
        let mut out = BTreeMap::new();
        for e in &self.entries {
            *out.entry(e.label.clone()).or_insert(0) += e.rounds;
        }
        out
    }

    /// Merge consecutive runs of entries with the same label, keeping the
    /// total. Used to keep JSON reports readable.
    pub fn compacted(&self) -> RoundLedger {
        let mut out = RoundLedger::new();
        for e in &self.entries {
            match out.entries.last_mut() {
                Some(last) if last.label == e.label && last.cost == e.cost => {
                    last.rounds += e.rounds;
                    out.total += e.rounds;
                }
                _ => out.charge_formula(&e.label, &e.cost, e.rounds),
            }
        }
        out
    }
}

/// Intermediate states reported to an observer while algorithms run.
#[derive(Debug)]
pub enum StepEvent<'a> {
    /// A fractional matching after one elementary step (color class,
    /// doubling, recursive update).
    Matching {
        stage: &'static str,
        hypergraph: &'a Hypergraph,
        values: &'a FractionalAssignment,
    },
    /// A greedy packing after one elementary step.
    Packing {
        stage: &'static str,
        graph: &'a Graph,
        packing: &'a GreedyPacking,
    },
    /// One iteration of a recursive rounding loop: the input mass, the
    /// accumulated output mass when the iteration started, and the mass the
    /// iteration added.
    RecursiveIteration {
        kind: RecursiveKind,
        r: usize,
        input_total: Dyadic,
        before: Dyadic,
        added: Dyadic,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecursiveKind {
    Matching,
    Packing,
}

pub trait StepObserver {
    fn observe(&mut self, event: &StepEvent<'_>);
}

/// Per-run state threaded through every algorithm: the ledger plus an
/// optional observer.
#[derive(Default)]
pub struct Session<'o> {
    pub ledger: RoundLedger,
    observer: Option<&'o mut dyn StepObserver>,
}

impl Session<'static> {
    pub fn new() -> Self {
        Session {
            ledger: RoundLedger::new(),
            observer: None,
        }
    }
}

impl<'o> Session<'o> {
    pub fn with_observer(observer: &'o mut dyn StepObserver) -> Self {
        Session {
            ledger: RoundLedger::new(),
            observer: Some(observer),
        }
    }

    pub fn observing(&self) -> bool {
        self.observer.is_some()
    }

    pub fn observe(&mut self, event: StepEvent<'_>) {
        if let Some(obs) = self.observer.as_deref_mut() {
            obs.observe(&event);
        }
    }

    pub fn charge(&mut self, label: &str, cost: &str, rounds: u64) {
        self.ledger.charge_formula(label, cost, rounds);
    }
}

/// Constants of the recursion-cost bound
/// `R(L) < 2 (alpha r)^{t_L} (c r^2 + c log2 Delta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceConstants {
    pub alpha: f64,
    pub c: f64,
}

/// `t_L = min { t >= 0 : (L/2)^(2^-t) <= 2 }`, i.e. the least `t` with
/// `L <= 2^(2^t + 1)`. Computed in integers.
pub fn recursion_depth(l: u64) -> u32 {
    let mut t = 0u32;
    loop {
        let e = (1u64 << t) + 1;
        if e >= 64 || l as u128 <= 1u128 << e {
            return t;
        }
        t += 1;
    }
}

pub fn recurrence_bound(l: u64, r: usize, delta: usize, k: RecurrenceConstants) -> f64 {
    let t = recursion_depth(l);
    let r = r as f64;
    let log_delta = if delta > 1 { (delta as f64).log2() } else { 0.0 };
    2.0 * (k.alpha * r).powi(t as i32) * (k.c * r * r + k.c * log_delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecurrenceVerdict {
    pub measured: u64,
    pub depth: u32,
    pub bound: f64,
    pub holds: bool,
}

pub fn check_recurrence_bound(
    measured: u64,
    l: u64,
    r: usize,
    delta: usize,
    k: RecurrenceConstants,
) -> RecurrenceVerdict {
    let bound = recurrence_bound(l, r, delta, k);
    RecurrenceVerdict {
        measured,
        depth: recursion_depth(l),
        bound,
        holds: (measured as f64) <= bound,
    }
}
