use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use hypermatch::format::Instance;
use hypermatch::RoundLedger;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct InstanceSummary {
    pub kind: &'static str,
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub max_degree: usize,
}

impl InstanceSummary {
    pub fn of(inst: &Instance) -> Self {
        match inst {
            Instance::Graph(g) => InstanceSummary {
                kind: "graph",
                n: g.n(),
                m: g.m(),
                r: if g.m() == 0 { 0 } else { 2 },
                max_degree: g.max_degree(),
            },
            Instance::Hypergraph(h) => InstanceSummary {
                kind: "hypergraph",
                n: h.n(),
                m: h.m(),
                r: h.rank(),
                max_degree: h.max_degree(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleComparison {
    pub quantity: String,
    pub oracle: usize,
    pub solution: usize,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    /// Seconds since the Unix epoch; the only field that varies between
    /// identical runs.
    pub timestamp: u64,
    pub algorithm: String,
    pub parameters: BTreeMap<String, String>,
    pub seed: u64,
    pub instance: InstanceSummary,
    pub solution: BTreeMap<String, serde_json::Value>,
    pub verdicts: Vec<Verdict>,
    pub oracle: Vec<OracleComparison>,
    pub ledger_total: u64,
    pub ledger: RoundLedger,
}

impl RunReport {
    pub fn new(algorithm: &str, seed: u64, instance: InstanceSummary) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            algorithm: algorithm.to_string(),
            parameters: BTreeMap::new(),
            seed,
            instance,
            solution: BTreeMap::new(),
            verdicts: Vec::new(),
            oracle: Vec::new(),
            ledger_total: 0,
            ledger: RoundLedger::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn stat(&mut self, key: &str, value: impl Into<serde_json::Value>) {
        self.solution.insert(key.to_string(), value.into());
    }

    pub fn verdict<E: std::fmt::Display>(&mut self, check: &str, result: Result<(), E>) {
        let (pass, detail) = match result {
            Ok(()) => (true, "ok".to_string()),
            Err(e) => (false, e.to_string()),
        };
        self.verdicts.push(Verdict {
            check: check.to_string(),
            pass,
            detail,
        });
    }

    pub fn bound(&mut self, check: &str, pass: bool, detail: String) {
        self.verdicts.push(Verdict {
            check: check.to_string(),
            pass,
            detail,
        });
    }

    pub fn set_ledger(&mut self, ledger: RoundLedger) {
        self.ledger_total = ledger.total();
        self.ledger = ledger;
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn text_summary(&self) -> String {
        let mut s = format!(
            "{} on {} (n={}, m={}, r={}, max degree {})\n",
            self.algorithm,
            self.instance.kind,
            self.instance.n,
            self.instance.m,
            self.instance.r,
            self.instance.max_degree
        );
        for (k, v) in &self.solution {
            s.push_str(&format!("  {k}: {v}\n"));
        }
        for v in &self.verdicts {
            let tag = if v.pass { "pass" } else { "FAIL" };
            s.push_str(&format!("  [{tag}] {}: {}\n", v.check, v.detail));
        }
        for c in &self.oracle {
            s.push_str(&format!(
                "  oracle {}: {} (solution {}) {}\n",
                c.quantity, c.oracle, c.solution, c.detail
            ));
        }
        s.push_str(&format!("  rounds: {}\n", self.ledger_total));
        s
    }
}
