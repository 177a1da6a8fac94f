//! Run reports and their text and JSON renderings.
//!
//! The JSON schema is versioned by the top-level `"schema"` key. Truth values
//! are strings (`"1"`, `"0"`, `"0/0"`) and the final ledger is embedded under
//! `"ledger"` as one line-format string per record.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::dynamics::{FeasibilityReport, ReconstructionOutcome};
use crate::lattice::TruthValue;
use crate::ledger::{Ledger, Violation};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeyTruth {
    pub key: String,
    pub truth: TruthValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Transition {
    pub key: String,
    /// Tick the value refers to, for reconstructed past values.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<u64>,
    pub before: TruthValue,
    pub after: TruthValue,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reconstruction {
    pub key: String,
    pub at: u64,
    pub outcome: ReconstructionOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepReport {
    pub index: usize,
    pub line: usize,
    pub kind: &'static str,
    pub detail: String,
    pub non_unitary: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub recorded: Vec<KeyTruth>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub transitions: Vec<Transition>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub reconstructions: Vec<Reconstruction>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Valuation {
    pub index: usize,
    pub line: usize,
    pub query: String,
    pub key: String,
    pub truth: TruthValue,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub atoms: BTreeMap<String, TruthValue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityEntry {
    pub index: usize,
    pub line: usize,
    pub a: String,
    pub b: String,
    #[serde(flatten)]
    pub report: FeasibilityReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Audit {
    pub index: usize,
    pub line: usize,
    pub violations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: u32,
    pub seed: u64,
    pub tolerance: f64,
    pub p_one: f64,
    pub steps: Vec<StepReport>,
    pub valuations: Vec<Valuation>,
    pub feasibility: Vec<FeasibilityEntry>,
    pub audits: Vec<Audit>,
    /// Result of the last `check-past` query.
    pub violations: Vec<Violation>,
    #[serde(serialize_with = "ledger_lines")]
    pub ledger: Ledger,
}

fn ledger_lines<S: Serializer>(ledger: &Ledger, ser: S) -> Result<S::Ok, S::Error> {
    let mut seq = ser.serialize_seq(Some(ledger.len()))?;
    for r in ledger.records() {
        seq.serialize_element(&r.to_string())?;
    }
    seq.end()
}

impl Report {
    pub fn new(seed: u64, tolerance: f64, p_one: f64) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            seed,
            tolerance,
            p_one,
            steps: Vec::new(),
            valuations: Vec::new(),
            feasibility: Vec::new(),
            audits: Vec::new(),
            violations: Vec::new(),
            ledger: Ledger::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

pub fn emit_report(r: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(r).expect("report serializes");
            out.push(b'\n');
            out
        }
        Format::Text => render_text(r).into_bytes(),
    }
}

fn render_text(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "svq report (schema {})", r.schema);
    let _ = writeln!(s, "seed {}  tolerance {:e}  p_one {}", r.seed, r.tolerance, r.p_one);

    let _ = writeln!(s, "\nsteps:");
    if r.steps.is_empty() {
        let _ = writeln!(s, "  (none)");
    }
    for st in &r.steps {
        let tag = if st.non_unitary { "  [non-unitary]" } else { "" };
        let _ = writeln!(s, "  #{} line {}: {}{}", st.index, st.line, st.detail, tag);
        for kt in &st.recorded {
            let _ = writeln!(s, "      {} = {}", kt.key, kt.truth);
        }
        for t in &st.transitions {
            match t.at {
                Some(at) => {
                    let _ = writeln!(s, "      {} at {}: {} -> {}", t.key, at, t.before, t.after);
                }
                None => {
                    let _ = writeln!(s, "      {}: {} -> {}", t.key, t.before, t.after);
                }
            }
        }
        for rc in &st.reconstructions {
            let _ = writeln!(
                s,
                "      draw for {} at {}: X = {} (Pr(X=1) = {}, seed {})",
                rc.key, rc.at, rc.outcome.value, rc.outcome.p_one, rc.outcome.seed
            );
        }
    }

    let _ = writeln!(s, "\nvaluations:");
    if r.valuations.is_empty() {
        let _ = writeln!(s, "  (none)");
    }
    for v in &r.valuations {
        let _ = writeln!(s, "  #{} line {}: {} => {} = {}", v.index, v.line, v.query, v.key, v.truth);
        for (k, t) in &v.atoms {
            let _ = writeln!(s, "      {k} = {t}");
        }
    }

    if !r.feasibility.is_empty() {
        let _ = writeln!(s, "\nfeasibility:");
        for f in &r.feasibility {
            let verdict = if f.report.feasible { "feasible" } else { "infeasible" };
            let _ = writeln!(s, "  #{} line {}: clone {} and {}: {}", f.index, f.line, f.a, f.b, verdict);
            let _ = writeln!(
                s,
                "      |<a|b>| = {}  |<a|b>|^2 = {}  ({})",
                f.report.witness_overlap, f.report.witness_overlap_squared, f.report.detail
            );
        }
    }

    let _ = writeln!(s, "\nviolations:");
    if r.violations.is_empty() {
        let _ = writeln!(s, "  (none)");
    }
    for v in &r.violations {
        let _ = writeln!(s, "  {v}");
    }

    let _ = writeln!(s, "\nledger:");
    if r.ledger.is_empty() {
        let _ = writeln!(s, "  (empty)");
    }
    for rec in r.ledger.records() {
        let _ = writeln!(s, "  {rec}");
    }
    s
}
