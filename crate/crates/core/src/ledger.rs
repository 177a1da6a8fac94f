//! Append-only ledger of tensed valuations and the past-fixity audit.
//!
//! Each record states the truth of a proposition at tick `at`, as asserted at
//! tick `asserted_at`. The tense follows from the two ticks. The audit flags
//! any later assertion that changes a past value once it was determinate:
//! a determinate value replaced by the opposite value is a flip, and one
//! replaced by a gap is a loss. A gap later replaced by a determinate value
//! is a refinement and is not flagged. Future-tense records are kept but
//! never audited.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::lattice::TruthValue;

/// Discrete time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Timestamp(pub u64);

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tense {
    Past,
    Present,
    Future,
}

impl Tense {
    /// Tense of a claim about `at` made at `now`.
    pub fn relative(at: Timestamp, now: Timestamp) -> Tense {
        match at.cmp(&now) {
            std::cmp::Ordering::Less => Tense::Past,
            std::cmp::Ordering::Equal => Tense::Present,
            std::cmp::Ordering::Greater => Tense::Future,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Tense::Past => "past",
            Tense::Present => "present",
            Tense::Future => "future",
        }
    }
}

impl fmt::Display for Tense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Tense {
    type Err = LedgerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "past" => Ok(Tense::Past),
            "present" => Ok(Tense::Present),
            "future" => Ok(Tense::Future),
            other => Err(LedgerError::BadLine(format!("unknown tense {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("assertion tick {asserted_at} precedes the last assertion tick {last}")]
    NonMonotoneAssertion { asserted_at: Timestamp, last: Timestamp },
    #[error("proposition id {0:?} must be non-empty and free of whitespace")]
    BadPropId(String),
    #[error("malformed ledger line: {0}")]
    BadLine(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensedRecord {
    pub at: Timestamp,
    pub prop_id: String,
    pub tense: Tense,
    pub truth: TruthValue,
    pub asserted_at: Timestamp,
}

impl fmt::Display for TensedRecord {
    /// Line format: `<at> <prop_id> <tense> <truth> <asserted_at>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {}",
            self.at, self.prop_id, self.tense, self.truth, self.asserted_at
        )
    }
}

impl FromStr for TensedRecord {
    type Err = LedgerError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [at, prop_id, tense, truth, asserted_at] = fields[..] else {
            return Err(LedgerError::BadLine(format!("expected 5 fields in {line:?}")));
        };
        let tick = |s: &str| {
            s.parse::<u64>()
                .map(Timestamp)
                .map_err(|_| LedgerError::BadLine(format!("bad tick {s:?}")))
        };
        let record = TensedRecord {
            at: tick(at)?,
            prop_id: prop_id.to_string(),
            tense: tense.parse()?,
            truth: truth.parse().map_err(|e| LedgerError::BadLine(format!("{e}")))?,
            asserted_at: tick(asserted_at)?,
        };
        if record.tense != Tense::relative(record.at, record.asserted_at) {
            return Err(LedgerError::BadLine(format!("tense does not match ticks in {line:?}")));
        }
        Ok(record)
    }
}

/// Append-only sequence of tensed records. Appending returns a new ledger
/// and leaves the original value untouched.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Ledger {
    records: Vec<TensedRecord>,
}

impl Ledger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[TensedRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn last_asserted_at(&self) -> Option<Timestamp> {
        self.records.last().map(|r| r.asserted_at)
    }

    pub fn record_valuation(
        &self,
        at: Timestamp,
        prop_id: &str,
        truth: TruthValue,
        asserted_at: Timestamp,
    ) -> Result<Ledger, LedgerError> {
        record_valuation(self, at, prop_id, truth, asserted_at)
    }

    /// One line per record, newline terminated.
    pub fn to_lines(&self) -> String {
        self.records.iter().map(|r| format!("{r}\n")).collect()
    }

    /// Rebuilds a ledger from its line format, re-checking every invariant.
    pub fn from_lines(text: &str) -> Result<Ledger, LedgerError> {
        let mut ledger = Ledger::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let r: TensedRecord = line.parse()?;
            ledger = ledger.record_valuation(r.at, &r.prop_id, r.truth, r.asserted_at)?;
        }
        Ok(ledger)
    }
}

pub fn record_valuation(
    ledger: &Ledger,
    at: Timestamp,
    prop_id: &str,
    truth: TruthValue,
    asserted_at: Timestamp,
) -> Result<Ledger, LedgerError> {
    if prop_id.is_empty() || prop_id.chars().any(char::is_whitespace) {
        return Err(LedgerError::BadPropId(prop_id.to_string()));
    }
    if let Some(last) = ledger.last_asserted_at() {
        if asserted_at < last {
            return Err(LedgerError::NonMonotoneAssertion { asserted_at, last });
        }
    }
    let mut records = ledger.records.clone();
    records.push(TensedRecord {
        at,
        prop_id: prop_id.to_string(),
        tense: Tense::relative(at, asserted_at),
        truth,
        asserted_at,
    });
    Ok(Ledger { records })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ViolationKind {
    /// A determinate past value was later asserted with the opposite value.
    Flip,
    /// A determinate past value was later asserted as a gap.
    Loss,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ViolationKind::Flip => "flip",
            ViolationKind::Loss => "loss",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub prop_id: String,
    pub at: Timestamp,
    pub earlier_truth: TruthValue,
    pub later_truth: TruthValue,
    pub later_asserted_at: Timestamp,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} at {}: {} -> {} (asserted at {})",
            self.kind, self.prop_id, self.at, self.earlier_truth, self.later_truth, self.later_asserted_at
        )
    }
}

/// Audits the ledger for changes to past values.
///
/// For every `(prop_id, at)` the earliest determinate non-future record is the
/// baseline; each later non-future record that disagrees with it is reported.
pub fn check_past_unalterability(ledger: &Ledger) -> Vec<Violation> {
    let mut baseline: BTreeMap<(&str, Timestamp), TruthValue> = BTreeMap::new();
    let mut out = Vec::new();
    for r in ledger.records.iter().filter(|r| r.tense != Tense::Future) {
        let key = (r.prop_id.as_str(), r.at);
        match baseline.get(&key) {
            None => {
                if r.truth.is_determinate() {
                    baseline.insert(key, r.truth);
                }
            }
            Some(&earlier) if earlier != r.truth => out.push(Violation {
                kind: if r.truth.is_determinate() {
                    ViolationKind::Flip
                } else {
                    ViolationKind::Loss
                },
                prop_id: r.prop_id.clone(),
                at: r.at,
                earlier_truth: earlier,
                later_truth: r.truth,
                later_asserted_at: r.asserted_at,
            }),
            Some(_) => {}
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TenseEntry {
    pub prop_id: String,
    pub at: Timestamp,
    pub tense: Tense,
    pub truth: TruthValue,
}

/// Relabels every record's tense as seen from `now`.
pub fn tense_view(ledger: &Ledger, now: Timestamp) -> Vec<TenseEntry> {
    ledger
        .records
        .iter()
        .map(|r| TenseEntry {
            prop_id: r.prop_id.clone(),
            at: r.at,
            tense: Tense::relative(r.at, now),
            truth: r.truth,
        })
        .collect()
}
