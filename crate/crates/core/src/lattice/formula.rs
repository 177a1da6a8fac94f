//! Compound formulas over atomic propositions and their supervaluation.
//!
//! A gap atom is completed to true and to false independently of every other
//! gap atom; no compatibility constraint between quantum propositions is
//! imposed on the completions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::TruthValue;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("unknown atom {0:?}")]
    UnknownAtom(String),
    #[error("{gaps} gap atoms exceed the precisification cap of {cap}")]
    PrecisificationBlowup { gaps: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(id: impl Into<String>) -> Self {
        Formula::Atom(id.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    /// Distinct atom ids, sorted.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(id) => {
                out.insert(id.as_str());
            }
            Formula::Not(a) => a.collect_atoms(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Classical two-valued evaluation.
    pub fn eval_classical(&self, value: &impl Fn(&str) -> bool) -> bool {
        match self {
            Formula::Atom(id) => value(id),
            Formula::Not(a) => !a.eval_classical(value),
            Formula::And(a, b) => a.eval_classical(value) && b.eval_classical(value),
            Formula::Or(a, b) => a.eval_classical(value) || b.eval_classical(value),
            Formula::Implies(a, b) => !a.eval_classical(value) || b.eval_classical(value),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 0,
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            Formula::Not(..) | Formula::Atom(..) => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            f.write_str("(")?;
        }
        match self {
            Formula::Atom(id) => f.write_str(id)?,
            Formula::Not(a) => {
                f.write_str("not ")?;
                a.fmt_prec(f, 3)?;
            }
            // and/or associate left; implies associates right
            Formula::And(a, b) => {
                a.fmt_prec(f, 2)?;
                f.write_str(" and ")?;
                b.fmt_prec(f, 3)?;
            }
            Formula::Or(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" or ")?;
                b.fmt_prec(f, 2)?;
            }
            Formula::Implies(a, b) => {
                a.fmt_prec(f, 1)?;
                f.write_str(" implies ")?;
                b.fmt_prec(f, 0)?;
            }
        }
        if wrap {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Supervaluation of `f` under a partial (gappy) assignment.
///
/// Every Boolean completion of the gap atoms is evaluated classically. The
/// result is `True` if all completions make `f` true, `False` if all make it
/// false, and `Gap` otherwise.
pub fn evaluate_super(
    f: &Formula,
    atomics: &BTreeMap<String, TruthValue>,
    cap: usize,
) -> Result<TruthValue, FormulaError> {
    let mut fixed: BTreeMap<&str, bool> = BTreeMap::new();
    let mut gaps: Vec<&str> = Vec::new();
    for id in f.atoms() {
        match atomics.get(id) {
            None => return Err(FormulaError::UnknownAtom(id.to_string())),
            Some(TruthValue::Gap) => gaps.push(id),
            Some(t) => {
                fixed.insert(id, *t == TruthValue::True);
            }
        }
    }
    if gaps.len() > cap {
        return Err(FormulaError::PrecisificationBlowup { gaps: gaps.len(), cap });
    }
    let mut seen_true = false;
    let mut seen_false = false;
    for mask in 0u64..(1u64 << gaps.len()) {
        let value = |id: &str| match fixed.get(id) {
            Some(b) => *b,
            None => {
                let k = gaps.iter().position(|g| *g == id).expect("atom is a gap");
                mask >> k & 1 == 1
            }
        };
        if f.eval_classical(&value) {
            seen_true = true;
        } else {
            seen_false = true;
        }
        if seen_true && seen_false {
            return Ok(TruthValue::Gap);
        }
    }
    Ok(TruthValue::from_bool(seen_true))
}
