//! Syntax tree for `.svq` scenarios. `Display` renders the canonical form
//! that the parser reads back to an equal tree.

use std::fmt;

use crate::hilbert::C64;
use crate::lattice::Formula;

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Unsigned real literal as written.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RealLit {
    Decimal(f64),
    /// `a/b`
    Fraction(f64, f64),
    /// `a/sqrt(b)`
    InvSqrt(f64, f64),
}

impl RealLit {
    pub fn value(self) -> f64 {
        match self {
            RealLit::Decimal(x) => x,
            RealLit::Fraction(a, b) => a / b,
            RealLit::InvSqrt(a, b) => a / b.sqrt(),
        }
    }
}

impl fmt::Display for RealLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealLit::Decimal(x) => write!(f, "{x}"),
            RealLit::Fraction(a, b) => write!(f, "{a}/{b}"),
            RealLit::InvSqrt(a, b) => write!(f, "{a}/sqrt({b})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real {
    pub negative: bool,
    pub lit: RealLit,
}

impl Real {
    pub fn value(self) -> f64 {
        if self.negative {
            -self.lit.value()
        } else {
            self.lit.value()
        }
    }
}

/// Complex literal `re`, `im i` or `re ± im i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalar {
    pub re: Option<Real>,
    pub im: Option<Real>,
}

impl Scalar {
    pub fn value(self) -> C64 {
        C64::new(
            self.re.map_or(0.0, Real::value),
            self.im.map_or(0.0, Real::value),
        )
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |r: &Real| if r.negative { "-" } else { "" };
        match (&self.re, &self.im) {
            (Some(re), None) => write!(f, "{}{}", sign(re), re.lit),
            (None, Some(im)) => write!(f, "{}{}i", sign(im), im.lit),
            (Some(re), Some(im)) => {
                let op = if im.negative { "-" } else { "+" };
                write!(f, "{}{}{}{}i", sign(re), re.lit, op, im.lit)
            }
            (None, None) => write!(f, "0"),
        }
    }
}

/// A formula atom `Prop(state)`, resolved at parse time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomRef {
    pub key: String,
    pub prop: String,
    pub state: String,
}

/// Ledger and formula key for a proposition evaluated on a state.
pub fn valuation_key(prop: &str, state: &str) -> String {
    format!("{prop}({state})")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConfigSetting {
    Seed(u64),
    Tol(f64),
    POne(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ItemKind {
    State { name: String, components: Vec<Scalar> },
    Prop { name: String, vectors: Vec<Vec<Scalar>> },
    Formula { name: String, expr: Formula, atoms: Vec<AtomRef> },
    Config(ConfigSetting),
    Record { at: u64 },
    Clone { source: String, target: String },
    Unclone { target: String, blank: String },
    Blackhole { target: String },
    Evolve { target: String, matrix: Vec<Vec<Scalar>> },
    Reconstruct { p_one: Option<f64> },
    Eval { state: String, prop: String },
    Super { formula: String },
    CheckPast,
    Feasible { a: String, b: String },
}

impl ItemKind {
    pub fn keyword(&self) -> &'static str {
        match self {
            ItemKind::State { .. } => "state",
            ItemKind::Prop { .. } => "prop",
            ItemKind::Formula { .. } => "formula",
            ItemKind::Config(_) => "config",
            ItemKind::Record { .. } => "record",
            ItemKind::Clone { .. } => "clone",
            ItemKind::Unclone { .. } => "unclone",
            ItemKind::Blackhole { .. } => "blackhole",
            ItemKind::Evolve { .. } => "evolve",
            ItemKind::Reconstruct { .. } => "reconstruct",
            ItemKind::Eval { .. } => "eval",
            ItemKind::Super { .. } => "super",
            ItemKind::CheckPast => "check-past",
            ItemKind::Feasible { .. } => "feasible",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Item {
    pub pos: Pos,
    pub kind: ItemKind,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Scenario {
    pub items: Vec<Item>,
}

impl Scenario {
    pub fn settings(&self) -> impl Iterator<Item = ConfigSetting> + '_ {
        self.items.iter().filter_map(|it| match it.kind {
            ItemKind::Config(c) => Some(c),
            _ => None,
        })
    }
}

fn write_vector(f: &mut fmt::Formatter<'_>, v: &[Scalar]) -> fmt::Result {
    f.write_str("[")?;
    for (i, z) in v.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{z}")?;
    }
    f.write_str("]")
}

fn write_vectors(f: &mut fmt::Formatter<'_>, vs: &[Vec<Scalar>]) -> fmt::Result {
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write_vector(f, v)?;
    }
    Ok(())
}

impl fmt::Display for ItemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ItemKind::State { name, components } => {
                write!(f, "state {name} = ")?;
                write_vector(f, components)
            }
            ItemKind::Prop { name, vectors } => {
                write!(f, "prop {name} = span(")?;
                write_vectors(f, vectors)?;
                f.write_str(")")
            }
            ItemKind::Formula { name, expr, .. } => write!(f, "formula {name} = {expr}"),
            ItemKind::Config(ConfigSetting::Seed(s)) => write!(f, "config seed = {s}"),
            ItemKind::Config(ConfigSetting::Tol(t)) => write!(f, "config tol = {t:e}"),
            ItemKind::Config(ConfigSetting::POne(p)) => write!(f, "config p_one = {p}"),
            ItemKind::Record { at } => write!(f, "record at {at}"),
            ItemKind::Clone { source, target } => write!(f, "clone {source} -> {target}"),
            ItemKind::Unclone { target, blank } => write!(f, "unclone {target} blank {blank}"),
            ItemKind::Blackhole { target } => write!(f, "blackhole {target}"),
            ItemKind::Evolve { target, matrix } => {
                write!(f, "evolve {target} by [")?;
                write_vectors(f, matrix)?;
                f.write_str("]")
            }
            ItemKind::Reconstruct { p_one: None } => f.write_str("reconstruct"),
            ItemKind::Reconstruct { p_one: Some(p) } => write!(f, "reconstruct p {p}"),
            ItemKind::Eval { state, prop } => write!(f, "eval {state} in {prop}"),
            ItemKind::Super { formula } => write!(f, "super {formula}"),
            ItemKind::CheckPast => f.write_str("check-past"),
            ItemKind::Feasible { a, b } => write!(f, "feasible {a} {b}"),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            writeln!(f, "{}", item.kind)?;
        }
        Ok(())
    }
}
