//! Executes a parsed scenario.
//!
//! `record at t` appends, for every state and every proposition of matching
//! dimension, a present-tense valuation at `t`, preceded by a past-tense
//! re-assertion of each earlier recorded tick. The re-asserted value is what
//! the current history still determines: the value recorded then, unless an
//! irreversible step (clone target, un-clone target, evaporation, non-unitary
//! evolution) touched the state since, in which case it is a gap. A
//! `reconstruct` step replaces each such lost value with a seeded random draw.

use std::collections::BTreeMap;

use thiserror::Error;

use super::ast::*;
use super::report::*;
use crate::dynamics::{
    blackhole_evaporate, check_cloner_feasibility, ideal_clone, ideal_unclone, sample_past_reconstruction,
    truth_transition, DynamicsError, ProductState, DEFAULT_P_ONE,
};
use crate::hilbert::{apply_operator, HilbertError, Operator, StateVector};
use crate::lattice::{evaluate_super, membership, Formula, FormulaError, LatticeError, Subspace, TruthValue};
use crate::ledger::{check_past_unalterability, Ledger, LedgerError, Timestamp};
use crate::{DEFAULT_PRECISIFICATION_CAP, DEFAULT_TOL};

/// Command-line overrides; each takes precedence over the scenario's `config`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub p_one: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub seed: u64,
    pub tol: f64,
    pub p_one: f64,
}

impl Settings {
    pub fn resolve(s: &Scenario, overrides: &RunOptions) -> Settings {
        let mut out = Settings {
            seed: 0,
            tol: DEFAULT_TOL,
            p_one: DEFAULT_P_ONE,
        };
        for c in s.settings() {
            match c {
                ConfigSetting::Seed(v) => out.seed = v,
                ConfigSetting::Tol(v) => out.tol = v,
                ConfigSetting::POne(v) => out.p_one = v,
            }
        }
        out.seed = overrides.seed.unwrap_or(out.seed);
        out.tol = overrides.tol.unwrap_or(out.tol);
        out.p_one = overrides.p_one.unwrap_or(out.p_one);
        out
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunErrorKind {
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error("{0} is not the target of an earlier clone")]
    NoClonePair(String),
    #[error("invalid setting: {0}")]
    InvalidSetting(String),
    #[error("unresolved identifier {0:?}")]
    Unresolved(String),
}

/// A module error annotated with the failing item.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{pos}: step {step} ({keyword}): {kind}")]
pub struct RunError {
    pub step: usize,
    pub pos: Pos,
    pub keyword: &'static str,
    pub kind: RunErrorKind,
}

/// SplitMix64 finalizer; decorrelates per-draw seeds derived from one base seed.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn derive_seed(base: u64, step: usize, draw: u64) -> u64 {
    mix(mix(base ^ mix(step as u64)) ^ draw)
}

struct Runner {
    settings: Settings,
    states: Vec<(String, StateVector)>,
    props: Vec<(String, Subspace)>,
    formulas: BTreeMap<String, (Formula, Vec<AtomRef>)>,
    ledger: Ledger,
    /// (state, prop, tick) -> value recorded as present at that tick
    present: BTreeMap<(String, String, u64), TruthValue>,
    reconstructed: BTreeMap<(String, String, u64), TruthValue>,
    /// ticks up to and including this one are no longer determined by the state
    lost_through: BTreeMap<String, u64>,
    clone_sources: BTreeMap<String, String>,
    last_tick: Option<u64>,
    report: Report,
}

type StepResult<T> = Result<T, RunErrorKind>;

impl Runner {
    fn state(&self, name: &str) -> StepResult<&StateVector> {
        self.states
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| RunErrorKind::Unresolved(name.to_string()))
    }

    fn set_state(&mut self, name: &str, value: StateVector) {
        if let Some(slot) = self.states.iter_mut().find(|(n, _)| n == name) {
            slot.1 = value;
        }
    }

    fn prop(&self, name: &str) -> StepResult<&Subspace> {
        self.props
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
            .ok_or_else(|| RunErrorKind::Unresolved(name.to_string()))
    }

    /// (state, prop) pairs of matching dimension, in declaration order.
    fn pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (s, sv) in &self.states {
            for (p, sub) in &self.props {
                if sv.dim() == sub.dim() {
                    out.push((s.clone(), p.clone()));
                }
            }
        }
        out
    }

    fn retrodict(&self, state: &str, prop: &str, tick: u64) -> TruthValue {
        let k = (state.to_string(), prop.to_string(), tick);
        if let Some(t) = self.reconstructed.get(&k) {
            return *t;
        }
        if self.lost_through.get(state).is_some_and(|&lost| tick <= lost) {
            return TruthValue::Gap;
        }
        self.present.get(&k).copied().unwrap_or(TruthValue::Gap)
    }

    fn mark_irreversible(&mut self, state: &str) {
        let Some(last) = self.last_tick else { return };
        let entry = self.lost_through.entry(state.to_string()).or_insert(last);
        *entry = (*entry).max(last);
        self.reconstructed.retain(|(s, _, t), _| !(s == state && *t <= last));
    }

    fn transitions(&self, state: &str, before: &StateVector, after: &StateVector) -> StepResult<Vec<Transition>> {
        let tol = self.settings.tol;
        let mut out = Vec::new();
        for (p, sub) in &self.props {
            if sub.dim() == before.dim() {
                let (b, a) = truth_transition(before, after, sub, tol)?;
                out.push(Transition {
                    key: valuation_key(p, state),
                    at: None,
                    before: b,
                    after: a,
                });
            }
        }
        Ok(out)
    }

    fn run_item(&mut self, index: usize, item: &Item) -> StepResult<()> {
        let tol = self.settings.tol;
        let line = item.pos.line;
        match &item.kind {
            ItemKind::State { name, components } => {
                let s = StateVector::with_tol(components.iter().map(|z| z.value()).collect(), tol)?;
                self.states.push((name.clone(), s));
            }
            ItemKind::Prop { name, vectors } => {
                let raw: Vec<_> = vectors.iter().map(|v| v.iter().map(|z| z.value()).collect()).collect();
                let dim = vectors[0].len();
                self.props.push((name.clone(), Subspace::span(&raw, dim)?));
            }
            ItemKind::Formula { name, expr, atoms } => {
                self.formulas.insert(name.clone(), (expr.clone(), atoms.clone()));
            }
            ItemKind::Config(_) => {}
            ItemKind::Record { at } => self.record(index, line, *at)?,
            ItemKind::Clone { source, target } => {
                let before = self.state(target)?.clone();
                let input = ProductState::from_factors(self.state(source)?.clone(), before.clone());
                let cloned = ideal_clone(&input)?;
                let after = cloned.factors().expect("clone output is a product").1.clone();
                let transitions = self.transitions(target, &before, &after)?;
                self.set_state(target, after);
                self.mark_irreversible(target);
                self.clone_sources.insert(target.clone(), source.clone());
                self.push_step(index, line, &item.kind, true, transitions);
            }
            ItemKind::Unclone { target, blank } => {
                let source = self
                    .clone_sources
                    .get(target)
                    .cloned()
                    .ok_or_else(|| RunErrorKind::NoClonePair(target.clone()))?;
                let before = self.state(target)?.clone();
                let cloned = ProductState::from_factors(self.state(&source)?.clone(), before.clone());
                let restored = ideal_unclone(&cloned, self.state(blank)?, tol)?;
                let after = restored.factors().expect("unclone output is a product").1.clone();
                let transitions = self.transitions(target, &before, &after)?;
                self.set_state(target, after);
                self.mark_irreversible(target);
                self.clone_sources.remove(target);
                self.push_step(index, line, &item.kind, true, transitions);
            }
            ItemKind::Blackhole { target } => {
                let before = self.state(target)?.clone();
                let after = blackhole_evaporate(&before, derive_seed(self.settings.seed, index, 0));
                let transitions = self.transitions(target, &before, &after)?;
                self.set_state(target, after);
                self.mark_irreversible(target);
                self.push_step(index, line, &item.kind, true, transitions);
            }
            ItemKind::Evolve { target, matrix } => {
                let rows = matrix.iter().map(|r| r.iter().map(|z| z.value()).collect()).collect();
                let mut op = Operator::from_rows(rows)?;
                let unitary = op.is_unitary(tol);
                if unitary {
                    op = op.flag_unitary(tol)?;
                }
                let before = self.state(target)?.clone();
                let after = apply_operator(&op, &before, tol)?;
                let transitions = self.transitions(target, &before, &after)?;
                self.set_state(target, after);
                if !unitary {
                    self.mark_irreversible(target);
                }
                self.push_step(index, line, &item.kind, !unitary, transitions);
            }
            ItemKind::Reconstruct { p_one } => self.reconstruct(index, line, &item.kind, p_one.unwrap_or(self.settings.p_one))?,
            ItemKind::Eval { state, prop } => {
                let truth = membership(self.state(state)?, self.prop(prop)?, tol)?;
                self.report.valuations.push(Valuation {
                    index,
                    line,
                    query: item.kind.to_string(),
                    key: valuation_key(prop, state),
                    truth,
                    atoms: BTreeMap::new(),
                });
            }
            ItemKind::Super { formula } => {
                let (expr, atoms) = self
                    .formulas
                    .get(formula)
                    .cloned()
                    .ok_or_else(|| RunErrorKind::Unresolved(formula.clone()))?;
                let mut values = BTreeMap::new();
                for a in &atoms {
                    values.insert(a.key.clone(), membership(self.state(&a.state)?, self.prop(&a.prop)?, tol)?);
                }
                let truth = evaluate_super(&expr, &values, DEFAULT_PRECISIFICATION_CAP)?;
                self.report.valuations.push(Valuation {
                    index,
                    line,
                    query: item.kind.to_string(),
                    key: formula.clone(),
                    truth,
                    atoms: values,
                });
            }
            ItemKind::CheckPast => {
                let violations = check_past_unalterability(&self.ledger);
                self.report.audits.push(Audit {
                    index,
                    line,
                    violations: violations.len(),
                });
                self.report.violations = violations;
            }
            ItemKind::Feasible { a, b } => {
                let r = check_cloner_feasibility(self.state(a)?, self.state(b)?, tol)?;
                self.report.feasibility.push(FeasibilityEntry {
                    index,
                    line,
                    a: a.clone(),
                    b: b.clone(),
                    report: r,
                });
            }
        }
        Ok(())
    }

    fn record(&mut self, index: usize, line: usize, at: u64) -> StepResult<()> {
        let tol = self.settings.tol;
        let mut recorded = Vec::new();
        for (s, p) in self.pairs() {
            let key = valuation_key(&p, &s);
            let earlier: Vec<u64> = self
                .present
                .range((s.clone(), p.clone(), 0)..(s.clone(), p.clone(), at))
                .map(|((_, _, t), _)| *t)
                .collect();
            for t in earlier {
                let truth = self.retrodict(&s, &p, t);
                self.ledger = self.ledger.record_valuation(Timestamp(t), &key, truth, Timestamp(at))?;
            }
            let truth = membership(self.state(&s)?, self.prop(&p)?, tol)?;
            self.ledger = self.ledger.record_valuation(Timestamp(at), &key, truth, Timestamp(at))?;
            self.present.entry((s, p, at)).or_insert(truth);
            recorded.push(KeyTruth { key, truth });
        }
        self.last_tick = Some(at);
        self.report.steps.push(StepReport {
            index,
            line,
            kind: "record",
            detail: format!("record at {at}"),
            non_unitary: false,
            recorded,
            transitions: Vec::new(),
            reconstructions: Vec::new(),
        });
        Ok(())
    }

    fn reconstruct(&mut self, index: usize, line: usize, kind: &ItemKind, p_one: f64) -> StepResult<()> {
        let mut transitions = Vec::new();
        let mut draws = Vec::new();
        if let Some(now) = self.last_tick {
            let lost: Vec<(String, String, u64, TruthValue)> = self
                .present
                .iter()
                .filter(|((_, _, t), v)| *t <= now && v.is_determinate())
                .filter(|((s, p, t), _)| self.retrodict(s, p, *t) == TruthValue::Gap)
                .map(|((s, p, t), v)| (s.clone(), p.clone(), *t, *v))
                .collect();
            for (draw, (s, p, t, _)) in lost.into_iter().enumerate() {
                let outcome = sample_past_reconstruction(p_one, derive_seed(self.settings.seed, index, draw as u64))?;
                let key = valuation_key(&p, &s);
                self.ledger = self.ledger.record_valuation(Timestamp(t), &key, outcome.truth(), Timestamp(now))?;
                self.reconstructed.insert((s, p, t), outcome.truth());
                transitions.push(Transition {
                    key: key.clone(),
                    at: Some(t),
                    before: TruthValue::Gap,
                    after: outcome.truth(),
                });
                draws.push(Reconstruction { key, at: t, outcome });
            }
        }
        self.report.steps.push(StepReport {
            index,
            line,
            kind: kind.keyword(),
            detail: kind.to_string(),
            non_unitary: false,
            recorded: Vec::new(),
            transitions,
            reconstructions: draws,
        });
        Ok(())
    }

    fn push_step(&mut self, index: usize, line: usize, kind: &ItemKind, non_unitary: bool, transitions: Vec<Transition>) {
        self.report.steps.push(StepReport {
            index,
            line,
            kind: kind.keyword(),
            detail: kind.to_string(),
            non_unitary,
            recorded: Vec::new(),
            transitions,
            reconstructions: Vec::new(),
        });
    }
}

/// Runs every item in order and collects the report.
pub fn run_scenario(s: &Scenario, overrides: &RunOptions) -> Result<Report, RunError> {
    let settings = Settings::resolve(s, overrides);
    let setting_error = |msg: String| RunError {
        step: 0,
        pos: Pos { line: 0, col: 0 },
        keyword: "config",
        kind: RunErrorKind::InvalidSetting(msg),
    };
    if !(settings.tol > 0.0 && settings.tol.is_finite()) {
        return Err(setting_error(format!("tolerance {} must be positive", settings.tol)));
    }
    if !(0.0..=1.0).contains(&settings.p_one) {
        return Err(setting_error(format!("probability {} is outside [0, 1]", settings.p_one)));
    }
    let mut runner = Runner {
        settings,
        states: Vec::new(),
        props: Vec::new(),
        formulas: BTreeMap::new(),
        ledger: Ledger::new(),
        present: BTreeMap::new(),
        reconstructed: BTreeMap::new(),
        lost_through: BTreeMap::new(),
        clone_sources: BTreeMap::new(),
        last_tick: None,
        report: Report::new(settings.seed, settings.tol, settings.p_one),
    };
    for (index, item) in s.items.iter().enumerate() {
        runner.run_item(index, item).map_err(|kind| RunError {
            step: index,
            pos: item.pos,
            keyword: item.kind.keyword(),
            kind,
        })?;
    }
    runner.report.ledger = runner.ledger;
    Ok(runner.report)
}
