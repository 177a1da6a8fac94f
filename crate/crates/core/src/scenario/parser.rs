//! Lexer and recursive descent parser for `.svq` scenarios.
//!
//! ```text
//! scenario := (decl | step | query)*
//! decl     := "state" ID "=" vector
//!           | "prop" ID "=" "span" "(" vector ("," vector)* ")"
//!           | "formula" ID "=" expr
//!           | "config" ("seed" | "tol" | "p_one") "=" NUMBER
//! step     := "record" "at" INT | "clone" ID "->" ID | "unclone" ID "blank" ID
//!           | "blackhole" ID | "evolve" ID "by" matrix | "reconstruct" ["p" NUMBER]
//! query    := "eval" ID "in" ID | "super" ID | "check-past" | "feasible" ID ID
//! vector   := "[" scalar ("," scalar)* "]"
//! matrix   := "[" vector ("," vector)* "]"
//! scalar   := ["-"] term [("+" | "-") imag] | ["-"] imag
//! term     := NUMBER | NUMBER "/" NUMBER | NUMBER "/" "sqrt" "(" NUMBER ")"
//! imag     := term "i" | "i"
//! expr     := or [("implies" | "->") expr]
//! or       := and (("or" | "|") and)*
//! and      := unary (("and" | "&") unary)*
//! unary    := ("not" | "!" | "~") unary | "(" expr ")" | ID "(" ID ")"
//! ```
//!
//! Newlines carry no meaning; `#` starts a comment. Declarations must precede
//! use, and the parser resolves identifiers and checks dimensions, so a
//! scenario that parses is ready to run.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::ast::*;
use crate::hilbert::{HilbertError, StateVector, C64};
use crate::lattice::{Formula, LatticeError, Subspace};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticKind {
    #[error("syntax error: found {found}, expected {}", .expected.join(" or "))]
    Syntax { found: String, expected: Vec<String> },
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("identifier {0:?} is already declared")]
    DuplicateIdentifier(String),
    #[error("{what}: dimension {left} vs {right}")]
    DimensionMismatch { what: String, left: usize, right: usize },
    #[error("zero vector is not a state")]
    ZeroVector,
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("span is the zero subspace")]
    EmptySpan,
    #[error("invalid number: {0}")]
    InvalidNumber(String),
    #[error("invalid setting: {0}")]
    InvalidSetting(String),
}

/// A diagnostic with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{pos}: {kind}")]
pub struct ScenarioError {
    pub pos: Pos,
    pub kind: DiagnosticKind,
}

impl ScenarioError {
    fn new(pos: Pos, kind: DiagnosticKind) -> Self {
        Self { pos, kind }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(s) => write!(f, "number `{s}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const SYMBOLS: [&str; 14] = ["->", "=", "[", "]", "(", ")", ",", "/", "+", "-", "&", "|", "!", "~"];

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ScenarioError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let advance = |i: &mut usize, col: &mut usize, n: usize| {
        *i += n;
        *col += n;
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            advance(&mut i, &mut col, 1);
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut col, 1);
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                advance(&mut i, &mut col, 1);
            }
            let mut word: String = chars[start..i].iter().collect();
            if word == "check" && chars[i..].starts_with(&['-', 'p', 'a', 's', 't']) {
                let tail_ok = chars.get(i + 5).is_none_or(|c| !(c.is_ascii_alphanumeric() || *c == '_'));
                if tail_ok {
                    advance(&mut i, &mut col, 5);
                    word.push_str("-past");
                }
            }
            out.push((Tok::Ident(word), pos));
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(&mut i, &mut col, 1);
            }
            if i < chars.len() && chars[i] == '.' {
                advance(&mut i, &mut col, 1);
                while i < chars.len() && chars[i].is_ascii_digit() {
                    advance(&mut i, &mut col, 1);
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let sign = usize::from(matches!(chars.get(i + 1), Some('+' | '-')));
                if chars.get(i + 1 + sign).is_some_and(|d| d.is_ascii_digit()) {
                    advance(&mut i, &mut col, 1 + sign);
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        advance(&mut i, &mut col, 1);
                    }
                }
            }
            out.push((Tok::Number(chars[start..i].iter().collect()), pos));
        } else if let Some(sym) = SYMBOLS.iter().find(|s| {
            let sc: Vec<char> = s.chars().collect();
            chars[i..].starts_with(&sc)
        }) {
            advance(&mut i, &mut col, sym.chars().count());
            out.push((Tok::Sym(sym), pos));
        } else {
            return Err(ScenarioError::new(
                pos,
                DiagnosticKind::Syntax {
                    found: format!("character {c:?}"),
                    expected: vec!["a token".into()],
                },
            ));
        }
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

const RESERVED: [&str; 25] = [
    "state", "prop", "formula", "config", "record", "clone", "unclone", "blackhole", "evolve",
    "reconstruct", "eval", "super", "check-past", "feasible", "span", "at", "blank", "by", "in",
    "not", "and", "or", "implies", "sqrt", "i",
];

#[derive(Debug, Clone, Copy, PartialEq)]
enum Symbol {
    State(usize),
    Prop(usize),
    Formula,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    symbols: BTreeMap<String, Symbol>,
}

type PResult<T> = Result<T, ScenarioError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(ScenarioError::new(
            self.pos(),
            DiagnosticKind::Syntax {
                found: self.peek().to_string(),
                expected: expected.iter().map(|s| s.to_string()).collect(),
            },
        ))
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(x) if *x == s)
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(x) if x == w)
    }

    fn expect_sym(&mut self, s: &str) -> PResult<()> {
        if self.is_sym(s) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&[&format!("`{s}`")])
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<()> {
        if self.is_word(w) {
            self.bump();
            Ok(())
        } else {
            self.unexpected(&[&format!("`{w}`")])
        }
    }

    fn ident(&mut self) -> PResult<(String, Pos)> {
        match self.peek() {
            Tok::Ident(s) if !RESERVED.contains(&s.as_str()) => {
                let s = s.clone();
                let (_, pos) = self.bump();
                Ok((s, pos))
            }
            _ => self.unexpected(&["identifier"]),
        }
    }

    fn number_text(&mut self) -> PResult<(String, Pos)> {
        match self.peek() {
            Tok::Number(s) => {
                let s = s.clone();
                let (_, pos) = self.bump();
                Ok((s, pos))
            }
            _ => self.unexpected(&["number"]),
        }
    }

    fn number(&mut self) -> PResult<(f64, Pos)> {
        let (text, pos) = self.number_text()?;
        let x: f64 = text
            .parse()
            .map_err(|_| ScenarioError::new(pos, DiagnosticKind::InvalidNumber(text.clone())))?;
        if !x.is_finite() {
            return Err(ScenarioError::new(pos, DiagnosticKind::InvalidNumber(text)));
        }
        Ok((x, pos))
    }

    fn integer(&mut self) -> PResult<u64> {
        let (text, pos) = self.number_text()?;
        text.parse()
            .map_err(|_| ScenarioError::new(pos, DiagnosticKind::InvalidNumber(format!("{text} is not a non-negative integer"))))
    }

    // ---- numbers and vectors

    fn real_lit(&mut self) -> PResult<RealLit> {
        let (a, _) = self.number()?;
        if !self.is_sym("/") {
            return Ok(RealLit::Decimal(a));
        }
        self.bump();
        if self.is_word("sqrt") {
            self.bump();
            self.expect_sym("(")?;
            let (b, pos) = self.number()?;
            self.expect_sym(")")?;
            if b <= 0.0 {
                return Err(ScenarioError::new(pos, DiagnosticKind::InvalidNumber(format!("sqrt({b}) in a denominator"))));
            }
            Ok(RealLit::InvSqrt(a, b))
        } else {
            let (b, pos) = self.number()?;
            if b == 0.0 {
                return Err(ScenarioError::new(pos, DiagnosticKind::InvalidNumber(format!("{a}/0"))));
            }
            Ok(RealLit::Fraction(a, b))
        }
    }

    /// `term ["i"]` or a bare `i`; returns the literal and whether it is imaginary.
    fn term(&mut self) -> PResult<(RealLit, bool)> {
        if self.is_word("i") {
            self.bump();
            return Ok((RealLit::Decimal(1.0), true));
        }
        if !matches!(self.peek(), Tok::Number(_)) {
            return self.unexpected(&["number", "`i`"]);
        }
        let lit = self.real_lit()?;
        if self.is_word("i") {
            self.bump();
            Ok((lit, true))
        } else {
            Ok((lit, false))
        }
    }

    fn scalar(&mut self) -> PResult<Scalar> {
        let negative = if self.is_sym("-") {
            self.bump();
            true
        } else {
            false
        };
        let (lit, imag) = self.term()?;
        let first = Real { negative, lit };
        if imag {
            return Ok(Scalar { re: None, im: Some(first) });
        }
        if self.is_sym("+") || self.is_sym("-") {
            let negative = self.is_sym("-");
            self.bump();
            let pos = self.pos();
            let (lit, imag) = self.term()?;
            if !imag {
                return Err(ScenarioError::new(
                    pos,
                    DiagnosticKind::Syntax {
                        found: "a real part".into(),
                        expected: vec!["imaginary part ending in `i`".into()],
                    },
                ));
            }
            return Ok(Scalar {
                re: Some(first),
                im: Some(Real { negative, lit }),
            });
        }
        Ok(Scalar { re: Some(first), im: None })
    }

    fn vector(&mut self) -> PResult<(Vec<Scalar>, Pos)> {
        let pos = self.pos();
        self.expect_sym("[")?;
        let mut v = vec![self.scalar()?];
        while self.is_sym(",") {
            self.bump();
            v.push(self.scalar()?);
        }
        self.expect_sym("]")?;
        Ok((v, pos))
    }

    fn vector_list(&mut self) -> PResult<Vec<(Vec<Scalar>, Pos)>> {
        let mut out = vec![self.vector()?];
        while self.is_sym(",") {
            self.bump();
            out.push(self.vector()?);
        }
        Ok(out)
    }

    // ---- symbols

    fn declare(&mut self, name: &str, pos: Pos, sym: Symbol) -> PResult<()> {
        if self.symbols.contains_key(name) {
            return Err(ScenarioError::new(pos, DiagnosticKind::DuplicateIdentifier(name.to_string())));
        }
        self.symbols.insert(name.to_string(), sym);
        Ok(())
    }

    fn lookup(&self, name: &str, pos: Pos) -> PResult<Symbol> {
        self.symbols
            .get(name)
            .copied()
            .ok_or_else(|| ScenarioError::new(pos, DiagnosticKind::UnknownIdentifier(name.to_string())))
    }

    fn state_ref(&mut self) -> PResult<(String, usize, Pos)> {
        let (name, pos) = self.ident()?;
        match self.lookup(&name, pos)? {
            Symbol::State(d) => Ok((name, d, pos)),
            _ => Err(ScenarioError::new(pos, DiagnosticKind::UnknownIdentifier(format!("{name} (not a state)")))),
        }
    }

    fn prop_ref(&mut self) -> PResult<(String, usize, Pos)> {
        let (name, pos) = self.ident()?;
        match self.lookup(&name, pos)? {
            Symbol::Prop(d) => Ok((name, d, pos)),
            _ => Err(ScenarioError::new(pos, DiagnosticKind::UnknownIdentifier(format!("{name} (not a proposition)")))),
        }
    }

    // ---- formulas

    fn expr(&mut self, atoms: &mut Vec<AtomRef>) -> PResult<Formula> {
        let lhs = self.or_expr(atoms)?;
        if self.is_word("implies") || self.is_sym("->") {
            self.bump();
            let rhs = self.expr(atoms)?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or_expr(&mut self, atoms: &mut Vec<AtomRef>) -> PResult<Formula> {
        let mut lhs = self.and_expr(atoms)?;
        while self.is_word("or") || self.is_sym("|") {
            self.bump();
            lhs = Formula::or(lhs, self.and_expr(atoms)?);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self, atoms: &mut Vec<AtomRef>) -> PResult<Formula> {
        let mut lhs = self.unary(atoms)?;
        while self.is_word("and") || self.is_sym("&") {
            self.bump();
            lhs = Formula::and(lhs, self.unary(atoms)?);
        }
        Ok(lhs)
    }

    fn unary(&mut self, atoms: &mut Vec<AtomRef>) -> PResult<Formula> {
        if self.is_word("not") || self.is_sym("!") || self.is_sym("~") {
            self.bump();
            return Ok(Formula::not(self.unary(atoms)?));
        }
        if self.is_sym("(") {
            self.bump();
            let inner = self.expr(atoms)?;
            self.expect_sym(")")?;
            return Ok(inner);
        }
        if !matches!(self.peek(), Tok::Ident(_)) {
            return self.unexpected(&["`not`", "`(`", "atom `Prop(state)`"]);
        }
        let (prop, pdim, _) = self.prop_ref()?;
        self.expect_sym("(")?;
        let (state, sdim, spos) = self.state_ref()?;
        self.expect_sym(")")?;
        if pdim != sdim {
            return Err(ScenarioError::new(
                spos,
                DiagnosticKind::DimensionMismatch {
                    what: format!("atom {prop}({state})"),
                    left: pdim,
                    right: sdim,
                },
            ));
        }
        let key = valuation_key(&prop, &state);
        if !atoms.iter().any(|a| a.key == key) {
            atoms.push(AtomRef {
                key: key.clone(),
                prop,
                state,
            });
        }
        Ok(Formula::Atom(key))
    }

    // ---- items

    fn item(&mut self) -> PResult<Item> {
        let pos = self.pos();
        let word = match self.peek() {
            Tok::Ident(w) => w.clone(),
            _ => return self.unexpected(&["a declaration, step or query"]),
        };
        let kind = match word.as_str() {
            "state" => self.state_decl()?,
            "prop" => self.prop_decl()?,
            "formula" => self.formula_decl()?,
            "config" => self.config_decl()?,
            "record" => {
                self.bump();
                self.expect_word("at")?;
                ItemKind::Record { at: self.integer()? }
            }
            "clone" => {
                self.bump();
                let (source, d1, _) = self.state_ref()?;
                self.expect_sym("->")?;
                let (target, d2, p2) = self.state_ref()?;
                dims_agree("clone", d1, d2, p2)?;
                ItemKind::Clone { source, target }
            }
            "unclone" => {
                self.bump();
                let (target, d1, _) = self.state_ref()?;
                self.expect_word("blank")?;
                let (blank, d2, p2) = self.state_ref()?;
                dims_agree("unclone", d1, d2, p2)?;
                ItemKind::Unclone { target, blank }
            }
            "blackhole" => {
                self.bump();
                ItemKind::Blackhole { target: self.state_ref()?.0 }
            }
            "evolve" => self.evolve_step()?,
            "reconstruct" => {
                self.bump();
                let p_one = if self.is_word("p") {
                    self.bump();
                    let (p, ppos) = self.number()?;
                    if !(0.0..=1.0).contains(&p) {
                        return Err(ScenarioError::new(ppos, DiagnosticKind::InvalidSetting(format!("probability {p} is outside [0, 1]"))));
                    }
                    Some(p)
                } else {
                    None
                };
                ItemKind::Reconstruct { p_one }
            }
            "eval" => {
                self.bump();
                let (state, d1, _) = self.state_ref()?;
                self.expect_word("in")?;
                let (prop, d2, p2) = self.prop_ref()?;
                dims_agree("eval", d1, d2, p2)?;
                ItemKind::Eval { state, prop }
            }
            "super" => {
                self.bump();
                let (name, npos) = self.ident()?;
                if self.lookup(&name, npos)? != Symbol::Formula {
                    return Err(ScenarioError::new(npos, DiagnosticKind::UnknownIdentifier(format!("{name} (not a formula)"))));
                }
                ItemKind::Super { formula: name }
            }
            "check-past" => {
                self.bump();
                ItemKind::CheckPast
            }
            "feasible" => {
                self.bump();
                let (a, d1, _) = self.state_ref()?;
                let (b, d2, p2) = self.state_ref()?;
                dims_agree("feasible", d1, d2, p2)?;
                ItemKind::Feasible { a, b }
            }
            _ => return self.unexpected(&["a declaration, step or query"]),
        };
        Ok(Item { pos, kind })
    }

    fn state_decl(&mut self) -> PResult<ItemKind> {
        self.bump();
        let (name, npos) = self.ident()?;
        self.expect_sym("=")?;
        let (components, vpos) = self.vector()?;
        let values: Vec<C64> = components.iter().map(|s| s.value()).collect();
        let state = StateVector::new(values).map_err(|e| ScenarioError::new(vpos, hilbert_diag(e)))?;
        self.declare(&name, npos, Symbol::State(state.dim()))?;
        Ok(ItemKind::State { name, components })
    }

    fn prop_decl(&mut self) -> PResult<ItemKind> {
        self.bump();
        let (name, npos) = self.ident()?;
        self.expect_sym("=")?;
        self.expect_word("span")?;
        let spos = self.pos();
        self.expect_sym("(")?;
        let vectors = self.vector_list()?;
        self.expect_sym(")")?;
        let dim = vectors[0].0.len();
        for (v, vpos) in &vectors {
            if v.len() != dim {
                return Err(ScenarioError::new(
                    *vpos,
                    DiagnosticKind::DimensionMismatch {
                        what: format!("spanning vector of {name}"),
                        left: dim,
                        right: v.len(),
                    },
                ));
            }
        }
        if dim < 2 {
            return Err(ScenarioError::new(spos, DiagnosticKind::DimensionTooSmall(dim)));
        }
        let raw: Vec<Vec<C64>> = vectors.iter().map(|(v, _)| v.iter().map(|s| s.value()).collect()).collect();
        match Subspace::span(&raw, dim) {
            Ok(_) => {}
            Err(LatticeError::EmptySpan) => return Err(ScenarioError::new(spos, DiagnosticKind::EmptySpan)),
            Err(e) => {
                return Err(ScenarioError::new(spos, DiagnosticKind::InvalidNumber(e.to_string())));
            }
        }
        self.declare(&name, npos, Symbol::Prop(dim))?;
        Ok(ItemKind::Prop {
            name,
            vectors: vectors.into_iter().map(|(v, _)| v).collect(),
        })
    }

    fn formula_decl(&mut self) -> PResult<ItemKind> {
        self.bump();
        let (name, npos) = self.ident()?;
        self.expect_sym("=")?;
        let mut atoms = Vec::new();
        let expr = self.expr(&mut atoms)?;
        self.declare(&name, npos, Symbol::Formula)?;
        Ok(ItemKind::Formula { name, expr, atoms })
    }

    fn config_decl(&mut self) -> PResult<ItemKind> {
        self.bump();
        let kpos = self.pos();
        let key = match self.peek() {
            Tok::Ident(k) => k.clone(),
            _ => return self.unexpected(&["`seed`", "`tol`", "`p_one`"]),
        };
        self.bump();
        self.expect_sym("=")?;
        let setting = match key.as_str() {
            "seed" => ConfigSetting::Seed(self.integer()?),
            "tol" => {
                let (t, pos) = self.number()?;
                if t <= 0.0 {
                    return Err(ScenarioError::new(pos, DiagnosticKind::InvalidSetting(format!("tolerance {t} must be positive"))));
                }
                ConfigSetting::Tol(t)
            }
            "p_one" => {
                let (p, pos) = self.number()?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(ScenarioError::new(pos, DiagnosticKind::InvalidSetting(format!("probability {p} is outside [0, 1]"))));
                }
                ConfigSetting::POne(p)
            }
            other => {
                return Err(ScenarioError::new(kpos, DiagnosticKind::InvalidSetting(format!("unknown setting {other:?}"))));
            }
        };
        Ok(ItemKind::Config(setting))
    }

    fn evolve_step(&mut self) -> PResult<ItemKind> {
        self.bump();
        let (target, dim, _) = self.state_ref()?;
        self.expect_word("by")?;
        let mpos = self.pos();
        self.expect_sym("[")?;
        let rows = self.vector_list()?;
        self.expect_sym("]")?;
        if rows.len() != dim {
            return Err(ScenarioError::new(
                mpos,
                DiagnosticKind::DimensionMismatch {
                    what: format!("evolution of {target}"),
                    left: dim,
                    right: rows.len(),
                },
            ));
        }
        for (row, rpos) in &rows {
            if row.len() != dim {
                return Err(ScenarioError::new(
                    *rpos,
                    DiagnosticKind::DimensionMismatch {
                        what: "matrix row".into(),
                        left: dim,
                        right: row.len(),
                    },
                ));
            }
        }
        Ok(ItemKind::Evolve {
            target,
            matrix: rows.into_iter().map(|(r, _)| r).collect(),
        })
    }
}

fn dims_agree(what: &str, left: usize, right: usize, pos: Pos) -> PResult<()> {
    if left == right {
        Ok(())
    } else {
        Err(ScenarioError::new(
            pos,
            DiagnosticKind::DimensionMismatch {
                what: what.to_string(),
                left,
                right,
            },
        ))
    }
}

fn hilbert_diag(e: HilbertError) -> DiagnosticKind {
    match e {
        HilbertError::ZeroVector => DiagnosticKind::ZeroVector,
        HilbertError::DimensionTooSmall(d) => DiagnosticKind::DimensionTooSmall(d),
        other => DiagnosticKind::InvalidNumber(other.to_string()),
    }
}

/// Parses and checks a scenario.
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        symbols: BTreeMap::new(),
    };
    let mut items = Vec::new();
    while *p.peek() != Tok::Eof {
        items.push(p.item()?);
    }
    Ok(Scenario { items })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> ScenarioError {
        parse_scenario(text).unwrap_err()
    }

    #[test]
    fn smallest_program() {
        let s = parse_scenario("state phi = [1, 0]").unwrap();
        assert_eq!(s.items.len(), 1);
        assert!(matches!(&s.items[0].kind, ItemKind::State { name, .. } if name == "phi"));
    }

    #[test]
    fn prop_and_query_on_one_line() {
        let s = parse_scenario("state phi = [1, 0]\nprop Zplus = span([1,0])  eval phi in Zplus").unwrap();
        assert_eq!(s.items.len(), 3);
        assert!(matches!(&s.items[1].kind, ItemKind::Prop { vectors, .. } if vectors.len() == 1));
        assert_eq!(
            s.items[2].kind,
            ItemKind::Eval {
                state: "phi".into(),
                prop: "Zplus".into()
            }
        );
        assert_eq!(s.items[2].pos, Pos { line: 2, col: 27 });
    }

    #[test]
    fn zero_state_diagnostic() {
        let e = err("state ok = [1, 0]\nstate bad = [0, 0]");
        assert_eq!(e.kind, DiagnosticKind::ZeroVector);
        assert_eq!(e.pos, Pos { line: 2, col: 13 });
        assert!(e.to_string().starts_with("2:13: "));
    }

    #[test]
    fn number_forms() {
        let s = parse_scenario("state u = [1/sqrt(2), -1/2+0.25i]\nstate v = [i, -2.5e-1i]").unwrap();
        let ItemKind::State { components, .. } = &s.items[0].kind else { panic!() };
        assert!((components[0].value().re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(components[1].value(), C64::new(-0.5, 0.25));
        let ItemKind::State { components, .. } = &s.items[1].kind else { panic!() };
        assert_eq!(components[0].value(), C64::new(0.0, 1.0));
        assert_eq!(components[1].value(), C64::new(0.0, -0.25));
    }

    #[test]
    fn formula_precedence() {
        let s = parse_scenario(
            "state a = [1, 0]\nprop P = span([1,0])\nprop Q = span([0,1])\nformula F = not P(a) or Q(a) and P(a) -> Q(a) implies P(a)",
        )
        .unwrap();
        let ItemKind::Formula { expr, atoms, .. } = &s.items[3].kind else { panic!() };
        assert_eq!(expr.to_string(), "not P(a) or Q(a) and P(a) implies Q(a) implies P(a)");
        assert_eq!(atoms.len(), 2);
    }

    #[test]
    fn comments_and_check_past() {
        let s = parse_scenario("# header\nrecord at 0 # trailing\ncheck-past\n").unwrap();
        assert_eq!(s.items[1].kind, ItemKind::CheckPast);
    }

    #[test]
    fn syntax_error_lists_expected_tokens() {
        let e = err("state phi [1, 0]");
        assert_eq!(e.pos, Pos { line: 1, col: 11 });
        match e.kind {
            DiagnosticKind::Syntax { expected, .. } => assert_eq!(expected, vec!["`=`"]),
            other => panic!("{other:?}"),
        }
        assert!(matches!(err("record at").kind, DiagnosticKind::Syntax { .. }));
        assert!(matches!(err("state x = [1, 0] $").kind, DiagnosticKind::Syntax { .. }));
    }

    #[test]
    fn identifier_errors() {
        assert_eq!(err("eval phi in Z").kind, DiagnosticKind::UnknownIdentifier("phi".into()));
        assert_eq!(
            err("state a = [1,0]\nstate a = [0,1]").kind,
            DiagnosticKind::DuplicateIdentifier("a".into())
        );
        assert!(matches!(err("state a = [1,0]\nsuper a").kind, DiagnosticKind::UnknownIdentifier(_)));
        assert!(matches!(err("state in = [1,0]").kind, DiagnosticKind::Syntax { .. }));
    }

    #[test]
    fn dimension_errors() {
        let pre = "state a = [1,0]\nstate b = [1,0,0]\nprop P = span([1,0,0])\n";
        for tail in ["clone a -> b", "eval a in P", "feasible a b", "unclone a blank b", "evolve a by [[1,0,0],[0,1,0],[0,0,1]]", "formula F = P(a)"] {
            let e = err(&format!("{pre}{tail}"));
            assert!(matches!(e.kind, DiagnosticKind::DimensionMismatch { .. }), "{tail}: {e}");
            assert_eq!(e.pos.line, 4);
        }
        assert!(matches!(err("prop P = span([1,0],[1,0,0])").kind, DiagnosticKind::DimensionMismatch { .. }));
        assert_eq!(err("prop P = span([0,0])").kind, DiagnosticKind::EmptySpan);
        assert_eq!(err("state s = [1]").kind, DiagnosticKind::DimensionTooSmall(1));
    }

    #[test]
    fn invalid_numbers_and_settings() {
        assert!(matches!(err("state s = [1/0, 1]").kind, DiagnosticKind::InvalidNumber(_)));
        assert!(matches!(err("config p_one = 2").kind, DiagnosticKind::InvalidSetting(_)));
        assert!(matches!(err("config tol = 0").kind, DiagnosticKind::InvalidSetting(_)));
        assert!(matches!(err("config seed = 1.5").kind, DiagnosticKind::InvalidNumber(_)));
        assert!(matches!(err("config speed = 1").kind, DiagnosticKind::InvalidSetting(_)));
        assert!(matches!(err("reconstruct p 1.5").kind, DiagnosticKind::InvalidSetting(_)));
    }

    #[test]
    fn pretty_print_round_trip() {
        let text = "config seed = 7\nconfig tol = 0.000000001\nstate u = [1/sqrt(2), -1/2-3i]\nprop P = span([1, 0], [0, 1])\n\
                    formula F = (P(u) implies P(u)) and not P(u)\nevolve u by [[0, 1], [1, 0]]\nreconstruct p 0.25\nsuper F\n";
        let s = parse_scenario(text).unwrap();
        let printed = s.to_string();
        let again = parse_scenario(&printed).unwrap();
        assert_eq!(again.items.iter().map(|i| &i.kind).collect::<Vec<_>>(), s.items.iter().map(|i| &i.kind).collect::<Vec<_>>());
        assert!(printed.contains("config tol = 1e-9"));
        assert!(printed.contains("(P(u) implies P(u)) and not P(u)"));
    }
}
