//! Propositions as closed subspaces.
//!
//! A [`Subspace`] is stored as its orthogonal projector `P`. Lattice
//! operations (orthocomplement, meet, join) produce new projectors, and
//! [`membership`] assigns a three-valued truth value to a state:
//!
//! - `True` when `‖P|ψ⟩ − |ψ⟩‖ < tol` (the state lies in the subspace),
//! - `False` when `‖P|ψ⟩‖ < tol` (the state is orthogonal to it),
//! - `Gap` otherwise (the state only has a component in the subspace).

pub mod formula;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::{check_dims, orthonormalize, vec_norm, HilbertError, Operator, StateVector, C64};

pub use formula::{evaluate_super, Formula, FormulaError};

/// Relative residual below which a spanning vector counts as dependent.
const RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("span of the given vectors is the zero subspace")]
    EmptySpan,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("not an orthogonal projector: {0}")]
    InvalidProjector(String),
}

impl From<HilbertError> for LatticeError {
    fn from(e: HilbertError) -> Self {
        match e {
            HilbertError::DimensionMismatch { left, right } => LatticeError::DimensionMismatch { left, right },
            other => LatticeError::InvalidProjector(other.to_string()),
        }
    }
}

fn same_dim(left: usize, right: usize) -> Result<(), LatticeError> {
    check_dims(left, right).map_err(LatticeError::from)
}

/// Three-valued truth: true, false, or a truth-value gap (`0/0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum TruthValue {
    True,
    False,
    Gap,
}

impl TruthValue {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }

    pub fn is_determinate(self) -> bool {
        self != TruthValue::Gap
    }

    pub fn to_bool(self) -> Option<bool> {
        match self {
            TruthValue::True => Some(true),
            TruthValue::False => Some(false),
            TruthValue::Gap => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TruthValue::True => "1",
            TruthValue::False => "0",
            TruthValue::Gap => "0/0",
        }
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not a truth value: {0:?} (expected 1, 0 or 0/0)")]
pub struct ParseTruthError(pub String);

impl FromStr for TruthValue {
    type Err = ParseTruthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "1" => Ok(TruthValue::True),
            "0" => Ok(TruthValue::False),
            "0/0" => Ok(TruthValue::Gap),
            other => Err(ParseTruthError(other.to_string())),
        }
    }
}

impl From<TruthValue> for String {
    fn from(t: TruthValue) -> Self {
        t.as_str().to_string()
    }
}

impl TryFrom<String> for TruthValue {
    type Error = ParseTruthError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// A closed linear subspace, represented by its orthogonal projector.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    projector: Operator,
    rank: usize,
}

impl Subspace {
    /// Validates `projector` (Hermitian, idempotent, integral trace) within `tol`.
    pub fn from_projector(projector: Operator, tol: f64) -> Result<Self, LatticeError> {
        let herm = projector.max_abs_diff(&projector.adjoint());
        if herm >= tol {
            return Err(LatticeError::InvalidProjector(format!("‖P − P†‖ = {herm:e}")));
        }
        let idem = projector.matmul(&projector)?.max_abs_diff(&projector);
        if idem >= tol {
            return Err(LatticeError::InvalidProjector(format!("‖P² − P‖ = {idem:e}")));
        }
        let trace = projector.trace().re;
        let rank = trace.round();
        if (trace - rank).abs() >= tol || rank < 0.0 {
            return Err(LatticeError::InvalidProjector(format!("trace {trace} is not an integer")));
        }
        Ok(Self {
            projector,
            rank: rank as usize,
        })
    }

    /// Projector onto the span of `vectors`, each of length `dim`.
    pub fn span(vectors: &[Vec<C64>], dim: usize) -> Result<Self, LatticeError> {
        for v in vectors {
            same_dim(dim, v.len())?;
        }
        let s = Self::from_spanning_set(vectors, dim);
        if s.rank == 0 {
            return Err(LatticeError::EmptySpan);
        }
        Ok(s)
    }

    pub fn span_reals(vectors: &[&[f64]]) -> Result<Self, LatticeError> {
        let dim = vectors.first().map_or(0, |v| v.len());
        let vs: Vec<Vec<C64>> = vectors
            .iter()
            .map(|v| v.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::span(&vs, dim)
    }

    /// The line through a state.
    pub fn ray(state: &StateVector) -> Self {
        Self::from_spanning_set(&[state.amplitudes().to_vec()], state.dim())
    }

    // Possibly-empty span; callers check dimensions.
    fn from_spanning_set(vectors: &[Vec<C64>], dim: usize) -> Self {
        let basis = orthonormalize(vectors, dim, RANK_TOL);
        Self::from_orthonormal(&basis, dim)
    }

    fn from_orthonormal(basis: &[Vec<C64>], dim: usize) -> Self {
        let projector = Operator::from_fn(dim, |i, j| basis.iter().map(|b| b[i] * b[j].conj()).sum());
        Self {
            projector,
            rank: basis.len(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            projector: Operator::zeros(dim),
            rank: 0,
        }
    }

    pub fn full(dim: usize) -> Self {
        Self {
            projector: Operator::identity(dim),
            rank: dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.projector.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn projector(&self) -> &Operator {
        &self.projector
    }

    /// Orthonormal basis of the subspace.
    pub fn basis(&self) -> Vec<Vec<C64>> {
        orthonormalize(&self.projector.columns(), self.dim(), RANK_TOL)
    }

    /// `P|v⟩` for a raw vector.
    pub fn project(&self, v: &[C64]) -> Result<Vec<C64>, LatticeError> {
        Ok(self.projector.apply_raw(v)?)
    }

    /// Projector equality within `tol` (max-entry norm).
    pub fn approx_eq(&self, other: &Subspace, tol: f64) -> bool {
        self.dim() == other.dim() && self.projector.max_abs_diff(&other.projector) < tol
    }

    /// Projector order: `self ⊆ other` iff `P_other P_self = P_self`.
    pub fn is_contained_in(&self, other: &Subspace, tol: f64) -> Result<bool, LatticeError> {
        same_dim(self.dim(), other.dim())?;
        let prod = other.projector.matmul(&self.projector)?;
        Ok(prod.max_abs_diff(&self.projector) < tol)
    }

    pub fn orthocomplement(&self) -> Subspace {
        orthocomplement(self)
    }

    pub fn meet(&self, other: &Subspace) -> Result<Subspace, LatticeError> {
        meet(self, other)
    }

    pub fn join(&self, other: &Subspace) -> Result<Subspace, LatticeError> {
        join(self, other)
    }

    /// `U S U†`, the image of the subspace under `u`.
    pub fn conjugate_by(&self, u: &Operator) -> Result<Subspace, LatticeError> {
        same_dim(self.dim(), u.dim())?;
        let images: Vec<Vec<C64>> = self
            .basis()
            .iter()
            .map(|b| u.apply_raw(b))
            .collect::<Result<_, _>>()?;
        Ok(Self::from_spanning_set(&images, self.dim()))
    }
}

/// `I − P`.
pub fn orthocomplement(s: &Subspace) -> Subspace {
    let dim = s.dim();
    Subspace {
        projector: Operator::identity(dim).sub(&s.projector).expect("same dimension"),
        rank: dim - s.rank,
    }
}

/// Projector onto `S1 ∩ S2`: the kernel of `(I − P1) + (I − P2)`.
///
/// The sum is Hermitian and positive semidefinite, so its kernel is the
/// orthocomplement of its range, and the range is spanned by its columns.
pub fn meet(s1: &Subspace, s2: &Subspace) -> Result<Subspace, LatticeError> {
    same_dim(s1.dim(), s2.dim())?;
    let dim = s1.dim();
    let a = orthocomplement(s1).projector.add(&orthocomplement(s2).projector)?;
    let range = Subspace::from_spanning_set(&a.columns(), dim);
    Ok(orthocomplement(&range))
}

/// Projector onto the closed span of `S1 ∪ S2`.
pub fn join(s1: &Subspace, s2: &Subspace) -> Result<Subspace, LatticeError> {
    same_dim(s1.dim(), s2.dim())?;
    let mut columns = s1.basis();
    columns.extend(s2.basis());
    Ok(Subspace::from_spanning_set(&columns, s1.dim()))
}

/// Three-valued membership of a state in a subspace proposition.
pub fn membership(state: &StateVector, prop: &Subspace, tol: f64) -> Result<TruthValue, LatticeError> {
    same_dim(state.dim(), prop.dim())?;
    let psi = state.amplitudes();
    let projected = prop.project(psi)?;
    let residual: Vec<C64> = projected.iter().zip(psi).map(|(p, v)| p - v).collect();
    if vec_norm(&residual) < tol {
        Ok(TruthValue::True)
    } else if vec_norm(&projected) < tol {
        Ok(TruthValue::False)
    } else {
        Ok(TruthValue::Gap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOL;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn state(v: &[f64]) -> StateVector {
        StateVector::from_reals(v).unwrap()
    }

    fn z_plus() -> Subspace {
        Subspace::span_reals(&[&[1.0, 0.0]]).unwrap()
    }

    fn z_minus() -> Subspace {
        Subspace::span_reals(&[&[0.0, 1.0]]).unwrap()
    }

    fn x_plus() -> Subspace {
        Subspace::span_reals(&[&[1.0, 1.0]]).unwrap()
    }

    fn x_minus() -> Subspace {
        Subspace::span_reals(&[&[1.0, -1.0]]).unwrap()
    }

    fn real_projector(rows: &[&[f64]]) -> Operator {
        Operator::from_real_rows(rows).unwrap()
    }

    #[test]
    fn span_examples() {
        assert!(z_plus().approx_eq(&Subspace::from_projector(real_projector(&[&[1.0, 0.0], &[0.0, 0.0]]), 1e-9).unwrap(), 1e-12));
        let half = real_projector(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(x_plus().projector().max_abs_diff(&half) < 1e-12);
        let full = Subspace::span_reals(&[&[1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert_eq!(full.rank(), 2);
        assert!(full.approx_eq(&Subspace::full(2), 1e-12));
    }

    #[test]
    fn span_errors() {
        assert_eq!(Subspace::span_reals(&[&[0.0, 0.0]]), Err(LatticeError::EmptySpan));
        let v = vec![vec![C64::new(1.0, 0.0); 3]];
        assert_eq!(Subspace::span(&v, 2), Err(LatticeError::DimensionMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn from_projector_rejects_non_projectors() {
        assert!(Subspace::from_projector(real_projector(&[&[1.0, 1.0], &[0.0, 0.0]]), 1e-9).is_err());
        assert!(Subspace::from_projector(real_projector(&[&[2.0, 0.0], &[0.0, 0.0]]), 1e-9).is_err());
        let zero = Subspace::from_projector(Operator::zeros(3), 1e-9).unwrap();
        assert_eq!(zero.rank(), 0);
    }

    #[test]
    fn membership_valuation_table() {
        let phi = state(&[1.0, 0.0]);
        let ups = state(&[1.0, 1.0]);
        assert_eq!(membership(&phi, &z_plus(), DEFAULT_TOL).unwrap(), TruthValue::True);
        assert_eq!(membership(&phi, &z_minus(), DEFAULT_TOL).unwrap(), TruthValue::False);
        assert_eq!(membership(&phi, &x_plus(), DEFAULT_TOL).unwrap(), TruthValue::Gap);
        assert_eq!(membership(&phi, &x_minus(), DEFAULT_TOL).unwrap(), TruthValue::Gap);
        assert_eq!(membership(&ups, &z_plus(), DEFAULT_TOL).unwrap(), TruthValue::Gap);
    }

    #[test]
    fn zero_subspace_is_always_false() {
        let phi = state(&[0.3, 0.7]);
        assert_eq!(membership(&phi, &Subspace::zero(2), DEFAULT_TOL).unwrap(), TruthValue::False);
        assert_eq!(membership(&phi, &Subspace::full(2), DEFAULT_TOL).unwrap(), TruthValue::True);
    }

    #[test]
    fn membership_dimension_mismatch() {
        let err = membership(&state(&[1.0, 0.0, 0.0]), &z_plus(), DEFAULT_TOL).unwrap_err();
        assert_eq!(err, LatticeError::DimensionMismatch { left: 3, right: 2 });
    }

    #[test]
    fn orthocomplement_examples() {
        assert!(z_plus().orthocomplement().approx_eq(&z_minus(), 1e-12));
        assert_eq!(Subspace::full(3).orthocomplement().rank(), 0);
        assert!(x_plus().orthocomplement().orthocomplement().approx_eq(&x_plus(), 1e-12));
    }

    #[test]
    fn meet_examples() {
        assert_eq!(meet(&z_plus(), &z_minus()).unwrap().rank(), 0);
        assert!(meet(&x_plus(), &x_plus()).unwrap().approx_eq(&x_plus(), 1e-12));
        assert_eq!(meet(&z_plus(), &x_plus()).unwrap().rank(), 0);
    }

    #[test]
    fn meet_of_planes_in_three_dimensions() {
        let xy = Subspace::span_reals(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]).unwrap();
        let yz = Subspace::span_reals(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]).unwrap();
        let y = Subspace::span_reals(&[&[0.0, 1.0, 0.0]]).unwrap();
        assert!(meet(&xy, &yz).unwrap().approx_eq(&y, 1e-12));
    }

    #[test]
    fn join_examples() {
        assert!(join(&z_plus(), &z_minus()).unwrap().approx_eq(&Subspace::full(2), 1e-12));
        assert!(join(&x_plus(), &Subspace::zero(2)).unwrap().approx_eq(&x_plus(), 1e-12));
        assert!(join(&z_plus(), &x_plus()).unwrap().approx_eq(&Subspace::full(2), 1e-12));
    }

    #[test]
    fn lattice_ops_reject_mismatched_dims() {
        let three = Subspace::full(3);
        assert!(matches!(meet(&z_plus(), &three), Err(LatticeError::DimensionMismatch { .. })));
        assert!(matches!(join(&z_plus(), &three), Err(LatticeError::DimensionMismatch { .. })));
    }

    #[test]
    fn containment() {
        assert!(z_plus().is_contained_in(&Subspace::full(2), 1e-9).unwrap());
        assert!(!z_plus().is_contained_in(&x_plus(), 1e-9).unwrap());
    }

    #[test]
    fn ray_of_state() {
        let ups = state(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        assert!(Subspace::ray(&ups).approx_eq(&x_plus(), 1e-12));
    }

    #[test]
    fn truth_value_text() {
        assert_eq!(TruthValue::Gap.to_string(), "0/0");
        for t in [TruthValue::True, TruthValue::False, TruthValue::Gap] {
            assert_eq!(t.to_string().parse::<TruthValue>().unwrap(), t);
        }
        assert!("2".parse::<TruthValue>().is_err());
        assert_eq!(serde_json::to_string(&TruthValue::True).unwrap(), "\"1\"");
    }
}
