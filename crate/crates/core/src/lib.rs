//! # svq
//!
//! Three-valued (supervaluational) truth for experimental quantum propositions.
//!
//! A proposition about a finite-dimensional quantum system is a closed linear
//! subspace, stored as its orthogonal projector. A pure state makes the
//! proposition true when the state lies in the subspace, false when it is
//! orthogonal to it, and leaves a truth-value gap (`0/0`) otherwise.
//!
//! Modules:
//!
//! - [`hilbert`]: states, operators, inner and tensor products, unitarity.
//! - [`lattice`]: subspace propositions, membership, meet/join/complement,
//!   and supervaluational evaluation of compound formulas.
//! - [`dynamics`]: the no-cloning feasibility check, the symbolic clone and
//!   un-clone maps, truth transitions, random reconstruction of a lost past
//!   value, and the black-hole evaporation toy.
//! - [`ledger`]: an append-only record of tensed valuations and the audit that
//!   detects alterations of the past.
//! - [`scenario`]: the `.svq` scenario language, its runner and report output.

#![forbid(unsafe_code)]

pub mod dynamics;
pub mod hilbert;
pub mod lattice;
pub mod ledger;
pub mod scenario;

pub use hilbert::{Operator, StateVector, C64};
pub use lattice::{membership, Subspace, TruthValue};

/// Default numerical tolerance shared by every module.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default cap on the number of gap atoms a supervaluation will enumerate.
pub const DEFAULT_PRECISIFICATION_CAP: usize = 20;

/// Numerical and enumeration settings used across the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    /// Norm tolerance for state validity, projector checks and membership.
    pub tol: f64,
    /// Maximum number of gap atoms enumerated by a supervaluation.
    pub precisification_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            precisification_cap: DEFAULT_PRECISIFICATION_CAP,
        }
    }
}
