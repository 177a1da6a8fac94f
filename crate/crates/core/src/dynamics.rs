//! Cloning, un-cloning, truth-value loss and the black-hole toy process.
//!
//! The clone map `|a⟩ ⊗ |b⟩ ↦ |a⟩ ⊗ |a⟩` is kept symbolic: it acts on the
//! tensor factors and is never materialized as a matrix, because no unitary
//! realizes it for non-orthogonal inputs. [`check_cloner_feasibility`]
//! reports when a pair of inputs could still be cloned by one unitary.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::hilbert::{haar_state, inner, tensor, HilbertError, StateVector};
use crate::lattice::{membership, LatticeError, Subspace, TruthValue};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("joint state has no recorded tensor factors")]
    NotProductState,
    #[error("factors differ beyond tolerance; not of the cloned form |v⟩ ⊗ |v⟩")]
    NotCloneShape,
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(f64),
    #[error(transparent)]
    Hilbert(HilbertError),
    #[error(transparent)]
    Lattice(LatticeError),
}

impl From<HilbertError> for DynamicsError {
    fn from(e: HilbertError) -> Self {
        match e {
            HilbertError::DimensionMismatch { left, right } => DynamicsError::DimensionMismatch { left, right },
            other => DynamicsError::Hilbert(other),
        }
    }
}

impl From<LatticeError> for DynamicsError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::DimensionMismatch { left, right } => DynamicsError::DimensionMismatch { left, right },
            other => DynamicsError::Lattice(other),
        }
    }
}

/// A bipartite state, with its factors when it is a pure tensor product.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    joint: StateVector,
    factor_dims: (usize, usize),
    factors: Option<(StateVector, StateVector)>,
}

impl ProductState {
    pub fn from_factors(first: StateVector, second: StateVector) -> Self {
        Self {
            joint: tensor(&first, &second),
            factor_dims: (first.dim(), second.dim()),
            factors: Some((first, second)),
        }
    }

    /// A joint state with no known factorization.
    pub fn entangled(joint: StateVector, factor_dims: (usize, usize)) -> Result<Self, DynamicsError> {
        let expected = factor_dims.0 * factor_dims.1;
        if joint.dim() != expected {
            return Err(DynamicsError::DimensionMismatch {
                left: expected,
                right: joint.dim(),
            });
        }
        Ok(Self {
            joint,
            factor_dims,
            factors: None,
        })
    }

    pub fn joint(&self) -> &StateVector {
        &self.joint
    }

    pub fn factor_dims(&self) -> (usize, usize) {
        self.factor_dims
    }

    pub fn factors(&self) -> Option<(&StateVector, &StateVector)> {
        self.factors.as_ref().map(|(a, b)| (a, b))
    }

    /// Same joint ray within `tol`.
    pub fn same_ray(&self, other: &ProductState, tol: f64) -> bool {
        self.joint.same_ray(&other.joint, tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    /// `|⟨a|b⟩|`.
    pub witness_overlap: f64,
    /// `|⟨a|b⟩|²`, which a cloning unitary would force to equal the overlap.
    pub witness_overlap_squared: f64,
    pub detail: String,
}

/// Whether one unitary can clone both `a` and `b` onto a common blank.
///
/// Unitarity preserves inner products, so cloning both inputs forces
/// `⟨a|b⟩ = ⟨a|b⟩²`, which holds only for orthogonal inputs or inputs on the
/// same ray.
pub fn check_cloner_feasibility(a: &StateVector, b: &StateVector, tol: f64) -> Result<FeasibilityReport, DynamicsError> {
    let overlap = inner(a, b)?.norm();
    let squared = overlap * overlap;
    let (feasible, detail) = if overlap < tol {
        (true, "orthogonal inputs: a basis-copy unitary clones both".to_string())
    } else if 1.0 - overlap < tol {
        (true, "inputs on the same ray: cloning one clones the other".to_string())
    } else {
        (
            false,
            "inputs neither orthogonal nor on one ray: a cloning unitary would need |<a|b>| = |<a|b>|^2".to_string(),
        )
    };
    Ok(FeasibilityReport {
        feasible,
        witness_overlap: overlap,
        witness_overlap_squared: squared,
        detail,
    })
}

/// The hypothetical copy map `(|a⟩, |b⟩) ↦ (|a⟩, |a⟩)`. Not physical.
pub fn ideal_clone(input: &ProductState) -> Result<ProductState, DynamicsError> {
    let (source, blank) = input.factors().ok_or(DynamicsError::NotProductState)?;
    if source.dim() != blank.dim() {
        return Err(DynamicsError::DimensionMismatch {
            left: source.dim(),
            right: blank.dim(),
        });
    }
    Ok(ProductState::from_factors(source.clone(), source.clone()))
}

/// The reverse map `(|v⟩, |v⟩) ↦ (|v⟩, |blank⟩)`.
pub fn ideal_unclone(cloned: &ProductState, blank: &StateVector, tol: f64) -> Result<ProductState, DynamicsError> {
    let (first, second) = cloned.factors().ok_or(DynamicsError::NotProductState)?;
    if blank.dim() != second.dim() {
        return Err(DynamicsError::DimensionMismatch {
            left: second.dim(),
            right: blank.dim(),
        });
    }
    if !first.same_ray(second, tol) {
        return Err(DynamicsError::NotCloneShape);
    }
    Ok(ProductState::from_factors(first.clone(), blank.clone()))
}

/// Truth value of `prop` before and after an evolution.
pub fn truth_transition(
    before: &StateVector,
    after: &StateVector,
    prop: &Subspace,
    tol: f64,
) -> Result<(TruthValue, TruthValue), DynamicsError> {
    Ok((membership(before, prop, tol)?, membership(after, prop, tol)?))
}

/// Default probability that a lost value is reconstructed as true.
pub const DEFAULT_P_ONE: f64 = 0.5;

/// One draw of the random variable that replaces a lost truth value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReconstructionOutcome {
    pub value: u8,
    pub p_one: f64,
    pub p_zero: f64,
    pub seed: u64,
}

impl ReconstructionOutcome {
    pub fn truth(&self) -> TruthValue {
        TruthValue::from_bool(self.value == 1)
    }
}

/// Seeded Bernoulli draw with `Pr(value = 1) = p_one`.
pub fn sample_past_reconstruction(p_one: f64, seed: u64) -> Result<ReconstructionOutcome, DynamicsError> {
    if !(0.0..=1.0).contains(&p_one) {
        return Err(DynamicsError::BadProbability(p_one));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: f64 = rng.gen();
    Ok(ReconstructionOutcome {
        value: u8::from(u < p_one),
        p_one,
        p_zero: 1.0 - p_one,
        seed,
    })
}

/// Black-hole toy: the emitted state is a Haar-random pure state of the
/// same dimension, determined by `seed` alone.
pub fn blackhole_evaporate(input: &StateVector, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_state(input.dim(), &mut rng)
}
