//! Finite-dimensional complex Hilbert space primitives.
//!
//! Vectors are dense amplitude sequences and operators are dense row-major
//! square matrices. Dimensions stay small (a few qubits), so nothing here is
//! tuned for speed.
//!
//! Tensor products use first-factor-major (Kronecker) ordering: the amplitude
//! of `|i> ⊗ |j>` sits at index `i * b.dim() + j`.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::DEFAULT_TOL;

pub type C64 = Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbertError {
    #[error("zero vector is not a state")]
    ZeroVector,
    #[error("state dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operator flagged unitary changed the norm to {norm}")]
    NormLost { norm: f64 },
    #[error("matrix is not square: row {row} has {len} entries, expected {dim}")]
    NotSquare { row: usize, len: usize, dim: usize },
    #[error("matrix has no rows")]
    EmptyMatrix,
    #[error("non-finite entry")]
    NonFinite,
    #[error("operator is not unitary within {tol}")]
    NotUnitary { tol: f64 },
}

pub(crate) fn check_dims(left: usize, right: usize) -> Result<(), HilbertError> {
    if left == right {
        Ok(())
    } else {
        Err(HilbertError::DimensionMismatch { left, right })
    }
}

/// Euclidean norm of a raw amplitude slice.
pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `<a|b>`, conjugate-linear in `a`. Slices must have equal length.
pub fn vec_inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// A normalized pure state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Normalizes `components` into a state using the default tolerance.
    pub fn new(components: Vec<C64>) -> Result<Self, HilbertError> {
        Self::with_tol(components, DEFAULT_TOL)
    }

    /// Normalizes `components`; vectors with norm below `tol` are rejected.
    /// The global phase is kept as given.
    pub fn with_tol(components: Vec<C64>, tol: f64) -> Result<Self, HilbertError> {
        if components.len() < 2 {
            return Err(HilbertError::DimensionTooSmall(components.len()));
        }
        if components.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(HilbertError::NonFinite);
        }
        let norm = vec_norm(&components);
        if norm < tol {
            return Err(HilbertError::ZeroVector);
        }
        let amps = components.into_iter().map(|z| z / norm).collect();
        Ok(Self { amps })
    }

    /// Convenience constructor from real amplitudes.
    pub fn from_reals(components: &[f64]) -> Result<Self, HilbertError> {
        Self::new(components.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `|index>` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self, HilbertError> {
        if dim < 2 {
            return Err(HilbertError::DimensionTooSmall(dim));
        }
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amps)
    }

    pub fn inner(&self, other: &StateVector) -> Result<C64, HilbertError> {
        inner(self, other)
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        tensor(self, other)
    }

    /// True when both states describe the same ray, i.e. `|<a|b>|` is 1
    /// within `tol`.
    pub fn same_ray(&self, other: &StateVector, tol: f64) -> bool {
        self.dim() == other.dim() && (1.0 - vec_inner(&self.amps, &other.amps).norm()).abs() < tol
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_phase(&self, theta: f64) -> StateVector {
        let phase = C64::from_polar(1.0, theta);
        StateVector {
            amps: self.amps.iter().map(|z| z * phase).collect(),
        }
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, z) in self.amps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if z.im == 0.0 {
                write!(f, "{}", z.re)?;
            } else {
                write!(f, "{}{:+}i", z.re, z.im)?;
            }
        }
        write!(f, "]")
    }
}

/// Inner product `<a|b>`.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<C64, HilbertError> {
    check_dims(a.dim(), b.dim())?;
    Ok(vec_inner(&a.amps, &b.amps))
}

/// Kronecker product `a ⊗ b`, first factor major.
pub fn tensor(a: &StateVector, b: &StateVector) -> StateVector {
    let mut amps = Vec::with_capacity(a.dim() * b.dim());
    for x in &a.amps {
        for y in &b.amps {
            amps.push(x * y);
        }
    }
    StateVector { amps }
}

/// A dense square complex matrix, optionally flagged as unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<C64>,
    unitary: bool,
}

impl Operator {
    /// Builds a matrix from rows. The result is not flagged unitary.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self, HilbertError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(HilbertError::EmptyMatrix);
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(HilbertError::NotSquare {
                    row,
                    len: r.len(),
                    dim,
                });
            }
            entries.extend(r);
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(HilbertError::NonFinite);
        }
        Ok(Self {
            dim,
            entries,
            unitary: false,
        })
    }

    /// Builds a matrix and flags it unitary after checking `M†M = I` within `tol`.
    pub fn unitary_from_rows(rows: Vec<Vec<C64>>, tol: f64) -> Result<Self, HilbertError> {
        let mut m = Self::from_rows(rows)?;
        if !m.is_unitary(tol) {
            return Err(HilbertError::NotUnitary { tol });
        }
        m.unitary = true;
        Ok(m)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self, HilbertError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self {
            dim,
            entries,
            unitary: false,
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        m.unitary = true;
        m
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![C64::new(0.0, 0.0); dim * dim],
            unitary: false,
        }
    }

    /// Outer product `|a><b|` of raw vectors.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        assert_eq!(a.len(), b.len());
        Self::from_fn(a.len(), |i, j| a[i] * b[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_flagged_unitary(&self) -> bool {
        self.unitary
    }

    /// Re-checks unitarity and sets the flag if it holds.
    pub fn flag_unitary(mut self, tol: f64) -> Result<Self, HilbertError> {
        if !self.is_unitary(tol) {
            return Err(HilbertError::NotUnitary { tol });
        }
        self.unitary = true;
        Ok(self)
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self.get(r, col)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<C64>> {
        (0..self.dim).map(|c| self.column(c)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            dim: self.dim,
            entries: (0..self.dim * self.dim)
                .map(|k| self.get(k % self.dim, k / self.dim).conj())
                .collect(),
            unitary: self.unitary,
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Matrix product `self * rhs`. The unitary flag survives only when both
    /// factors carry it.
    pub fn matmul(&self, rhs: &Operator) -> Result<Self, HilbertError> {
        check_dims(self.dim, rhs.dim)?;
        let n = self.dim;
        let mut out = Self::from_fn(n, |i, j| (0..n).map(|k| self.get(i, k) * rhs.get(k, j)).sum());
        out.unitary = self.unitary && rhs.unitary;
        Ok(out)
    }

    pub fn add(&self, rhs: &Operator) -> Result<Self, HilbertError> {
        check_dims(self.dim, rhs.dim)?;
        Ok(Self::from_fn(self.dim, |i, j| self.get(i, j) + rhs.get(i, j)))
    }

    pub fn sub(&self, rhs: &Operator) -> Result<Self, HilbertError> {
        check_dims(self.dim, rhs.dim)?;
        Ok(Self::from_fn(self.dim, |i, j| self.get(i, j) - rhs.get(i, j)))
    }

    /// Raw matrix-vector product.
    pub fn apply_raw(&self, v: &[C64]) -> Result<Vec<C64>, HilbertError> {
        check_dims(self.dim, v.len())?;
        Ok((0..self.dim)
            .map(|i| (0..self.dim).map(|k| self.get(i, k) * v[k]).sum())
            .collect())
    }

    /// Largest entrywise modulus of `self - rhs`.
    pub fn max_abs_diff(&self, rhs: &Operator) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖M†M − I‖_max < tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        is_unitary(self, tol)
    }
}

/// Checks `‖M†M − I‖_max < tol`.
pub fn is_unitary(m: &Operator, tol: f64) -> bool {
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            let z: C64 = (0..n).map(|k| m.get(k, i).conj() * m.get(k, j)).sum();
            let expected = if i == j { 1.0 } else { 0.0 };
            if (z - expected).norm() >= tol {
                return false;
            }
        }
    }
    true
}

/// Applies `m` to `v`.
///
/// For an operator flagged unitary the output must keep unit norm within
/// `tol`, otherwise `NormLost` is returned. Any other operator has its
/// output renormalized, which fails with `ZeroVector` when `v` is annihilated.
pub fn apply_operator(m: &Operator, v: &StateVector, tol: f64) -> Result<StateVector, HilbertError> {
    let out = m.apply_raw(v.amplitudes())?;
    if m.is_flagged_unitary() {
        let norm = vec_norm(&out);
        if (norm - 1.0).abs() > tol {
            return Err(HilbertError::NormLost { norm });
        }
        return Ok(StateVector { amps: out });
    }
    StateVector::with_tol(out, tol)
}

/// Orthonormal basis for the span of `vectors` (all of length `dim`).
///
/// Modified Gram-Schmidt with column pivoting and one reorthogonalization
/// pass. A candidate whose residual falls below `rank_tol` times the largest
/// input norm is treated as dependent. Returns an empty basis for a span of
/// zero vectors.
pub fn orthonormalize(vectors: &[Vec<C64>], dim: usize, rank_tol: f64) -> Vec<Vec<C64>> {
    let scale = vectors.iter().map(|v| vec_norm(v)).fold(0.0, f64::max);
    if scale == 0.0 {
        return Vec::new();
    }
    let threshold = rank_tol * scale.max(1.0);
    let mut residuals: Vec<Vec<C64>> = vectors.to_vec();
    let mut basis: Vec<Vec<C64>> = Vec::new();
    while basis.len() < dim && !residuals.is_empty() {
        let (pivot, norm) = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, vec_norm(r)))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if norm <= threshold {
            break;
        }
        let mut q = residuals.swap_remove(pivot);
        // second pass against the existing basis
        for b in &basis {
            let c = vec_inner(b, &q);
            for (qk, bk) in q.iter_mut().zip(b) {
                *qk -= c * bk;
            }
        }
        let qn = vec_norm(&q);
        if qn <= threshold {
            continue;
        }
        for z in q.iter_mut() {
            *z /= qn;
        }
        for r in residuals.iter_mut() {
            let c = vec_inner(&q, r);
            for (rk, qk) in r.iter_mut().zip(&q) {
                *rk -= c * qk;
            }
        }
        basis.push(q);
    }
    basis
}

/// A vector of independent standard complex normal entries
/// (real and imaginary parts each `N(0, 1/2)`).
pub fn complex_normal_vec<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re * s, im * s)
        })
        .collect()
}

/// Haar-random pure state: normalized complex Gaussian vector.
pub fn haar_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    loop {
        let v = complex_normal_vec(dim, rng);
        if let Ok(s) = StateVector::new(v) {
            return s;
        }
    }
}

/// Haar-random unitary.
///
/// Gram-Schmidt on the columns of a complex Ginibre matrix is the QR
/// factorization with a positive real diagonal in `R`, which is the phase
/// choice that makes `Q` Haar distributed.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    loop {
        let cols: Vec<Vec<C64>> = (0..dim).map(|_| complex_normal_vec(dim, rng)).collect();
        let q = gram_schmidt_in_order(&cols);
        if q.len() == dim {
            let mut u = Operator::from_fn(dim, |i, j| q[j][i]);
            u.unitary = true;
            return u;
        }
    }
}

// Unpivoted Gram-Schmidt, keeping input order so the R diagonal stays positive.
fn gram_schmidt_in_order(cols: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(cols.len());
    for c in cols {
        let mut v = c.clone();
        for _ in 0..2 {
            for q in &out {
                let proj = vec_inner(q, &v);
                for (vk, qk) in v.iter_mut().zip(q) {
                    *vk -= proj * qk;
                }
            }
        }
        let n = vec_norm(&v);
        if n < 1e-10 {
            return out;
        }
        out.push(v.into_iter().map(|z| z / n).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn close(a: &[C64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - c(*y)).norm() < 1e-12)
    }

    #[test]
    fn make_state_normalizes() {
        let phi = StateVector::from_reals(&[1.0, 0.0]).unwrap();
        assert!(close(phi.amplitudes(), &[1.0, 0.0]));
        let ups = StateVector::from_reals(&[1.0, 1.0]).unwrap();
        assert!(close(ups.amplitudes(), &[FRAC_1_SQRT_2, FRAC_1_SQRT_2]));
    }

    #[test]
    fn make_state_rejects_zero_and_short() {
        assert_eq!(StateVector::from_reals(&[0.0, 0.0]), Err(HilbertError::ZeroVector));
        assert_eq!(StateVector::from_reals(&[1.0]), Err(HilbertError::DimensionTooSmall(1)));
        assert_eq!(StateVector::from_reals(&[1e-12, 0.0]), Err(HilbertError::ZeroVector));
    }

    #[test]
    fn make_state_keeps_global_phase() {
        let s = StateVector::new(vec![C64::new(0.0, 2.0), c(0.0)]).unwrap();
        assert!((s.amplitudes()[0] - C64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn inner_examples() {
        let z0 = StateVector::from_reals(&[1.0, 0.0]).unwrap();
        let z1 = StateVector::from_reals(&[0.0, 1.0]).unwrap();
        let ups = StateVector::from_reals(&[1.0, 1.0]).unwrap();
        assert!(inner(&z0, &z1).unwrap().norm() < 1e-15);
        assert!((inner(&z0, &z0).unwrap() - c(1.0)).norm() < 1e-15);
        assert!((inner(&z0, &ups).unwrap() - c(std::f64::consts::FRAC_1_SQRT_2)).norm() < 1e-12);
    }

    #[test]
    fn inner_is_conjugate_linear_in_first_argument() {
        let a = StateVector::new(vec![C64::new(0.0, 1.0), c(0.0)]).unwrap();
        let b = StateVector::from_reals(&[1.0, 0.0]).unwrap();
        assert!((inner(&a, &b).unwrap() - C64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn inner_dimension_mismatch() {
        let a = StateVector::from_reals(&[1.0, 0.0]).unwrap();
        let b = StateVector::from_reals(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(inner(&a, &b), Err(HilbertError::DimensionMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn tensor_examples() {
        let z0 = StateVector::from_reals(&[1.0, 0.0]).unwrap();
        let z1 = StateVector::from_reals(&[0.0, 1.0]).unwrap();
        let ups = StateVector::from_reals(&[1.0, 1.0]).unwrap();
        assert!(close(tensor(&z0, &z1).amplitudes(), &[0.0, 1.0, 0.0, 0.0]));
        assert!(close(
            tensor(&ups, &z0).amplitudes(),
            &[FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0]
        ));
        assert!(close(tensor(&z0, &z0).amplitudes(), &[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn apply_operator_examples() {
        let z0 = StateVector::from_reals(&[1.0, 0.0]).unwrap();
        let id = Operator::identity(2);
        assert_eq!(apply_operator(&id, &z0, 1e-9).unwrap(), z0);

        let x = Operator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap().flag_unitary(1e-9).unwrap();
        assert!(close(apply_operator(&x, &z0, 1e-9).unwrap().amplitudes(), &[0.0, 1.0]));

        let s = FRAC_1_SQRT_2;
        let h = Operator::from_real_rows(&[&[s, s], &[s, -s]]).unwrap().flag_unitary(1e-9).unwrap();
        assert!(close(apply_operator(&h, &z0, 1e-9).unwrap().amplitudes(), &[s, s]));
    }

    #[test]
    fn apply_operator_errors() {
        let z0 = StateVector::from_reals(&[1.0, 0.0]).unwrap();
        let three = Operator::identity(3);
        assert!(matches!(
            apply_operator(&three, &z0, 1e-9),
            Err(HilbertError::DimensionMismatch { .. })
        ));
        // non-unitary, unflagged: output renormalized
        let d = Operator::from_real_rows(&[&[2.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert!(close(apply_operator(&d, &z0, 1e-9).unwrap().amplitudes(), &[1.0, 0.0]));
        // annihilated
        let p = Operator::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert_eq!(apply_operator(&p, &z0, 1e-9), Err(HilbertError::ZeroVector));
        // flagged under a loose tolerance, applied under a tight one
        let eps = 1e-7;
        let m = Operator::from_real_rows(&[&[1.0 + eps, 0.0], &[0.0, 1.0]])
            .unwrap()
            .flag_unitary(1e-6)
            .unwrap();
        assert!(matches!(apply_operator(&m, &z0, 1e-9), Err(HilbertError::NormLost { .. })));
    }

    #[test]
    fn unitarity_examples() {
        let s = FRAC_1_SQRT_2;
        assert!(is_unitary(&Operator::identity(3), 1e-9));
        assert!(is_unitary(&Operator::from_real_rows(&[&[s, s], &[s, -s]]).unwrap(), 1e-9));
        assert!(!is_unitary(&Operator::from_real_rows(&[&[1.0, 0.0], &[0.0, 2.0]]).unwrap(), 1e-9));
    }

    #[test]
    fn from_rows_rejects_ragged() {
        let err = Operator::from_rows(vec![vec![c(1.0), c(0.0)], vec![c(0.0)]]).unwrap_err();
        assert_eq!(err, HilbertError::NotSquare { row: 1, len: 1, dim: 2 });
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in 2..=6 {
            let u = random_unitary(dim, &mut rng);
            assert!(is_unitary(&u, 1e-12));
        }
    }

    #[test]
    fn orthonormalize_drops_dependent_vectors() {
        let v = vec![vec![c(1.0), c(1.0), c(0.0)], vec![c(2.0), c(2.0), c(0.0)], vec![c(0.0), c(0.0), c(3.0)]];
        let b = orthonormalize(&v, 3, 1e-10);
        assert_eq!(b.len(), 2);
        for x in &b {
            assert!((vec_norm(x) - 1.0).abs() < 1e-12);
        }
        assert!(vec_inner(&b[0], &b[1]).norm() < 1e-12);
        assert!(orthonormalize(&[vec![c(0.0), c(0.0)]], 2, 1e-10).is_empty());
    }
}
