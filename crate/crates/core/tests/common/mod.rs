#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;
use svq::hilbert::{complex_normal_vec, haar_state, vec_inner, StateVector, C64};
use svq::lattice::Subspace;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

pub fn corpus() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("scenario corpus")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "svq"))
        .collect();
    files.sort();
    files
}

/// Span of `rank` Gaussian vectors; rank 0 gives the zero subspace.
pub fn random_subspace<R: Rng>(dim: usize, rank: usize, rng: &mut R) -> Subspace {
    if rank == 0 {
        return Subspace::zero(dim);
    }
    let vs: Vec<Vec<C64>> = (0..rank).map(|_| complex_normal_vec(dim, rng)).collect();
    Subspace::span(&vs, dim).unwrap()
}

/// A random subspace of `outer` with the given rank (at most `outer.rank()`).
pub fn random_subspace_of<R: Rng>(outer: &Subspace, rank: usize, rng: &mut R) -> Subspace {
    if rank == 0 {
        return Subspace::zero(outer.dim());
    }
    let vs: Vec<Vec<C64>> = (0..rank)
        .map(|_| outer.project(&complex_normal_vec(outer.dim(), rng)).unwrap())
        .collect();
    Subspace::span(&vs, outer.dim()).unwrap()
}

/// A random state inside `s` (which must be nonzero).
pub fn random_state_in<R: Rng>(s: &Subspace, rng: &mut R) -> StateVector {
    StateVector::new(s.project(&complex_normal_vec(s.dim(), rng)).unwrap()).unwrap()
}

/// A Haar state and a second Haar state orthogonalized against it.
pub fn random_orthogonal_pair<R: Rng>(dim: usize, rng: &mut R) -> (StateVector, StateVector) {
    let a = haar_state(dim, rng);
    let v = complex_normal_vec(dim, rng);
    let c = vec_inner(a.amplitudes(), &v);
    let w: Vec<C64> = v.iter().zip(a.amplitudes()).map(|(x, y)| x - c * y).collect();
    (a, StateVector::new(w).unwrap())
}
