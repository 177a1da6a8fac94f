mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use svq::dynamics::{check_cloner_feasibility, ideal_clone, ideal_unclone, ProductState};
use svq::hilbert::{apply_operator, haar_state, inner, random_unitary, tensor, Operator, StateVector, C64};
use svq::lattice::{evaluate_super, join, meet, membership, Formula, Subspace, TruthValue};
use svq::ledger::{check_past_unalterability, tense_view, Ledger, Timestamp};

const TOL: f64 = 1e-9;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn unitaries_preserve_inner_products(seed: u64, dim in 2usize..6) {
        let mut r = rng(seed);
        let u = random_unitary(dim, &mut r);
        let (a, b) = (haar_state(dim, &mut r), haar_state(dim, &mut r));
        let before = inner(&a, &b).unwrap();
        let after = inner(&apply_operator(&u, &a, TOL).unwrap(), &apply_operator(&u, &b, TOL).unwrap()).unwrap();
        prop_assert!((before - after).norm() < 1e-9);
    }

    #[test]
    fn tensor_of_states_is_a_state(seed: u64, d1 in 2usize..5, d2 in 2usize..5) {
        let mut r = rng(seed);
        let t = tensor(&haar_state(d1, &mut r), &haar_state(d2, &mut r));
        prop_assert_eq!(t.dim(), d1 * d2);
        prop_assert!((t.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn make_state_is_idempotent(re in prop::collection::vec(-10.0f64..10.0, 2..6), im_seed: u64) {
        let mut r = rng(im_seed);
        let comps: Vec<C64> = re.iter().map(|&x| C64::new(x, r.gen_range(-10.0..10.0))).collect();
        if let Ok(s) = StateVector::new(comps) {
            let again = StateVector::new(s.amplitudes().to_vec()).unwrap();
            for (x, y) in s.amplitudes().iter().zip(again.amplitudes()) {
                prop_assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_is_exact(seed: u64, dim in 2usize..6) {
        let v = haar_state(dim, &mut rng(seed));
        prop_assert_eq!(apply_operator(&Operator::identity(dim), &v, TOL).unwrap(), v);
    }

    #[test]
    fn membership_ignores_scale_and_phase(seed: u64, dim in 2usize..5, scale in 0.01f64..100.0, theta in 0.0f64..6.3) {
        let mut r = rng(seed);
        let s = common::random_subspace(dim, r.gen_range(1..dim), &mut r);
        let psi = match seed % 3 {
            0 => common::random_state_in(&s, &mut r),
            1 => common::random_state_in(&s.orthocomplement(), &mut r),
            _ => haar_state(dim, &mut r),
        };
        let factor = C64::from_polar(scale, theta);
        let scaled = StateVector::new(psi.amplitudes().iter().map(|z| z * factor).collect()).unwrap();
        prop_assert_eq!(membership(&scaled, &s, TOL).unwrap(), membership(&psi, &s, TOL).unwrap());
    }

    #[test]
    fn complement_swaps_true_and_false(seed: u64, dim in 2usize..5) {
        let mut r = rng(seed);
        let s = common::random_subspace(dim, r.gen_range(1..dim), &mut r);
        let psi = match seed % 3 {
            0 => common::random_state_in(&s, &mut r),
            1 => common::random_state_in(&s.orthocomplement(), &mut r),
            _ => haar_state(dim, &mut r),
        };
        let here = membership(&psi, &s, TOL).unwrap();
        let there = membership(&psi, &s.orthocomplement(), TOL).unwrap();
        let expected = match here {
            TruthValue::True => TruthValue::False,
            TruthValue::False => TruthValue::True,
            TruthValue::Gap => TruthValue::Gap,
        };
        prop_assert_eq!(there, expected);
    }

    #[test]
    fn span_is_representation_independent(seed: u64, dim in 2usize..5) {
        let mut r = rng(seed);
        let s = common::random_subspace(dim, r.gen_range(1..=dim), &mut r);
        let other = common::random_subspace_of(&s, s.rank(), &mut r);
        prop_assert!(other.approx_eq(&s, 1e-9));
    }

    #[test]
    fn meet_and_join_bound_their_arguments(seed: u64, dim in 2usize..5) {
        let mut r = rng(seed);
        let a = common::random_subspace(dim, r.gen_range(0..=dim), &mut r);
        let b = common::random_subspace(dim, r.gen_range(0..=dim), &mut r);
        let m = meet(&a, &b).unwrap();
        let j = join(&a, &b).unwrap();
        prop_assert!(m.is_contained_in(&a, 1e-9).unwrap() && m.is_contained_in(&b, 1e-9).unwrap());
        prop_assert!(a.is_contained_in(&j, 1e-9).unwrap() && b.is_contained_in(&j, 1e-9).unwrap());
        prop_assert!(Subspace::from_projector(m.projector().clone(), 1e-9).is_ok());
        prop_assert!(Subspace::from_projector(j.projector().clone(), 1e-9).is_ok());
    }

    #[test]
    fn supervaluation_is_classical_without_gaps(seed: u64, mask in 0u8..16) {
        let mut r = rng(seed);
        let f = random_formula(&mut r, 3);
        let atoms: BTreeMap<String, TruthValue> = ["A", "B", "C", "D"]
            .iter()
            .enumerate()
            .map(|(i, a)| (a.to_string(), TruthValue::from_bool(mask >> i & 1 == 1)))
            .collect();
        let classical = f.eval_classical(&|a: &str| atoms[a] == TruthValue::True);
        prop_assert_eq!(evaluate_super(&f, &atoms, 20).unwrap(), TruthValue::from_bool(classical));
    }

    #[test]
    fn non_orthogonal_distinct_pairs_cannot_be_cloned(seed: u64, dim in 2usize..5) {
        let mut r = rng(seed);
        let (a, b) = (haar_state(dim, &mut r), haar_state(dim, &mut r));
        prop_assert!(!check_cloner_feasibility(&a, &b, TOL).unwrap().feasible);
        let (a, b) = common::random_orthogonal_pair(dim, &mut r);
        prop_assert!(check_cloner_feasibility(&a, &b, TOL).unwrap().feasible);
    }

    #[test]
    fn clone_then_unclone_round_trips_the_state(seed: u64, dim in 2usize..5) {
        let mut r = rng(seed);
        let x = ProductState::from_factors(haar_state(dim, &mut r), haar_state(dim, &mut r));
        let blank = x.factors().unwrap().1.clone();
        let back = ideal_unclone(&ideal_clone(&x).unwrap(), &blank, TOL).unwrap();
        prop_assert!(back.same_ray(&x, 1e-9));
    }

    #[test]
    fn ledger_values_never_change(ops in prop::collection::vec((0u64..4, 0u8..3, 0u64..3), 1..30)) {
        let mut snapshots: Vec<(Ledger, String)> = Vec::new();
        let mut ledger = Ledger::new();
        let mut now = 0u64;
        for (at, truth, advance) in ops {
            now += advance;
            let truth = [TruthValue::True, TruthValue::False, TruthValue::Gap][truth as usize];
            ledger = ledger.record_valuation(Timestamp(at), "P", truth, Timestamp(now)).unwrap();
            snapshots.push((ledger.clone(), ledger.to_lines()));
            let _ = check_past_unalterability(&ledger);
            let _ = tense_view(&ledger, Timestamp(now + 1));
        }
        for (l, lines) in &snapshots {
            prop_assert_eq!(&l.to_lines(), lines);
            prop_assert_eq!(&Ledger::from_lines(lines).unwrap(), l);
        }
    }

    #[test]
    fn tense_view_only_relabels(ops in prop::collection::vec((0u64..5, 0u8..3), 1..20), now in 0u64..8) {
        let mut ledger = Ledger::new();
        for (i, (at, t)) in ops.iter().enumerate() {
            let truth = [TruthValue::True, TruthValue::False, TruthValue::Gap][*t as usize];
            ledger = ledger.record_valuation(Timestamp(*at), "P", truth, Timestamp(i as u64)).unwrap();
        }
        let view = tense_view(&ledger, Timestamp(now));
        prop_assert_eq!(view.len(), ledger.len());
        for (v, r) in view.iter().zip(ledger.records()) {
            prop_assert_eq!(v.truth, r.truth);
            prop_assert_eq!(v.at, r.at);
        }
    }
}

fn random_formula<R: Rng>(r: &mut R, depth: u32) -> Formula {
    let atoms = ["A", "B", "C", "D"];
    if depth == 0 || r.gen_bool(0.3) {
        return Formula::atom(atoms[r.gen_range(0..4)]);
    }
    let a = random_formula(r, depth - 1);
    match r.gen_range(0..4) {
        0 => Formula::not(a),
        1 => Formula::and(a, random_formula(r, depth - 1)),
        2 => Formula::or(a, random_formula(r, depth - 1)),
        _ => Formula::implies(a, random_formula(r, depth - 1)),
    }
}

#[test]
fn haar_first_amplitude_is_balanced() {
    let mut r = rng(99);
    let n = 10_000;
    let mean = (0..n).map(|_| haar_state(2, &mut r).amplitudes()[0].norm_sqr()).sum::<f64>() / n as f64;
    assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
}

#[test]
fn single_run_without_irreversible_steps_has_no_violations() {
    use svq::scenario::{parse_scenario, run_scenario, RunOptions};
    let text = "state a = [0.6, 0.8]\nstate b = [1, 0, 0]\nprop P = span([1, 0])\nprop Q = span([1, 0, 0], [0, 1, 1])\n\
                record at 0\nevolve a by [[0, 1], [1, 0]]\nrecord at 2\nrecord at 2\nrecord at 9\ncheck-past";
    let r = run_scenario(&parse_scenario(text).unwrap(), &RunOptions::default()).unwrap();
    assert!(r.violations.is_empty(), "{:?}", r.violations);
    assert!(!r.ledger.is_empty());
}
