mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;

use common::{random_h, rel, rng};
use wellpoised::hyperseries::HParams;
use wellpoised::identity::*;
use wellpoised::multint::{eval_j_adaptive, ABParams};
use wellpoised::numctx::{make_context, PrecisionContext};

fn ctx() -> PrecisionContext {
    make_context(128, 1e-25).unwrap()
}

fn j(ab: &ABParams) -> f64 {
    let r = eval_j_adaptive(ab, 1e-11, 32, 256, &ctx()).unwrap();
    r.value.to_f64()
}

#[test]
fn group_orders() {
    for (k, plain, with_c) in [(2usize, 24usize, 120usize), (3, 120, 1920)] {
        let mut gens = permutation_generators(k);
        assert_eq!(group_closure(&gens).unwrap().order, plain);
        gens.push(c_transform(k).unwrap());
        let g = group_closure(&gens).unwrap();
        assert_eq!(g.order, with_c);
        assert!(g.elements.iter().all(is_unimodular));
    }
}

#[test]
fn group_acts_on_e_multiset() {
    let mut r = rng(5);
    let samples: Vec<HParams> = (0..3).map(|_| random_h(&mut r, 2, 0.3, true)).collect();
    let mut gens = permutation_generators(2);
    gens.push(c_transform(2).unwrap());
    for g in &group_closure(&gens).unwrap().elements {
        assert!(permutes_e_multiset(g, &samples));
    }
    // For k = 3 only the permutation subgroup acts on this 15-element family;
    // the involution moves e_12 outside it.
    let samples: Vec<HParams> = (0..3).map(|_| random_h(&mut r, 3, 0.3, true)).collect();
    for g in &group_closure(&permutation_generators(3)).unwrap().elements {
        assert!(permutes_e_multiset(g, &samples));
    }
    assert!(!permutes_e_multiset(&c_transform(3).unwrap(), &samples));
}

#[test]
fn involution_preserves_integral() {
    let mut r = rng(11);
    for k in [2usize, 3] {
        let c = c_transform(k).unwrap();
        for _ in 0..10 {
            let h = random_h(&mut r, k, 0.3, false);
            let ab = h_to_ab(&h).unwrap();
            let Ok(img) = c.apply_ab(&ab) else { panic!("image not admissible for {h:?}") };
            let (a, b) = (j(&ab), j(&img));
            assert!(rel(a, b) < 1e-8, "k={k} {h:?}: {a} vs {b}");
        }
    }
    let unit = ABParams::new(1.0, vec![1.0, 1.0], vec![2.0, 2.0]).unwrap();
    assert_eq!(c_transform(2).unwrap().apply_ab(&unit).unwrap(), unit);
}

#[test]
fn theorem_unit_examples() {
    let c = ctx();
    let s = VerifySettings::default();
    let z2 = std::f64::consts::PI.powi(2) / 6.0;
    let r = verify_theorem(&HParams::new(2.0, vec![1.0; 4]).unwrap(), &c, &s).unwrap();
    assert!(r.pass && rel(r.lhs, z2) < 1e-14, "{r:?}");
    let r = verify_theorem(&HParams::new(2.0, vec![1.0; 5]).unwrap(), &c, &s).unwrap();
    assert!(r.pass && rel(r.lhs, 2.0 * 1.202_056_903_159_594_3) < 1e-14, "{r:?}");
}

#[test]
fn theorem_rejects_condition_failures() {
    let h = HParams::new(1.0, vec![1.0, 1.0, 1.0]).unwrap();
    assert!(matches!(verify_theorem(&h, &ctx(), &VerifySettings::default()), Err(IdentityError::Conditions(_))));
}

#[test]
fn normalized_invariant_is_symmetric() {
    let c = ctx();
    let base = normalized_invariant(&HParams::new(5.0, vec![2.0, 1.0, 1.0]).unwrap(), &c).unwrap();
    let swapped = normalized_invariant(&HParams::new(5.0, vec![1.0, 2.0, 1.0]).unwrap(), &c).unwrap();
    assert!((&base - &swapped).abs().to_f64() <= 8.0 * c.rel_tol() * base.to_f64().abs());
    let z3 = normalized_invariant(&HParams::new(2.0, vec![1.0; 5]).unwrap(), &c).unwrap().to_f64();
    assert!(rel(z3, 2.0 * 1.202_056_903_159_594_3) < 1e-15);
    let mut r = rng(3);
    for k in [1usize, 2, 3] {
        let h = random_h(&mut r, k, 0.3, true);
        let v0 = normalized_invariant(&h, &c).unwrap().to_f64();
        let mut lower = h.lower().to_vec();
        for _ in 0..5 {
            lower.shuffle(&mut r);
            let v = normalized_invariant(&HParams::new(h.h0(), lower.clone()).unwrap(), &c).unwrap().to_f64();
            assert!(rel(v, v0) < 1e-8);
        }
    }
}

#[test]
fn normalized_integral_is_permutation_invariant() {
    let mut r = rng(21);
    for k in [2usize, 3] {
        let h = random_h(&mut r, k, 0.3, true);
        let base = {
            let ab = h_to_ab(&h).unwrap();
            normalized_j(&ab, j(&ab))
        };
        let mut sigma: Vec<usize> = (1..=k + 2).collect();
        for _ in 0..20 {
            sigma.shuffle(&mut r);
            let hs = induced_ab_action(k, &sigma).unwrap().apply_h(&h).unwrap();
            let ab = h_to_ab(&hs).unwrap();
            let v = normalized_j(&ab, j(&ab));
            assert!(rel(v, base) < 1e-8, "k={k} sigma={sigma:?}: {v} vs {base}");
        }
    }
}

#[test]
fn transposition_swaps_first_integral_parameters() {
    let h = HParams::new(5.0, vec![1.5, 2.0, 1.0]).unwrap();
    let g = induced_ab_action(1, &[2, 1, 3]).unwrap();
    let (ab, img) = (h_to_ab(&h).unwrap(), h_to_ab(&g.apply_h(&h).unwrap()).unwrap());
    assert_eq!((img.a0(), img.a()[0]), (ab.a()[0], ab.a0()));
    assert_eq!(induced_ab_action(2, &[1, 2, 3, 4]).unwrap(), AffineMap::identity(5));
}

proptest! {
    #[test]
    fn correspondence_round_trips(seed in 0u64..10_000, k in 1usize..5) {
        let mut r = rng(seed);
        let h = random_h(&mut r, k, 0.05, false);
        let ab = h_to_ab(&h).unwrap();
        if k >= 2 {
            let back = ab_to_h(&ab).unwrap();
            for (x, y) in back.to_vec().iter().zip(h.to_vec()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
        let again = h_to_ab(&ab_to_h(&ab).unwrap()).unwrap();
        for (x, y) in again.a().iter().chain(again.b()).zip(ab.a().iter().chain(ab.b())) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn permutations_permute_e_parameters(seed in 0u64..10_000) {
        let mut r = rng(seed);
        let h = random_h(&mut r, 3, 0.1, true);
        let mut sigma: Vec<usize> = (1..=5).collect();
        sigma.shuffle(&mut r);
        let g = induced_ab_action(3, &sigma).unwrap();
        prop_assert!(permutes_e_multiset(&g, &[h]));
        prop_assert!(is_unimodular(&g));
    }
}
