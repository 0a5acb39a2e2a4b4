mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use common::rng;
use wellpoised::hyperseries::*;
use wellpoised::numctx::{make_context, PrecisionContext};

fn ctx() -> PrecisionContext {
    make_context(128, 1e-30).unwrap()
}

#[test]
fn dougall_consistency() {
    let c = ctx();
    let mut r = rng(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let h: Vec<f64> = (0..3).map(|_| r.gen_range(0.2..3.0)).collect();
        let h0 = h.iter().sum::<f64>() - 0.5 + r.gen_range(0.0..3.0);
        let f = eval_F(&HParams::new(h0, h.clone()).unwrap(), &c).unwrap();
        let d = dougall_F3(h0, h[0], h[1], h[2], &c).unwrap();
        let err = (&f.value - &d).abs().to_f64() / d.abs().to_f64();
        worst = worst.max(err);
    }
    assert!(worst < 1e-12, "worst relative error {worst:e}");
}

#[test]
fn permutation_symmetry() {
    let c = make_context(128, 1e-25).unwrap();
    let mut r = rng(7);
    for k in [3usize, 4, 5] {
        let h: Vec<f64> = (0..k).map(|_| r.gen_range(0.3..2.0)).collect();
        let h0 = 2.0 * h.iter().sum::<f64>() / (k as f64 - 1.0) + 0.5;
        let base = eval_F(&HParams::new(h0, h.clone()).unwrap(), &c).unwrap().value;
        let mut p = h.clone();
        for _ in 0..4 {
            p.shuffle(&mut r);
            let v = eval_F(&HParams::new(h0, p.clone()).unwrap(), &c).unwrap().value;
            assert!((&v - &base).abs().to_f64() <= 8.0 * c.rel_tol() * base.abs().to_f64());
        }
    }
}

#[test]
fn doubling_term_cap_is_harmless() {
    let small = make_context(128, 1e-20).unwrap();
    let big = PrecisionContextExt::doubled(&small);
    let h = HParams::new(4.3, vec![1.1, 0.7, 1.6, 0.9]).unwrap();
    let a = eval_F(&h, &small).unwrap();
    assert!(a.converged && !a.slow_convergence);
    let b = eval_F(&h, &big).unwrap();
    assert!((&a.value - &b.value).abs().to_f64() < small.rel_tol() * a.value.abs().to_f64());
}

trait PrecisionContextExt {
    fn doubled(&self) -> PrecisionContext;
}

impl PrecisionContextExt for PrecisionContext {
    fn doubled(&self) -> PrecisionContext {
        PrecisionContext::with_max_terms(self.precision_bits(), self.rel_tol(), 2 * self.max_terms()).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn ratio_matches_consecutive_terms(
        h in proptest::collection::vec(0.2f64..3.0, 2..6),
        extra in 0.1f64..3.0,
        mu in 0u64..20,
    ) {
        let c = ctx();
        let h0 = h.iter().cloned().fold(0.0, f64::max) + extra;
        let hp = HParams::new(h0, h).unwrap();
        let t0 = series_term(&hp, mu, &c).unwrap();
        prop_assume!(!t0.is_zero());
        let t1 = series_term(&hp, mu + 1, &c).unwrap();
        let ratio = term_ratio(&hp, mu, &c);
        let direct = &t1 / &t0;
        prop_assert!((&direct - &ratio).abs().to_f64() <= 8.0 * c.rel_tol() * ratio.abs().to_f64().max(1e-300));
    }

    #[test]
    fn sum_condition_implies_convergence(h in proptest::collection::vec(0.2f64..3.0, 3..7), h0 in 0.5f64..8.0) {
        let hp = HParams::new(h0, h).unwrap();
        let rep = check_conditions(&hp);
        if rep.margin5 > 1e-9 {
            prop_assert!(hp.convergence_margin() > 0.0);
        }
        if !hp.alternating() && rep.margin5.abs() > 1e-9 {
            prop_assert_eq!(rep.margin5 > 0.0, hp.convergence_margin() > 0.0);
        }
    }
}
