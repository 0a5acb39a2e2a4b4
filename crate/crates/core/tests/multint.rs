mod common;

use proptest::prelude::*;
use rand::Rng;

use common::{rel, rng};
use wellpoised::multint::*;
use wellpoised::numctx::{ln_gamma_f64, make_context, PrecisionContext};

fn ctx() -> PrecisionContext {
    make_context(128, 1e-20).unwrap()
}

#[test]
fn q_strictly_inside_unit_interval() {
    let mut r = rng(1);
    for k in 1..=6 {
        let mut bad = 0;
        for _ in 0..100_000 {
            let x: Vec<f64> = (0..k).map(|_| r.gen_range(f64::MIN_POSITIVE..1.0)).collect();
            let q = eval_q(&x, QVariant::Nested);
            if !(q > 0.0 && q < 1.0) {
                bad += 1;
            }
        }
        assert_eq!(bad, 0, "k={k}");
    }
}

#[test]
fn q_recursions_agree_to_four_ulps() {
    let mut r = rng(2);
    for k in 1..=6 {
        for _ in 0..20_000 {
            let x: Vec<f64> = (0..k).map(|_| r.gen_range(0.0..1.0)).collect();
            let a = eval_q(&x, QVariant::Nested);
            for v in [QVariant::RecursiveFront, QVariant::RecursiveBack] {
                let b = eval_q(&x, v);
                assert!((a - b).abs() <= 4.0 * f64::EPSILON * a.abs().max(1.0), "k={k} {x:?}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn quadrature_error_estimate_is_honest() {
    let c = ctx();
    let ab = ABParams::new(0.8, vec![0.9, 1.2], vec![2.5, 2.9]).unwrap();
    let coarse = eval_j_quad(&ab, 24, &c).unwrap();
    let fine = eval_j_quad(&ab, 48, &c).unwrap();
    let diff = rel(coarse.value.to_f64(), fine.value.to_f64());
    assert!(diff <= coarse.rel_err.max(1e-15), "{diff} vs {}", coarse.rel_err);
}

#[test]
fn monte_carlo_agrees_with_quadrature() {
    let c = ctx();
    let mut r = rng(9);
    let mc = McConfig::new(400_000, 17, 8).unwrap();
    for k in 1..=3 {
        for _ in 0..3 {
            let a0 = r.gen_range(0.2..0.9);
            let a: Vec<f64> = (0..k).map(|_| r.gen_range(0.5..2.0)).collect();
            let b: Vec<f64> = a.iter().map(|&x| x + a0 + r.gen_range(0.6..2.0)).collect();
            let ab = ABParams::new(a0, a, b).unwrap();
            let q = eval_j_adaptive(&ab, 1e-10, 32, 128, &c).unwrap().value.to_f64();
            let m = eval_j_mc(&ab, &mc).unwrap();
            assert!((m.estimate - q).abs() <= 5.0 * m.stderr + 1e-12 * q.abs(), "k={k}: {m:?} vs {q}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn k1_closed_form(a0 in 0.1f64..2.0, a1 in 0.2f64..3.0, gap in 0.2f64..3.0) {
        let b1 = a1 + a0 + gap;
        let ab = ABParams::new(a0, vec![a1], vec![b1]).unwrap();
        let q = eval_j_adaptive(&ab, 1e-13, 32, 512, &ctx()).unwrap().value.to_f64();
        let want = (ln_gamma_f64(a1) + ln_gamma_f64(b1 - a1 - a0) - ln_gamma_f64(b1 - a0)).exp();
        prop_assert!(rel(q, want) < 1e-10, "{} vs {}", q, want);
    }

    #[test]
    fn margin_sign_matches_k1_convergence(a0 in -1.0f64..3.0, a1 in 0.2f64..3.0, b1 in 0.5f64..6.0) {
        prop_assume!(b1 > a1);
        prop_assume!((b1 - a1 - a0).abs() > 0.05);
        let ab = ABParams::new(a0, vec![a1], vec![b1]).unwrap();
        prop_assert_eq!(singularity_margin(&ab) > 0.0, b1 - a1 - a0 > 0.0);
    }
}
