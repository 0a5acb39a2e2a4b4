use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use wellpoised::hyperseries::{eval_F, HParams};
use wellpoised::numctx::{digamma, make_context, HPReal, PrecisionContext};
use wellpoised::zetaforms::*;

fn ctx() -> PrecisionContext {
    make_context(128, 1e-30).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn forms_match_series_values() {
    let c = ctx();
    for k in 2..=5 {
        for n in 0..=2 {
            for r in 1..=2 {
                let form = linear_form_for(k, n, r).unwrap();
                let lf = form.value(&c).unwrap();
                let h = specialization(k, n, r).unwrap();
                let f = eval_F(&h, &c).unwrap().value;
                let err = (&lf - &f).abs().to_f64() / f.abs().to_f64();
                assert!(err < 1e-10, "k={k} n={n} r={r}: {form} -> {lf} vs {f}");
            }
        }
    }
}

#[test]
fn parity_of_zeta_values() {
    for k in 2..=6 {
        for n in 0..=2 {
            for r in 1..=2 {
                let form = linear_form_for(k, n, r).unwrap();
                for &s in form.qzeta.keys() {
                    assert_eq!(s as usize % 2, k % 2, "k={k} n={n} r={r}: {form}");
                    assert!(s as usize <= k);
                }
            }
        }
    }
}

#[test]
fn partial_sums_approach_form_value() {
    let c = ctx();
    let p = c.working_bits();
    for (k, n) in [(3usize, 1u64), (2, 1), (5, 1)] {
        let h = specialization(k, n, 1).unwrap();
        let (rf, alt) = build_rational_term(&h).unwrap();
        let target = linear_form_for(k, n, 1).unwrap().value(&c).unwrap();
        let mut sum = HPReal::from_i64(0, p);
        let mut errs = Vec::new();
        let mut mu = 0u64;
        for m in [100u64, 1_000, 10_000] {
            while mu <= m {
                sum = &sum + &HPReal::from_rational(&term_at(&rf, alt, mu), p);
                mu += 1;
            }
            errs.push((&sum - &target).abs().to_f64());
        }
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "k={k}: {errs:?}");
    }
}

#[test]
fn inclusion_for_odd_k() {
    for k in [3usize, 5] {
        for n in 0..=3 {
            let r = inclusion_report(k, n).unwrap();
            assert!(r.included, "k={k} n={n}: {:?}", r);
        }
    }
}

#[test]
fn phi_growth_approaches_limit() {
    let c = ctx();
    // psi(1) - psi(2/3) - 1/2
    let third = &c.int(2) / &c.int(3);
    let limit = (&(&digamma(&c.one(), &c).unwrap() - &digamma(&third, &c).unwrap()) - 0.5).to_f64();
    assert!((limit - 0.241_018_75).abs() < 1e-8);
    let mut prev = f64::INFINITY;
    for (n, window) in [(1_000u64, 0.05), (10_000, 0.02), (100_000, 0.01)] {
        let g = phi_growth(n);
        let d = (g - limit).abs();
        assert!(d < window, "n={n}: {g}");
        assert!(d <= prev + 1e-3, "n={n}: not approaching");
        prev = d;
    }
}

#[test]
fn phi_is_squarefree_with_small_primes() {
    for n in [5u64, 17, 100, 997] {
        let norm = normalizers(n);
        for p in primes_below(n) {
            let pb = num_bigint::BigUint::from(p);
            let q = &norm.phi_n / &pb;
            if &q * &pb == norm.phi_n {
                assert!(!(&q % &pb).is_zero() || q == num_bigint::BigUint::zero());
            }
        }
        for m in 1..=n {
            assert!((&norm.d_n % m).is_zero());
        }
    }
}

fn random_rf(num: Vec<i64>, roots: Vec<i64>) -> RationalFunction {
    let num = Poly::new(num.into_iter().map(|c| BigRational::from_integer(BigInt::from(c))).collect());
    let den = roots
        .into_iter()
        .fold(Poly::constant(BigRational::from_integer(1.into())), |p, j| {
            p.mul(&Poly::linear(BigRational::from_integer(BigInt::from(j))))
        });
    RationalFunction::new(num, den).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn partial_fraction_round_trip(
        num in proptest::collection::vec(-20i64..20, 1..6),
        roots in proptest::collection::vec(-6i64..8, 1..7),
    ) {
        prop_assume!(num.iter().any(|&c| c != 0));
        let rf = random_rf(num, roots);
        let pf = partial_fractions(&rf).unwrap();
        prop_assert_eq!(pf.reconstruct().unwrap(), rf);
    }

    #[test]
    fn linear_factor_series_terms_are_exact(h0 in 2i64..9, lower in proptest::collection::vec(1i64..9, 2..5)) {
        let lower: Vec<f64> = lower.into_iter().map(|v| v.min(h0) as f64).collect();
        let h = HParams::new(h0 as f64, lower).unwrap();
        let (rf, alt) = build_rational_term(&h).unwrap();
        let c = make_context(128, 1e-30).unwrap();
        for mu in 0..4u64 {
            let exact = HPReal::from_rational(&term_at(&rf, alt, mu), c.working_bits());
            let direct = wellpoised::hyperseries::series_term(&h, mu, &c).unwrap();
            prop_assert!(rel(exact.to_f64(), direct.to_f64()) < 1e-14);
        }
    }
}
