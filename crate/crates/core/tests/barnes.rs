mod common;

use rand::Rng;

use common::{rel, rng};
use wellpoised::barnes::*;
use wellpoised::multint::ABParams;
use wellpoised::numctx::{make_context, PrecisionContext};

fn ctx() -> PrecisionContext {
    make_context(128, 1e-20).unwrap()
}

#[test]
fn spec_examples() {
    let c = ctx();
    let ln2 = 2f64.ln();
    let v = barnes_side(1.0, 1.0, 2.5, 0.5, &ContourConfig::new(0.5), &c).unwrap();
    assert!(rel(v.value, euler_side(1.0, 1.0, 2.5, 0.5, &c).unwrap().to_f64()) < 1e-8);
    // b = a0 + a sits on the boundary of the contour representation
    assert!(barnes_side(1.0, 1.0, 2.0, 0.5, &ContourConfig::new(0.5), &c).is_err());
    assert!(rel(euler_side(1.0, 1.0, 2.0, 0.5, &c).unwrap().to_f64(), 2.0 * ln2) < 1e-14);
    assert!(rel(gauss_2f1_side(1.0, 1.0, 2.0, -1.0, &c).unwrap().to_f64(), ln2) < 1e-14);
    let e = euler_side(0.5, 0.7, 2.1, 0.3, &c).unwrap().to_f64();
    let b = barnes_side(0.5, 0.7, 2.1, 0.3, &ContourConfig::new(0.3), &c).unwrap();
    assert!((b.value - e).abs() < 1e-8);
}

#[test]
fn three_way_equality() {
    let c = ctx();
    let mut r = rng(33);
    for i in 0..25 {
        let a0: f64 = r.gen_range(0.3..2.0);
        let a = r.gen_range(0.3..2.0);
        let b = a0 + a + 0.5 + r.gen_range(0.0..2.0);
        let z = if i % 5 == 4 { 1.0 } else { r.gen_range(-1.0..0.9) };
        let cc = ContourConfig::new(0.5 * a0.min(a));
        let e = euler_side(a0, a, b, z, &c).unwrap().to_f64();
        let g = gauss_2f1_side(a0, a, b, z, &c).unwrap().to_f64();
        let br = barnes_side(a0, a, b, z, &cc, &c).unwrap();
        assert!(rel(g, e) < 1e-8, "({a0},{a},{b},{z}): gauss {g} euler {e}");
        assert!(rel(br.value, e) < 1e-8, "({a0},{a},{b},{z}): barnes {br:?} euler {e}");
        if let Some(other) = br.other_branch {
            assert!((other - br.value).abs() < 1e-10 * br.value.abs().max(1.0));
        }
    }
}

#[test]
fn doubling_height_changes_less_than_tail_bound() {
    let c = ctx();
    for &(a0, a, b, z) in &[(0.8, 1.1, 2.9, -0.6), (0.6, 0.9, 2.4, 0.4)] {
        let mut cc = ContourConfig::new(0.3);
        cc.t_max = Some(8.0);
        let short = barnes_side(a0, a, b, z, &cc, &c);
        cc.t_max = Some(16.0);
        let long = barnes_side(a0, a, b, z, &cc, &c).unwrap();
        if let Ok(short) = short {
            assert!((short.value - long.value).abs() <= short.tail_bound.max(1e-13), "{short:?} {long:?}");
        }
    }
}

#[test]
fn short_contour_reports_truncation() {
    let c = ctx();
    let mut cc = ContourConfig::new(0.3);
    cc.t_max = Some(1.0);
    assert!(matches!(barnes_side(0.8, 1.1, 2.9, -0.6, &cc, &c), Err(BarnesError::Truncation { .. })));
}

#[test]
fn dimension_reduction_unit_cases() {
    let c = ctx();
    let z2 = std::f64::consts::PI.powi(2) / 6.0;
    let z3 = 1.202_056_903_159_594_3;
    let s = Lemma3Settings::default();
    let ab2 = ABParams::new(1.0, vec![1.0; 2], vec![2.0; 2]).unwrap();
    let r = lemma3_check(&ab2, EpsilonSign::new(2, 0).unwrap(), &ContourConfig::new(0.5), &s, &c).unwrap();
    assert!((r.lhs - z2).abs() < 1e-6 && (r.rhs - z2).abs() < 1e-6, "{r:?}");
    let ab3 = ABParams::new(1.0, vec![1.0; 3], vec![2.0; 3]).unwrap();
    let plus = lemma3_check(&ab3, EpsilonSign::new(3, 1).unwrap(), &ContourConfig::new(0.5), &s, &c).unwrap();
    let minus = lemma3_check(&ab3, EpsilonSign::new(3, -1).unwrap(), &ContourConfig::new(0.5), &s, &c).unwrap();
    assert!((plus.rhs - 2.0 * z3).abs() < 1e-6, "{plus:?}");
    assert!((minus.rhs - plus.rhs).abs() < 1e-6);
}

#[test]
fn dimension_reduction_generic_parameters() {
    let c = ctx();
    let ab = ABParams::new(0.9, vec![1.2, 0.8], vec![2.6, 2.3]).unwrap();
    let r = lemma3_check(&ab, EpsilonSign::new(2, 0).unwrap(), &ContourConfig::new(0.4), &Lemma3Settings::default(), &c)
        .unwrap();
    assert!(rel(r.rhs, r.lhs) < 1e-6, "{r:?}");
    assert!(!r.boundary);
}
