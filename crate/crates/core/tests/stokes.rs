use std::f64::consts::PI;

use num_complex::Complex64;
use polar_core::arith::{Poly, Rat};
use polar_core::curves::Differential1;
use polar_core::reproduce::seeded_rng;
use polar_core::stokes::{
    dbar_eval, packaged_cases, stokes_check, stokes_check_signed, PolyTerm, QuadratureConfig, SmoothTestForm,
};
use rand::Rng;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn term(z: u32, zbar: u32, re: f64, im: f64) -> PolyTerm {
    PolyTerm { z, zbar, coeff: [re, im] }
}

fn p(c: &[i64]) -> Poly<Rat> {
    Poly::from_ints(c)
}

#[test]
fn dbar_trivial_cases() {
    let c = cx(0.3, -0.7);
    assert!(dbar_eval(&SmoothTestForm::bump(c, 2.0).unwrap(), c).norm() < 1e-15);
    let v = SmoothTestForm::new(c, 2.0, vec![term(0, 1, 1.0, 0.0)]).unwrap();
    assert!((dbar_eval(&v, c) - cx((-1f64).exp(), 0.0)).norm() < 1e-15);
    assert_eq!(dbar_eval(&v, c + cx(2.5, 0.0)), cx(0.0, 0.0));
}

#[test]
fn dbar_matches_central_differences() {
    let mut rng = seeded_rng(17);
    let v = SmoothTestForm::new(
        cx(0.1, 0.2),
        1.3,
        vec![term(0, 0, 1.0, -0.5), term(1, 1, 0.4, 0.0), term(2, 0, 0.0, 0.7), term(0, 2, -0.3, 0.2)],
    )
    .unwrap();
    let h = 1e-5;
    let mut n = 0;
    while n < 100 {
        let z = v.center() + Complex64::from_polar(rng.gen_range(0.0..0.9) * v.radius, rng.gen_range(0.0..2.0 * PI));
        let dx = (v.value(z + h) - v.value(z - h)) / (2.0 * h);
        let dy = (v.value(z + cx(0.0, h)) - v.value(z - cx(0.0, h))) / (2.0 * h);
        let fd = (dx + cx(0.0, 1.0) * dy) / 2.0;
        let exact = dbar_eval(&v, z);
        let scale = exact.norm().max(1e-3);
        assert!((fd - exact).norm() / scale < 1e-6, "{z}: {fd} vs {exact}");
        n += 1;
    }
}

#[test]
fn unit_bump_against_dz_over_z() {
    let omega = Differential1::line_rat(&p(&[1]), &p(&[0, 1]));
    let v = SmoothTestForm::bump(cx(0.0, 0.0), 1.0).unwrap();
    let r = stokes_check(&omega, &v, &QuadratureConfig::default()).unwrap();
    assert!(r.rhs[0].abs() < 1e-15);
    assert!((r.rhs[1] - 2.0 * PI * (-1f64).exp()).abs() < 1e-12);
    assert!(r.passes(1e-6), "{r:?}");
}

#[test]
fn support_away_from_poles() {
    let omega = Differential1::line_rat(&p(&[1]), &p(&[0, 1]));
    let v = SmoothTestForm::new(cx(3.0, 1.0), 0.8, vec![term(1, 1, 1.0, 0.0)]).unwrap();
    let r = stokes_check(&omega, &v, &QuadratureConfig::default()).unwrap();
    assert_eq!(r.rhs, [0.0, 0.0]);
    assert!(cx(r.lhs[0], r.lhs[1]).norm() < 1e-8, "{r:?}");
}

#[test]
fn two_poles_give_difference_of_values() {
    let case = &packaged_cases()[1];
    let r = stokes_check(&case.omega, &case.v, &QuadratureConfig::default()).unwrap();
    let expect = cx(0.0, 2.0 * PI) * (case.v.value(cx(0.0, 0.0)) - case.v.value(cx(1.0, 0.0)));
    assert!((cx(r.rhs[0], r.rhs[1]) - expect).norm() < 1e-12);
    assert!(r.passes(1e-6), "{r:?}");
}

#[test]
fn packaged_cases_converge_and_flipped_sign_fails() {
    let cfg = QuadratureConfig::default();
    for case in packaged_cases() {
        let r = stokes_check(&case.omega, &case.v, &cfg).unwrap();
        assert!(r.rel_error <= 1e-6, "{}: {r:?}", case.name);
        let half = QuadratureConfig { base_cell: cfg.base_cell / 2.0, ..cfg.clone() };
        let finer = stokes_check(&case.omega, &case.v, &half).unwrap();
        assert!(finer.rel_error <= r.rel_error.max(1e-12), "{}", case.name);
        let flipped = stokes_check_signed(&case.omega, &case.v, &cfg, -1.0).unwrap();
        assert!(!flipped.passes(1e-6), "{}", case.name);
    }
}

#[test]
fn random_simple_poles() {
    let mut rng = seeded_rng(9);
    let cfg = QuadratureConfig { base_cell: 0.04, ..QuadratureConfig::default() };
    for _ in 0..4 {
        let a = rng.gen_range(-3..=3);
        let omega = Differential1::line_rat(&p(&[rng.gen_range(1..=4)]), &p(&[-a, 1]));
        let center = cx(a as f64 + rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
        let poly = vec![term(0, 0, 1.0, 0.0), term(0, 1, rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))];
        let v = SmoothTestForm::new(center, 1.0 + rng.gen_range(0.0..0.5), poly).unwrap();
        let r = stokes_check(&omega, &v, &cfg).unwrap();
        assert!(r.passes(1e-6), "{r:?}");
    }
}

#[test]
fn rejects_bad_configurations() {
    let omega = Differential1::line_rat(&p(&[1]), &p(&[0, 1]));
    let v = SmoothTestForm::bump(cx(0.0, 0.0), 1.0).unwrap();
    for cfg in [
        QuadratureConfig { tol: 0.0, ..QuadratureConfig::default() },
        QuadratureConfig { depth: 0, ..QuadratureConfig::default() },
        QuadratureConfig { base_cell: -1.0, ..QuadratureConfig::default() },
    ] {
        assert!(stokes_check(&omega, &v, &cfg).is_err());
    }
    assert!(SmoothTestForm::bump(cx(0.0, 0.0), 0.0).is_err());
}
