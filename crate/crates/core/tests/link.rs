use num_complex::Complex64;
use num_traits::Zero;
use polar_core::arith::{rat, rat_to_f64, MPoly, Rat, Scalar};
use polar_core::link::{
    boundary3, polar_intersection, polar_linking, polar_linking_sum, residue_2form_along_curve, scale_chain,
    scale_cycle, transverse_points, verify_bounding, AmbientSpace, BoundingChain2, CurveForm, EmbeddedCycle1, Plane,
};
use polar_core::reproduce::{linking_scene, random_gamma, seeded_rng};
use polar_core::PolarError;
use rand::Rng;

fn poly(terms: &[((u32, u32), i64)]) -> MPoly {
    MPoly::from_terms(2, terms.iter().map(|&((i, j), c)| (vec![i, j], rat(c))))
}

fn c(v: i64) -> MPoly {
    MPoly::constant(2, rat(v))
}

fn planar(curve: MPoly, p: MPoly, q: MPoly) -> EmbeddedCycle1 {
    EmbeddedCycle1 { plane: None, form: CurveForm::from_components(&curve, &p, &q, &c(1)).unwrap() }
}

fn rational(s: &Scalar) -> Rat {
    assert_eq!(s.tau_power, 0);
    s.value.as_rat().expect("rational value")
}

#[test]
fn residue_along_plane_curves() {
    let cubic = poly(&[((0, 2), 1), ((3, 0), -1), ((1, 0), 4), ((0, 0), -4)]);
    let r = residue_2form_along_curve(&c(1), &cubic, &cubic).unwrap();
    assert!(r.same_on_curve(&CurveForm::canonical(&cubic).scale(&rat(-1))));

    let x = poly(&[((1, 0), 1)]);
    let y = poly(&[((0, 1), 1)]);
    let r = residue_2form_along_curve(&c(1), &(&x * &y), &x).unwrap();
    let dy_over_y = CurveForm::from_components(&x, &MPoly::zero(2), &c(1), &y).unwrap();
    assert!(r.same_on_curve(&dy_over_y));

    assert!(residue_2form_along_curve(&MPoly::zero(2), &cubic, &cubic).unwrap().is_zero());
    assert!(residue_2form_along_curve(&c(1), &x, &y).is_err());
}

#[test]
fn transverse_point_examples() {
    let parabola = poly(&[((0, 1), 1), ((2, 0), -1)]);
    let pts = |b: &MPoly| -> Vec<String> {
        let mut v: Vec<String> = transverse_points(&parabola, b).unwrap().iter().map(|g| g.label()).collect();
        v.sort();
        v
    };
    assert_eq!(pts(&poly(&[((0, 1), 1), ((0, 0), -1)])), vec!["(-1, 1)", "(1, 1)"]);
    assert_eq!(pts(&poly(&[((0, 1), 1), ((1, 0), -1)])), vec!["(0, 0)", "(1, 1)"]);
    let tangent = poly(&[((0, 1), 1), ((1, 0), -2), ((0, 0), 1)]);
    assert!(matches!(transverse_points(&parabola, &tangent), Err(PolarError::NonTransverse(_))));

    let groups = transverse_points(&parabola, &poly(&[((0, 1), 1), ((0, 0), -2)])).unwrap();
    assert_eq!(groups.len(), 1);
    assert_eq!(groups[0].size(), 2);
}

#[test]
fn polar_intersection_examples() {
    let amb = AmbientSpace::plane();
    let x_eq_1 = poly(&[((1, 0), 1), ((0, 0), -1)]);
    let y_eq_1 = poly(&[((0, 1), 1), ((0, 0), -1)]);
    let a = planar(x_eq_1, MPoly::zero(2), c(1));
    let b = planar(y_eq_1.clone(), c(1), MPoly::zero(2));
    assert_eq!(rational(&polar_intersection(&amb, &a, &b).unwrap().value), rat(-1));

    let parabola = planar(poly(&[((0, 1), 1), ((2, 0), -1)]), c(1), MPoly::zero(2));
    let r = polar_intersection(&amb, &parabola, &b).unwrap();
    assert!(r.value.is_zero());
    let mut parts: Vec<String> = r.terms.iter().map(|t| t.contribution.clone()).collect();
    parts.sort();
    assert_eq!(parts, vec!["-1/2", "1/2"]);

    let zero = planar(y_eq_1, MPoly::zero(2), MPoly::zero(2));
    assert!(polar_intersection(&amb, &parabola, &zero).unwrap().value.is_zero());
}

#[test]
fn verify_bounding_examples() {
    let f = poly(&[((2, 0), 1), ((0, 2), 1), ((0, 0), -9)]);
    let plane = Plane::ints(0, 0, 1, 0).unwrap();
    let s = BoundingChain2::new(plane.clone(), c(1), f.clone());
    let boundary = residue_2form_along_curve(&c(1), &f, &f).unwrap();
    let cyc = EmbeddedCycle1 { plane: Some(plane.clone()), form: boundary.clone() };
    assert!(verify_bounding(&s, &cyc).ok);
    let twice = EmbeddedCycle1 { plane: Some(plane.clone()), form: boundary.scale(&rat(2)) };
    assert!(!verify_bounding(&s, &twice).ok);
    let extra = BoundingChain2::new(plane.clone(), c(1), &f * &poly(&[((0, 1), 1), ((0, 0), -5)]));
    let r = verify_bounding(&extra, &cyc);
    assert!(!r.ok);
    assert!(r.diagnostic.unwrap().contains("extra"));
    let elsewhere = EmbeddedCycle1 { plane: Some(Plane::ints(0, 0, 1, -1).unwrap()), form: boundary };
    assert!(!verify_bounding(&s, &elsewhere).ok);
}

#[test]
fn boundary3_examples() {
    let amb = AmbientSpace::p3_default();
    let one = MPoly::one(3);
    let z0 = Plane::ints(0, 0, 1, 0).unwrap();
    let chains = boundary3(&amb, &one, std::slice::from_ref(&z0)).unwrap();
    assert_eq!(chains.len(), 1);
    assert_eq!((chains[0].num.clone(), chains[0].den.clone()), (c(1), c(1)));
    assert_eq!(chains[0].weight.tau_power, 1);

    let planes = [Plane::ints(1, 0, 0, 0).unwrap(), Plane::ints(0, 1, 0, 0).unwrap(), z0];
    let chains = boundary3(&amb, &one, &planes).unwrap();
    assert_eq!(chains.len(), 3);
    let st = poly(&[((1, 1), 1)]);
    for ch in &chains {
        assert_eq!(ch.num, c(1));
        assert_eq!(ch.den, st);
    }
    assert!(boundary3(&amb, &MPoly::zero(3), &planes).unwrap().is_empty());
    assert!(boundary3(&amb, &one, &[]).unwrap().is_empty());
}

#[test]
fn linking_examples() {
    let (amb, c1, s2) = linking_scene();
    let v = polar_linking(&amb, &c1, &s2).unwrap();
    assert_eq!(v.terms.len(), 2);

    let zero = EmbeddedCycle1 { plane: c1.plane.clone(), form: c1.form.scale(&rat(0)) };
    assert!(polar_linking(&amb, &zero, &s2).unwrap().value.is_zero());

    let lambda = [rat(2), Rat::new(1.into(), 2.into()), rat(1)];
    let w = polar_linking(&amb, &scale_cycle(&c1, &lambda).unwrap(), &scale_chain(&s2, &lambda).unwrap()).unwrap();
    assert_eq!(v.value, w.value);

    let inside = EmbeddedCycle1 { plane: Some(s2.plane.clone()), form: c1.form.clone() };
    assert!(matches!(polar_linking(&amb, &inside, &s2), Err(PolarError::NonTransverse(_))));
}

#[test]
fn random_boundaries_do_not_change_linking() {
    let (amb, c1, s2) = linking_scene();
    let base = polar_linking(&amb, &c1, &s2).unwrap().value;
    let mut rng = seeded_rng(77);
    for _ in 0..10 {
        let (_, _, chains) = random_gamma(&amb, &c1, &mut rng).unwrap();
        assert!(polar_linking_sum(&amb, &c1, &chains).unwrap().is_zero());
        let mut all = vec![s2.clone()];
        all.extend(chains);
        let total = polar_linking_sum(&amb, &c1, &all).unwrap();
        assert_eq!(total.part(0), base.value);
    }
}

#[test]
fn tangent_rescaling_is_invisible() {
    let (amb, c1, s2) = linking_scene();
    let v = polar_linking(&amb, &c1, &s2).unwrap().value;
    let f = &c1.form.curve;
    for k in [2, -3, 7] {
        let kf = f.scale(&rat(k));
        // Same form ds/F_t written against the rescaled equation.
        let form = CurveForm::from_components(&kf, &MPoly::zero(2), &MPoly::zero(2), &c(1)).unwrap();
        let form = CurveForm { num: c(k), ..form };
        let scaled = EmbeddedCycle1 { plane: c1.plane.clone(), form };
        assert_eq!(polar_linking(&amb, &scaled, &s2).unwrap().value, v);
    }
}

#[test]
fn linking_is_bilinear() {
    let (amb, c1, s2) = linking_scene();
    let v = rational(&polar_linking(&amb, &c1, &s2).unwrap().value);
    let mut rng = seeded_rng(5);
    for _ in 0..10 {
        let (a, b) = (rat(rng.gen_range(-9..=9)), rat(rng.gen_range(-9..=9)));
        let ca = EmbeddedCycle1 { plane: c1.plane.clone(), form: c1.form.scale(&a) };
        let sb = BoundingChain2 { num: s2.num.scale(&b), ..s2.clone() };
        let w = polar_linking(&amb, &ca, &sb).unwrap().value;
        assert_eq!(w.is_zero(), (&a * &b).is_zero());
        if !w.is_zero() {
            assert_eq!(rational(&w), &v * &a * &b);
        }
    }
    let dt = CurveForm::from_components(&c1.form.curve, &MPoly::zero(2), &c(1), &c(1)).unwrap();
    let sum = CurveForm { num: &c1.form.num + &dt.num, ..c1.form.clone() };
    let lin = |form: CurveForm| {
        rational(&polar_linking(&amb, &EmbeddedCycle1 { plane: c1.plane.clone(), form }, &s2).unwrap().value)
    };
    assert_eq!(lin(sum), lin(c1.form.clone()) + lin(dt));
}

/// Roots of a monic cubic `s^3 + a2 s^2 + a1 s + a0`.
fn cubic_roots(a: [Complex64; 3]) -> [Complex64; 3] {
    let f = |s: Complex64| ((s + a[2]) * s + a[1]) * s + a[0];
    let mut r = [Complex64::new(0.4, 0.9), Complex64::new(0.4, 0.9).powu(2), Complex64::new(0.4, 0.9).powu(3)];
    for _ in 0..500 {
        for i in 0..3 {
            let mut d = Complex64::new(1.0, 0.0);
            for j in 0..3 {
                if i != j {
                    d *= r[i] - r[j];
                }
            }
            r[i] -= f(r[i]) / d;
        }
    }
    r
}

fn det3(u: [Complex64; 3], v: [Complex64; 3], w: [Complex64; 3]) -> Complex64 {
    u[0] * (v[1] * w[2] - v[2] * w[1]) - u[1] * (v[0] * w[2] - v[2] * w[0]) + u[2] * (v[0] * w[1] - v[1] * w[0])
}

/// Floating evaluation of `Σ α(u) β(v1, v2) / γ(u, v1, v2)` for the cycle
/// `t^2 = s^3 + p s + q` (with `(s, t) = (y, z)`) in the plane `x = x0` and
/// the chain `dx∧dy / (x^2 + y^2 + m)` in the plane `z = z0`, using random
/// tangent scalings and random frames of the second plane.
fn numeric_linking(x0: f64, p: f64, q: f64, alpha: [f64; 2], z0: f64, m: f64, rng: &mut impl Rng) -> Complex64 {
    let mut rnd = || Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let k = Complex64::new(0.0, 0.0);
    let roots = cubic_roots([k + q - z0 * z0, k + p, k]);
    let mut total = Complex64::new(0.0, 0.0);
    for y in roots {
        let z = Complex64::new(z0, 0.0);
        let x = Complex64::new(x0, 0.0);
        let (fs, ft) = (-(3.0 * y * y + p), 2.0 * z);
        let lam = rnd();
        let u = [k, lam * ft, -lam * fs];
        let a = alpha[0] * u[1] + alpha[1] * u[2];
        let (m00, m01, m10, m11) = (rnd(), rnd(), rnd(), rnd());
        let v1 = [m00, m01, k];
        let v2 = [m10, m11, k];
        let beta = (v1[0] * v2[1] - v1[1] * v2[0]) / (x * x + y * y + m);
        let gamma = det3(u, v1, v2) / (x * y * z);
        total += a * beta / gamma;
    }
    total
}

#[test]
fn exact_linking_matches_floating_point_sum() {
    let amb = AmbientSpace::p3_default();
    let mut rng = seeded_rng(2024);
    let mut checked = 0;
    while checked < 25 {
        let x0 = rng.gen_range(1..=3);
        let (p, q) = (rng.gen_range(-5..=5), rng.gen_range(-5..=5));
        let z0 = rng.gen_range(1..=3);
        let m = rng.gen_range(-9..=9);
        let alpha = [rng.gen_range(-3..=3), rng.gen_range(-3..=3)];
        if alpha == [0, 0] {
            continue;
        }
        let curve = poly(&[((0, 2), 1), ((3, 0), -1), ((1, 0), -p), ((0, 0), -q)]);
        let form = CurveForm::from_components(&curve, &c(alpha[0]), &c(alpha[1]), &c(1)).unwrap();
        let c1 = EmbeddedCycle1 { plane: Some(Plane::ints(1, 0, 0, -x0).unwrap()), form };
        let den = poly(&[((2, 0), 1), ((0, 2), 1), ((0, 0), m)]);
        let s2 = BoundingChain2::new(Plane::ints(0, 0, 1, -z0).unwrap(), c(1), den);
        let Ok(exact) = polar_linking(&amb, &c1, &s2) else {
            continue;
        };
        let exact = rat_to_f64(&rational(&exact.value));
        let af = [alpha[0] as f64, alpha[1] as f64];
        let approx = numeric_linking(x0 as f64, p as f64, q as f64, af, z0 as f64, m as f64, &mut rng);
        assert!(approx.im.abs() < 1e-9 * (1.0 + exact.abs()), "{approx}");
        assert!((approx.re - exact).abs() < 1e-9 * (1.0 + exact.abs()), "{approx} vs {exact}");
        checked += 1;
    }
}
