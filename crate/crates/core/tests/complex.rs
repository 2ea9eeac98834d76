use polar_core::arith::{rat, Alg, Poly, Rat, Scalar};
use polar_core::complex::{
    boundary1, hp0_finite_support, hp0_stabilized, hp1_punctured, hp_projective, is_admissible, mv_check, Chain1,
    PuncturedCurve, SupportSampler,
};
use polar_core::curves::{holomorphic_basis, CurveModel, CurvePoint, Differential1};
use polar_core::reproduce::{mv_configuration, random_third_kind, reference_curves, seeded_rng, small_rat};
use std::collections::BTreeSet;

fn p(c: &[i64]) -> Poly<Rat> {
    Poly::from_ints(c)
}

fn line() -> CurveModel {
    CurveModel::projective_line()
}

fn g1() -> CurveModel {
    CurveModel::hyperelliptic_ints(&[4, -4, 0, 1]).unwrap()
}

fn g2() -> CurveModel {
    CurveModel::hyperelliptic_ints(&[1, 1, 0, 0, 0, 1]).unwrap()
}

fn z(v: i64) -> CurvePoint {
    CurvePoint::line_rat(rat(v))
}

fn dz_z() -> Differential1 {
    Differential1::line_rat(&p(&[1]), &p(&[0, 1]))
}

#[test]
fn boundary_examples() {
    let b = boundary1(&Chain1::single(line(), dz_z())).unwrap();
    assert_eq!(b.terms.len(), 2);
    assert_eq!(b.terms[&z(0)], Scalar::new(Alg::from_rat(rat(1)), 1));
    assert_eq!(b.terms[&CurvePoint::Infinity], Scalar::new(Alg::from_rat(rat(-1)), 1));
    for w in holomorphic_basis(&g2()) {
        assert!(boundary1(&Chain1::single(g2(), w)).unwrap().is_zero());
    }
    let mut c = Chain1::single(line(), dz_z());
    c.push(dz_z().scale(&Alg::from_rat(rat(-1))), Scalar::rational(rat(1))).unwrap();
    assert!(boundary1(&c).unwrap().is_zero());
}

#[test]
fn admissibility_examples() {
    let w = Differential1::line_rat(&p(&[0, 1]), &(&(&p(&[-1, 1]) * &p(&[-2, 1])) * &p(&[-3, 1])));
    let minus0 = PuncturedCurve::new(line(), &[z(0)]).unwrap();
    assert!(is_admissible(&Chain1::single(line(), w), &minus0));
    assert!(!is_admissible(&Chain1::single(line(), dz_z()), &minus0));
    let dx_y = holomorphic_basis(&g2())[0].clone();
    let minus_inf = PuncturedCurve::new(g2(), &[CurvePoint::Infinity]).unwrap();
    assert!(is_admissible(&Chain1::single(g2(), dx_y), &minus_inf));
}

#[test]
fn homology_examples() {
    for (c, g) in [(line(), 0), (g1(), 1), (g2(), 2)] {
        let h = hp_projective(&c).unwrap();
        assert_eq!((h.hp0, h.hp1), (1, g));
    }
    let minus_inf = |c: CurveModel| PuncturedCurve::new(c, &[CurvePoint::Infinity]).unwrap();
    assert_eq!(hp1_punctured(&minus_inf(line())).unwrap(), 0);
    assert_eq!(hp1_punctured(&minus_inf(g2())).unwrap(), 1);
    let special = PuncturedCurve::new(g2(), &[CurvePoint::ints(0, 1), CurvePoint::ints(0, -1)]).unwrap();
    assert_eq!(hp1_punctured(&special).unwrap(), 1);
    let generic = PuncturedCurve::new(g2(), &[CurvePoint::ints(0, 1), CurvePoint::Infinity]).unwrap();
    assert_eq!(hp1_punctured(&generic).unwrap(), 0);

    let t: Vec<CurvePoint> = (0..4).map(z).collect();
    assert_eq!(hp0_finite_support(&PuncturedCurve::projective(line()), &t).unwrap().hp0, 1);
    assert_eq!(hp0_finite_support(&minus_inf(line()), &t).unwrap().hp0, 2);
    let t1 = vec![CurvePoint::ints(0, 2), CurvePoint::ints(0, -2), CurvePoint::ints(1, 1), CurvePoint::ints(1, -1)];
    assert_eq!(hp0_finite_support(&minus_inf(g1()), &t1).unwrap().hp0, 1);

    let two = PuncturedCurve::new(line(), &[z(0), CurvePoint::Infinity]).unwrap();
    assert_eq!(hp0_stabilized(&two, 1).unwrap().hp0, 3);
    assert_eq!(hp0_stabilized(&PuncturedCurve::projective(line()), 1).unwrap().hp0, 1);
    assert_eq!(hp0_stabilized(&minus_inf(g2()), 1).unwrap().hp0, 1);
}

#[test]
fn mayer_vietoris_examples() {
    let r = mv_check(&line(), &[z(0)], &[CurvePoint::Infinity], 1).unwrap();
    assert!(r.pass);
    assert_eq!(r.sequence, vec![0, 0, 0, 3, 4, 1]);
    let dims: Vec<(usize, usize)> = r.pieces.iter().map(|p| (p.hp0, p.hp1)).collect();
    assert_eq!(dims, vec![(2, 0), (2, 0), (3, 0), (1, 0)]);
    assert_eq!(r.alternating_sum, 0);

    let same = mv_check(&g1(), &[CurvePoint::ints(1, 1)], &[CurvePoint::ints(1, 1)], 2).unwrap();
    assert!(same.pass, "{:?}", same.failure);
    let generic = mv_check(&g1(), &[CurvePoint::ints(1, 1)], &[CurvePoint::ints(0, 2)], 2).unwrap();
    assert!(generic.pass, "{:?}", generic.failure);
    assert_eq!(generic.alternating_sum, 0);
}

#[test]
fn boundary_is_linear_and_sums_to_zero() {
    for (k, (_, curve)) in reference_curves().iter().enumerate() {
        let mut rng = seeded_rng(300 + k as u64);
        for _ in 0..8 {
            let w1 = random_third_kind(curve, &mut rng, 2).unwrap();
            let w2 = random_third_kind(curve, &mut rng, 2).unwrap();
            let (a, b) = (small_rat(&mut rng), small_rat(&mut rng));
            let mut c = Chain1::new(curve.clone());
            c.push(w1.clone(), Scalar::rational(a.clone())).unwrap();
            c.push(w2.clone(), Scalar::rational(b.clone())).unwrap();
            let whole = boundary1(&c).unwrap();
            let mut parts = polar_core::complex::Chain0::new();
            for (w, s) in [(w1, a), (w2, b)] {
                let bw = boundary1(&Chain1::single(curve.clone(), w)).unwrap();
                for (pt, v) in bw.terms {
                    parts.add_term(pt, Scalar::new(v.value * Alg::from_rat(s.clone()), v.tau_power)).unwrap();
                }
            }
            assert_eq!(whole, parts);
            assert!(whole.total().unwrap().is_zero());
        }
    }
}

#[test]
fn admissible_boundaries_avoid_punctures() {
    for (k, (_, curve)) in reference_curves().iter().enumerate() {
        let mut rng = seeded_rng(40 + k as u64);
        let mut seen = 0;
        for _ in 0..30 {
            let w = random_third_kind(curve, &mut rng, 1).unwrap();
            let mut sampler = SupportSampler::new(curve, 7 + seen, &BTreeSet::new());
            let x = PuncturedCurve::new(curve.clone(), &[sampler.next_point().unwrap(), CurvePoint::Infinity]).unwrap();
            let c = Chain1::single(curve.clone(), w);
            if is_admissible(&c, &x) {
                seen += 1;
                let b = boundary1(&c).unwrap();
                assert!(b.terms.keys().all(|pt| !x.punctures.contains(pt)));
            }
        }
    }
}

#[test]
fn finite_support_is_monotone_past_the_bound() {
    for (_, curve) in reference_curves() {
        let x = PuncturedCurve::new(curve.clone(), &[CurvePoint::Infinity]).unwrap();
        let bound = 2 * curve.genus() + 3;
        let mut sampler = SupportSampler::new(&curve, 99, &x.punctures);
        let mut t: Vec<CurvePoint> = (0..bound).map(|_| sampler.next_point().unwrap()).collect();
        let mut last = hp0_finite_support(&x, &t).unwrap().hp0;
        for _ in 0..3 {
            t.push(sampler.next_point().unwrap());
            let h = hp0_finite_support(&x, &t).unwrap().hp0;
            assert!(h <= last);
            last = h;
        }
    }
}

#[test]
fn mayer_vietoris_on_random_configurations() {
    for (k, (_, curve)) in reference_curves().iter().enumerate() {
        for j in 0..2u64 {
            let seed = 1000 + 10 * k as u64 + j;
            let (s1, s2) = mv_configuration(curve, seed).unwrap();
            let r = mv_check(curve, &s1, &s2, seed).unwrap();
            assert!(r.pass, "{:?}", r.failure);
            assert_eq!(r.alternating_sum, 0);
        }
    }
}

fn mobius(m: [i64; 4], p: &CurvePoint) -> CurvePoint {
    let [a, b, c, d] = m.map(rat);
    let (num, den) = match p {
        CurvePoint::Infinity => (a, c),
        CurvePoint::Affine { x, .. } => {
            let x = x.as_rat().expect("rational point");
            (&a * &x + &b, &c * &x + &d)
        }
    };
    if den == rat(0) {
        CurvePoint::Infinity
    } else {
        CurvePoint::line_rat(num / den)
    }
}

#[test]
fn line_homology_is_chart_independent() {
    let sets: Vec<Vec<CurvePoint>> = vec![
        vec![z(0)],
        vec![z(0), CurvePoint::Infinity],
        vec![z(0), z(2), CurvePoint::Infinity],
        vec![CurvePoint::line_rat(Rat::new(1.into(), 2.into())), z(3)],
    ];
    for s in sets {
        let base = PuncturedCurve::new(line(), &s).unwrap();
        let h = hp0_stabilized(&base, 4).unwrap();
        for m in [[1, -1, 1, 1], [0, 1, 1, 0], [2, 3, 1, 1]] {
            let moved: Vec<CurvePoint> = s.iter().map(|p| mobius(m, p)).collect();
            let x = PuncturedCurve::new(line(), &moved).unwrap();
            let k = hp0_stabilized(&x, 4).unwrap();
            assert_eq!((h.hp0, h.hp1), (k.hp0, k.hp1), "{m:?}");
        }
    }
}
