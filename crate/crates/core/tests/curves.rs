use polar_core::arith::{rat, ratio, Poly, Rat, Scalar};
use polar_core::curves::{
    divisor_of, holomorphic_basis, ord_at, residue_at, residue_sum_check, third_kind, CurveModel, CurvePoint,
    Differential1,
};
use polar_core::reproduce::{random_point, reference_curves, seeded_rng, small_rat};
use rand::Rng;

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

fn one(v: i64) -> Scalar {
    Scalar::rational(rat(v))
}

#[test]
fn orders() {
    assert_eq!(ord_at(&line(), &Differential1::line_rat(&p(&[1]), &p(&[0, 1])), &z(0)).unwrap(), -1);
    assert_eq!(ord_at(&line(), &Differential1::line_rat(&p(&[1]), &p(&[0, 0, 1])), &CurvePoint::Infinity).unwrap(), 0);
    let dx_y = Differential1::hyper_rat(&p(&[1]), &p(&[]), &p(&[1])).unwrap();
    assert_eq!(ord_at(&g2(), &dx_y, &CurvePoint::Infinity).unwrap(), 2);
}

#[test]
fn divisors() {
    let d = divisor_of(&line(), &Differential1::line_rat(&p(&[1]), &p(&[1]))).unwrap();
    assert_eq!((d.weight(&CurvePoint::Infinity), d.degree()), (-2, -2));
    let dx_y = Differential1::hyper_rat(&p(&[1]), &p(&[]), &p(&[1])).unwrap();
    let d = divisor_of(&g2(), &dx_y).unwrap();
    assert_eq!((d.weight(&CurvePoint::Infinity), d.degree()), (2, 2));
    let d = divisor_of(&line(), &Differential1::line_rat(&p(&[-1, 1]), &p(&[0, 1]))).unwrap();
    assert_eq!((d.weight(&z(1)), d.weight(&z(0)), d.weight(&CurvePoint::Infinity)), (1, -1, -2));
    assert_eq!(d.degree(), -2);
}

#[test]
fn residues() {
    let dz_z = Differential1::line_rat(&p(&[1]), &p(&[0, 1]));
    assert_eq!(residue_at(&line(), &dz_z, &z(0)).unwrap(), one(1));
    assert_eq!(residue_at(&line(), &dz_z, &CurvePoint::Infinity).unwrap(), one(-1));
    let w = Differential1::line_rat(&p(&[-1]), &p(&[0, -1, 1]));
    assert_eq!(residue_at(&line(), &w, &z(0)).unwrap(), one(1));
    assert_eq!(residue_at(&line(), &w, &z(1)).unwrap(), one(-1));
    // (y + 2)/(2y(x - 2)) dx = (1 + y/2)/(x - 2) · dx/y
    let eta = Differential1::hyper_rat(&p(&[1]), &Poly::from_rats(vec![ratio(1, 2)]), &p(&[-2, 1])).unwrap();
    assert_eq!(residue_at(&g1(), &eta, &CurvePoint::ints(2, 2)).unwrap(), one(1));
    assert!(residue_sum_check(&line(), &dz_z).unwrap().is_zero());
    assert!(residue_sum_check(&line(), &w).unwrap().is_zero());
    let pq = third_kind(&g1(), &CurvePoint::ints(2, 2), &CurvePoint::ints(0, 2)).unwrap();
    assert!(residue_sum_check(&g1(), &pq).unwrap().is_zero());
}

#[test]
fn holomorphic_bases() {
    assert!(holomorphic_basis(&line()).is_empty());
    let dx_y = Differential1::hyper_rat(&p(&[1]), &p(&[]), &p(&[1])).unwrap();
    let x_dx_y = Differential1::hyper_rat(&p(&[0, 1]), &p(&[]), &p(&[1])).unwrap();
    assert_eq!(holomorphic_basis(&g1()), vec![dx_y.clone()]);
    assert_eq!(holomorphic_basis(&g2()), vec![dx_y, x_dx_y]);
}

#[test]
fn third_kind_examples() {
    assert_eq!(third_kind(&line(), &z(0), &z(1)).unwrap(), Differential1::line_rat(&p(&[-1]), &p(&[0, -1, 1])));
    assert_eq!(
        third_kind(&line(), &z(0), &CurvePoint::Infinity).unwrap(),
        Differential1::line_rat(&p(&[1]), &p(&[0, 1]))
    );
    let eta = Differential1::hyper_rat(&p(&[1]), &Poly::from_rats(vec![ratio(1, 2)]), &p(&[-2, 1])).unwrap();
    assert_eq!(third_kind(&g1(), &CurvePoint::ints(2, 2), &CurvePoint::Infinity).unwrap(), eta);
}

fn random_poly(rng: &mut rand_chacha::ChaCha8Rng, max_deg: usize) -> Poly<Rat> {
    let d = rng.gen_range(0..=max_deg);
    Poly::from_rats((0..=d).map(|_| Rat::from_integer(rng.gen_range(-5i64..=5).into())).collect())
}

fn random_form(curve: &CurveModel, rng: &mut rand_chacha::ChaCha8Rng) -> Differential1 {
    loop {
        let w = if curve.is_line() {
            let den = random_poly(rng, 4);
            if den.is_zero() {
                continue;
            }
            Differential1::line_rat(&random_poly(rng, 4), &den)
        } else {
            let c = random_poly(rng, 3);
            if c.is_zero() {
                continue;
            }
            Differential1::hyper_rat(&random_poly(rng, 4), &random_poly(rng, 2), &c).unwrap()
        };
        if !w.is_zero() {
            return w;
        }
    }
}

#[test]
fn canonical_degree_and_orders_agree() {
    for (k, (_, curve)) in reference_curves().iter().enumerate() {
        let mut rng = seeded_rng(900 + k as u64);
        for _ in 0..100 {
            let w = random_form(curve, &mut rng);
            let d = divisor_of(curve, &w).unwrap();
            assert_eq!(d.degree(), 2 * curve.genus() as i64 - 2, "{}", w.pretty());
            for (pt, wt) in d.poles() {
                assert_eq!(ord_at(curve, &w, pt).unwrap(), wt);
            }
        }
    }
}

#[test]
fn third_kind_residues_are_plus_minus_one() {
    for (k, (_, curve)) in reference_curves().iter().enumerate() {
        let mut rng = seeded_rng(700 + k as u64);
        let mut done = 0;
        while done < 30 {
            let a = random_point(curve, &mut rng).unwrap();
            let b = random_point(curve, &mut rng).unwrap();
            let Ok(w) = third_kind(curve, &a, &b) else {
                continue;
            };
            assert_eq!(residue_at(curve, &w, &a).unwrap().value.as_rat(), Some(rat(1)));
            assert_eq!(residue_at(curve, &w, &b).unwrap().value.as_rat(), Some(rat(-1)));
            assert!(residue_sum_check(curve, &w).unwrap().is_zero());
            done += 1;
        }
    }
}

#[test]
fn residue_theorem_on_random_combinations() {
    for (k, (_, curve)) in reference_curves().iter().enumerate() {
        let mut rng = seeded_rng(500 + k as u64);
        for _ in 0..25 {
            let n = rng.gen_range(1..=3);
            let w = polar_core::reproduce::random_third_kind(curve, &mut rng, n).unwrap();
            let w = w.scale(&polar_core::arith::Alg::from_rat(small_rat(&mut rng)));
            assert!(residue_sum_check(curve, &w).unwrap().is_zero());
        }
    }
}
