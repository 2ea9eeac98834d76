use polar_core::arith::{rat, Alg, MPoly, Poly, Rat};
use polar_core::curves::{residue_value, CurveModel, CurvePoint, Differential1};
use polar_core::reproduce::{random_arrangement, seeded_rng, small_rat};
use polar_core::surface::{boundary2, d2_check, residue_along_line, Line, Plane2Form, PoleLine};
use polar_core::PolarError;
use rand::Rng;

fn one() -> MPoly {
    MPoly::one(2)
}

fn x_eq_0() -> Line {
    Line::ints(1, 0, 0).unwrap()
}

fn y_eq_0() -> Line {
    Line::ints(0, 1, 0).unwrap()
}

fn lp(c: &[i64]) -> Poly<Rat> {
    Poly::from_ints(c)
}

#[test]
fn residues_along_coordinate_lines() {
    let beta = Plane2Form::new(one(), vec![x_eq_0(), y_eq_0()]).unwrap();
    let rx = residue_along_line(&beta, &PoleLine::Affine(x_eq_0())).unwrap();
    assert_eq!(rx, Differential1::line_rat(&lp(&[1]), &lp(&[0, 1])));
    let ry = residue_along_line(&beta, &PoleLine::Affine(y_eq_0())).unwrap();
    assert_eq!(ry, Differential1::line_rat(&lp(&[-1]), &lp(&[0, 1])));

    let single = Plane2Form::new(one(), vec![x_eq_0()]).unwrap();
    let r = residue_along_line(&single, &PoleLine::Affine(x_eq_0())).unwrap();
    assert_eq!(r, Differential1::line_rat(&lp(&[1]), &lp(&[1])));

    let other = Line::ints(1, 1, -3).unwrap();
    assert!(matches!(residue_along_line(&beta, &PoleLine::Affine(other)), Err(PolarError::NotAPoleLine)));
}

#[test]
fn boundary_examples() {
    let beta = Plane2Form::new(one(), vec![x_eq_0(), y_eq_0()]).unwrap();
    let b = boundary2(&beta).unwrap();
    assert_eq!(b.terms.len(), 2);
    assert!(b.terms.iter().all(|(_, _, s)| s.tau_power == 1 && s.value == Alg::int(1)));

    assert!(boundary2(&Plane2Form::new(one(), vec![]).unwrap()).unwrap().terms.is_empty());

    let x_eq_1 = Line::ints(1, 0, -1).unwrap();
    let parallel = Plane2Form::new(one(), vec![x_eq_0(), x_eq_1.clone()]).unwrap();
    let b = boundary2(&parallel).unwrap();
    assert_eq!(b.terms.len(), 2);
    let r0 = residue_along_line(&parallel, &PoleLine::Affine(x_eq_0())).unwrap();
    let r1 = residue_along_line(&parallel, &PoleLine::Affine(x_eq_1)).unwrap();
    assert_eq!(r0, Differential1::line_rat(&lp(&[-1]), &lp(&[1])));
    assert_eq!(r1, Differential1::line_rat(&lp(&[1]), &lp(&[1])));
}

#[test]
fn rejects_bad_arrangements() {
    let concurrent = vec![x_eq_0(), y_eq_0(), Line::ints(1, 1, 0).unwrap()];
    assert!(Plane2Form::new(one(), concurrent).is_err());
    assert!(Plane2Form::new(one(), vec![x_eq_0(), Line::ints(2, 0, 0).unwrap()]).is_err());
    assert!(Line::ints(0, 0, 1).is_err());
}

#[test]
fn d2_examples() {
    let beta = Plane2Form::new(one(), vec![x_eq_0(), y_eq_0()]).unwrap();
    let r = d2_check(&beta).unwrap();
    assert!(r.pass);
    assert_eq!(r.points.len(), 1);
    assert_eq!(r.points[0].point, "(0/1, 0/1)");
    assert_eq!(r.points[0].sum, "0");
    assert!(r.points[0].zero);
    let empty = d2_check(&Plane2Form::new(one(), vec![]).unwrap()).unwrap();
    assert!(empty.pass && empty.points.is_empty());
}

fn random_lines(rng: &mut impl Rng, n: usize) -> Vec<Line> {
    loop {
        let lines: Option<Vec<Line>> = (0..n)
            .map(|_| Line::ints(rng.gen_range(-5..=5), rng.gen_range(-5..=5), rng.gen_range(-9..=9)).ok())
            .collect();
        if let Some(lines) = lines {
            if Plane2Form::new(one(), lines.clone()).is_ok() {
                return lines;
            }
        }
    }
}

fn random_numerator(rng: &mut impl Rng) -> MPoly {
    let mut rng2 = seeded_rng(rng.gen());
    let terms: Vec<(Vec<u32>, Rat)> =
        [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0)].iter().map(|&(i, j)| (vec![i, j], small_rat(&mut rng2))).collect();
    MPoly::from_terms(2, terms)
}

#[test]
fn five_random_lines_cancel_at_all_ten_points() {
    let mut rng = seeded_rng(55);
    let mut checked = 0;
    while checked < 20 {
        let lines = random_lines(&mut rng, 5);
        let parallel = (0..5).any(|i| (i + 1..5).any(|j| lines[i].is_parallel(&lines[j])));
        let Ok(beta) = Plane2Form::new(random_numerator(&mut rng), lines) else {
            continue;
        };
        if parallel {
            continue;
        }
        let r = d2_check(&beta).unwrap();
        assert!(r.pass);
        assert_eq!(r.points.len(), 10);
        assert!(r.points.iter().all(|p| p.zero));
        checked += 1;
    }
}

#[test]
fn residue_is_linear_in_numerator() {
    let mut rng = seeded_rng(8);
    for _ in 0..30 {
        let lines = random_lines(&mut rng, 3);
        let (g, h) = (random_numerator(&mut rng), random_numerator(&mut rng));
        let c = small_rat(&mut rng);
        let sum = &g + &h.scale(&c);
        let (Ok(bg), Ok(bh), Ok(bs)) =
            (Plane2Form::new(g, lines.clone()), Plane2Form::new(h, lines.clone()), Plane2Form::new(sum, lines.clone()))
        else {
            continue;
        };
        for l in &lines {
            let pl = PoleLine::Affine(l.clone());
            let rg = residue_along_line(&bg, &pl).unwrap();
            let rh = residue_along_line(&bh, &pl).unwrap();
            let rs = residue_along_line(&bs, &pl).unwrap();
            assert_eq!(rs, rg.add(&rh.scale(&Alg::from_rat(c.clone()))).unwrap());
        }
    }
}

#[test]
fn swapping_lines_flips_repeated_residue() {
    let p1 = CurveModel::projective_line();
    let mut rng = seeded_rng(21);
    for _ in 0..30 {
        let lines = random_lines(&mut rng, 4);
        let Ok(beta) = Plane2Form::new(random_numerator(&mut rng), lines.clone()) else {
            continue;
        };
        for i in 0..lines.len() {
            for j in 0..lines.len() {
                let Some((x, y)) = lines[i].meet(&lines[j]) else {
                    continue;
                };
                if i == j {
                    continue;
                }
                let wi = residue_along_line(&beta, &PoleLine::Affine(lines[i].clone())).unwrap();
                let wj = residue_along_line(&beta, &PoleLine::Affine(lines[j].clone())).unwrap();
                let ri = residue_value(&p1, &wi, &CurvePoint::line_rat(lines[i].param_of(&x, &y))).unwrap();
                let rj = residue_value(&p1, &wj, &CurvePoint::line_rat(lines[j].param_of(&x, &y))).unwrap();
                assert_eq!(ri, -rj);
            }
        }
    }
}

#[test]
fn random_arrangements_pass() {
    let mut rng = seeded_rng(3);
    for _ in 0..50 {
        let beta = random_arrangement(&mut rng, 5);
        let r = d2_check(&beta).unwrap();
        assert!(r.pass, "{}", beta.pretty());
    }
}

#[test]
fn line_at_infinity_joins_the_check() {
    let g = MPoly::from_terms(2, vec![(vec![1, 0], rat(1)), (vec![0, 1], rat(2))]);
    let beta = Plane2Form::new(g, vec![x_eq_0(), y_eq_0(), Line::ints(1, 1, -1).unwrap()])
        .unwrap()
        .with_line_at_infinity()
        .unwrap();
    let r = d2_check(&beta).unwrap();
    assert!(r.pass);
    assert_eq!(r.pole_lines, 4);
    assert_eq!(r.points.len(), 6);
}
