//! Deterministic regeneration of the reference tables, plus the seeded
//! generators shared by the randomized suites.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{Alg, MPoly, Rat};
use crate::complex::{hp0_stabilized, hp1_punctured, hp_projective, mv_check, PuncturedCurve, SupportSampler};
use crate::curves::{fiber_orbits, residue_sum_check, third_kind, CurveModel, CurvePoint, Differential1};
use crate::error::{PolarError, Result};
use crate::link::{
    boundary3, polar_linking, polar_linking_sum, AmbientSpace, BoundingChain2, CurveForm, EmbeddedCycle1, Plane,
};
use crate::surface::{d2_check, Line, Plane2Form};

pub const REPORT_VERSION: &str = "1";

/// The reference curves: `P^1`, `y^2 = x^3 - 4x + 4`, `y^2 = x^5 + x + 1`.
pub fn reference_curves() -> Vec<(&'static str, CurveModel)> {
    vec![
        ("P1", CurveModel::projective_line()),
        ("y^2 = x^3 - 4x + 4", CurveModel::hyperelliptic_ints(&[4, -4, 0, 1]).expect("valid curve")),
        ("y^2 = x^5 + x + 1", CurveModel::hyperelliptic_ints(&[1, 1, 0, 0, 0, 1]).expect("valid curve")),
    ]
}

/// The generator behind every seeded suite.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nonzero rational with numerator in `[-9, 9]` and denominator in `[1, 4]`.
pub fn small_rat(rng: &mut ChaCha8Rng) -> Rat {
    loop {
        let n: i64 = rng.gen_range(-9..=9);
        if n != 0 {
            return Rat::new(n.into(), rng.gen_range(1i64..=4).into());
        }
    }
}

/// A random point of `curve`: an affine orbit with rational `x`, a
/// Weierstrass point, or infinity.
pub fn random_point(curve: &CurveModel, rng: &mut ChaCha8Rng) -> Result<CurvePoint> {
    match rng.gen_range(0..10) {
        0 => Ok(CurvePoint::Infinity),
        1 if !curve.is_line() => {
            let f = curve.f().expect("hyperelliptic");
            let roots = crate::arith::factor_rational(f).1;
            let (m, _) = &roots[rng.gen_range(0..roots.len())];
            Ok(fiber_orbits(curve, m)?.swap_remove(0))
        }
        _ => SupportSampler::new(curve, rng.gen(), &BTreeSet::new()).next_point(),
    }
}

/// `Σ c_i η(P_i, Q_i)` with random distinct pairs, each term traced to
/// rational coefficients. A pair over different fields is replaced by
/// `Tr η(P, ∞) - Tr η(Q, ∞)`.
pub fn random_third_kind(curve: &CurveModel, rng: &mut ChaCha8Rng, terms: usize) -> Result<Differential1> {
    let mut acc = Differential1::zero(curve);
    let mut added = 0;
    while added < terms {
        let p = random_point(curve, rng)?;
        let q = random_point(curve, rng)?;
        if p == q {
            continue;
        }
        let eta = match third_kind(curve, &p, &q) {
            Ok(w) => w.trace()?,
            Err(PolarError::FieldMismatch) => {
                // Points over different fields: route both orbits through infinity.
                let inf = CurvePoint::Infinity;
                third_kind(curve, &p, &inf)?.trace()?.sub(&third_kind(curve, &q, &inf)?.trace()?)?
            }
            Err(e) => return Err(e),
        };
        acc = acc.add(&eta.scale(&Alg::from_rat(small_rat(rng))))?;
        added += 1;
    }
    Ok(acc)
}

/// Random normal-crossing arrangement with at most `max_lines` pole lines
/// (the line at infinity included) and a random numerator of degree at most 2.
pub fn random_arrangement(rng: &mut ChaCha8Rng, max_lines: usize) -> Plane2Form {
    loop {
        let n = rng.gen_range(2..=max_lines);
        let lines: Option<Vec<Line>> = (0..n)
            .map(|_| Line::ints(rng.gen_range(-4..=4), rng.gen_range(-4..=4), rng.gen_range(-6..=6)).ok())
            .collect();
        let Some(lines) = lines else { continue };
        let deg = rng.gen_range(0..=2u32);
        let mut terms = Vec::new();
        for i in 0..=deg {
            for j in 0..=deg - i {
                if rng.gen_bool(0.6) || (i, j) == (0, 0) {
                    terms.push((vec![i, j], small_rat(rng)));
                }
            }
        }
        let g = MPoly::from_terms(2, terms);
        let Ok(form) = Plane2Form::new(g, lines) else {
            continue;
        };
        if n < max_lines && rng.gen_bool(0.5) {
            if let Ok(full) = form.clone().with_line_at_infinity() {
                return full;
            }
        }
        return form;
    }
}

/// The linking scene: the cubic `z^2 = y^3 - 4y + 4` in the plane `x = 1`
/// and the circle `x^2 + y^2 = 9` in the plane `z = 1`, bounded by
/// `dx∧dy/(x^2 + y^2 - 9)`, in `C^3` with volume form `dx∧dy∧dz/(xyz)`.
pub fn linking_scene() -> (AmbientSpace, EmbeddedCycle1, BoundingChain2) {
    let q = |c: i64| Rat::from_integer(c.into());
    let cubic =
        MPoly::from_terms(2, [(vec![0, 2], q(1)), (vec![3, 0], q(-1)), (vec![1, 0], q(4)), (vec![0, 0], q(-4))]);
    let circle = MPoly::from_terms(2, [(vec![2, 0], q(1)), (vec![0, 2], q(1)), (vec![0, 0], q(-9))]);
    let c1 =
        EmbeddedCycle1 { plane: Some(Plane::ints(1, 0, 0, -1).expect("plane")), form: CurveForm::canonical(&cubic) };
    let s2 = BoundingChain2::new(Plane::ints(0, 0, 1, -1).expect("plane"), MPoly::one(2), circle);
    (AmbientSpace::p3_default(), c1, s2)
}

/// A random `Γ = G dx∧dy∧dz/(L_1 L_2 L_3)` with constant `G` whose boundary
/// pairs cleanly with `c1`; returns the planes, the numerator and `∂Γ`.
pub fn random_gamma(
    amb: &AmbientSpace,
    c1: &EmbeddedCycle1,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<Plane>, MPoly, Vec<BoundingChain2>)> {
    for _ in 0..200 {
        let planes: Option<Vec<Plane>> = (0..3)
            .map(|_| {
                Plane::ints(rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(-3..=3), rng.gen_range(-8..=8))
                    .ok()
            })
            .collect();
        let Some(planes) = planes else { continue };
        let num = MPoly::constant(3, small_rat(rng));
        let Ok(chains) = boundary3(amb, &num, &planes) else {
            continue;
        };
        if chains.iter().all(|s| polar_linking(amb, c1, s).is_ok()) {
            return Ok((planes, num, chains));
        }
    }
    Err(PolarError::Precondition("no admissible random 3-form found".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub suite: String,
    pub case: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub version: &'static str,
    pub seed: u64,
    pub rows: Vec<Row>,
    pub pass: bool,
}

impl Report {
    /// Fixed-width text table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let width = |f: fn(&Row) -> &str, head: &str| {
            self.rows.iter().map(|r| f(r).chars().count()).max().unwrap_or(0).max(head.len())
        };
        let ws = width(|r| &r.suite, "suite");
        let wc = width(|r| &r.case, "case");
        let we = width(|r| &r.expected, "expected");
        let wv = width(|r| &r.computed, "computed");
        out.push_str(&format!("{:<ws$}  {:<wc$}  {:<we$}  {:<wv$}  status\n", "suite", "case", "expected", "computed"));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<ws$}  {:<wc$}  {:<we$}  {:<wv$}  {}\n",
                r.suite,
                r.case,
                r.expected,
                r.computed,
                if r.pass { "PASS" } else { "FAIL" }
            ));
        }
        out.push_str(&format!("overall: {}\n", if self.pass { "PASS" } else { "FAIL" }));
        out
    }
}

struct Rows(Vec<Row>);

impl Rows {
    fn push(&mut self, suite: &str, case: impl Into<String>, expected: impl Into<String>, computed: Result<String>) {
        let expected = expected.into();
        let (computed, pass) = match computed {
            Ok(c) => {
                let pass = c == expected;
                (c, pass)
            }
            Err(e) => (format!("error: {e}"), false),
        };
        self.0.push(Row { suite: suite.into(), case: case.into(), expected, computed, pass });
    }
}

fn pair(a: usize, b: usize) -> String {
    format!("({a}, {b})")
}

/// Runs the exact reference suites with the given seed.
pub fn reproduce(seed: u64) -> Report {
    let mut rows = Rows(Vec::new());
    let curves = reference_curves();

    for (name, c) in &curves {
        let g = c.genus();
        rows.push("projective", format!("{name} generators"), pair(1, g), hp_projective(c).map(|h| pair(h.hp0, h.hp1)));
        rows.push(
            "projective",
            format!("{name} finite support"),
            pair(1, g),
            hp0_stabilized(&PuncturedCurve::projective(c.clone()), seed).map(|h| pair(h.hp0, h.hp1)),
        );
    }

    for (name, c) in &curves {
        let expected = if c.is_line() { pair(2, 0) } else { pair(1, c.genus() - 1) };
        let x = PuncturedCurve::new(c.clone(), &[CurvePoint::Infinity]);
        rows.push(
            "punctured",
            format!("{name} minus infinity"),
            expected,
            x.and_then(|x| hp0_stabilized(&x, seed).map(|h| pair(h.hp0, h.hp1))),
        );
    }

    let g2 = &curves[2].1;
    let hp1 = |pts: &[CurvePoint]| PuncturedCurve::new(g2.clone(), pts).and_then(|x| hp1_punctured(&x));
    let special = hp1(&[CurvePoint::ints(0, 1), CurvePoint::ints(0, -1)]);
    let generic = hp1(&[CurvePoint::ints(0, 1), CurvePoint::Infinity]);
    rows.push("special pair", "hp1 for (0,1) + (0,-1)", "1", special.clone().map(|v| v.to_string()));
    rows.push("special pair", "hp1 for (0,1) + infinity", "0", generic.clone().map(|v| v.to_string()));
    let gap = special.and_then(|s| generic.map(|g| s as i64 - g as i64));
    rows.push("special pair", "special minus generic", "1", gap.map(|v| v.to_string()));

    for (k, (name, c)) in curves.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x5eed_0000 + k as u64));
        let mut zero = 0;
        let mut err = None;
        for _ in 0..100 {
            let terms = rng.gen_range(1..=3);
            match random_third_kind(c, &mut rng, terms).and_then(|w| residue_sum_check(c, &w)) {
                Ok(s) if s.is_zero() => zero += 1,
                Ok(_) => {}
                Err(e) => err = Some(e),
            }
        }
        let computed = match err {
            Some(e) => Err(e),
            None => Ok(format!("{zero}/100")),
        };
        rows.push("residue sum", format!("{name} zero sums"), "100/100", computed);
    }

    let line = &curves[0].1;
    let mv = mv_check(line, &[CurvePoint::line_rat(Rat::from_integer(0.into()))], &[CurvePoint::Infinity], seed);
    rows.push(
        "mayer-vietoris",
        "P1 {0},{inf} dims",
        "[3, 4, 1] exact",
        mv.map(|r| format!("{:?} {}", &r.sequence[3..], if r.pass { "exact" } else { "not exact" })),
    );
    for (k, (name, c)) in curves.iter().enumerate() {
        for j in 0..2u64 {
            let case_seed = seed.wrapping_add(100 * k as u64 + j);
            let r = mv_configuration(c, case_seed).and_then(|(s1, s2)| mv_check(c, &s1, &s2, case_seed));
            rows.push(
                "mayer-vietoris",
                format!("{name} config {j}"),
                "exact, sum 0",
                r.map(|r| {
                    if r.pass {
                        format!("exact, sum {}", r.alternating_sum)
                    } else {
                        format!("not exact: {}", r.failure.unwrap_or_default())
                    }
                }),
            );
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xd2);
    let mut ok = 0;
    let mut err = None;
    for _ in 0..50 {
        match d2_check(&random_arrangement(&mut rng, 6)) {
            Ok(r) if r.pass => ok += 1,
            Ok(_) => {}
            Err(e) => err = Some(e),
        }
    }
    rows.push("boundary^2", "50 random arrangements", "50/50", err.map_or(Ok(format!("{ok}/50")), Err));

    let (amb, c1, s2) = linking_scene();
    let base = polar_linking(&amb, &c1, &s2).map(|p| p.value);
    let lambda = [Rat::from_integer(2.into()), Rat::new(1.into(), 2.into()), Rat::from_integer(1.into())];
    let scaled = crate::link::scale_cycle(&c1, &lambda)
        .and_then(|c| Ok((c, crate::link::scale_chain(&s2, &lambda)?)))
        .and_then(|(c, s)| polar_linking(&amb, &c, &s).map(|p| p.value));
    rows.push(
        "linking",
        "scaling (2x, y/2, z)",
        "unchanged",
        base.clone().and_then(|b| scaled.map(|s| if s == b { "unchanged".into() } else { format!("{b} -> {s}") })),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x11);
    let mut ok = 0;
    let mut err = None;
    for _ in 0..10 {
        let r = random_gamma(&amb, &c1, &mut rng).and_then(|(_, _, chains)| {
            let d = polar_linking_sum(&amb, &c1, &chains)?;
            let mut all = chains;
            all.push(s2.clone());
            let total = polar_linking_sum(&amb, &c1, &all)?;
            let b = base.clone()?;
            let mut expect = crate::arith::ScalarSum::new();
            expect.add(&b)?;
            Ok(d.is_zero() && total == expect)
        });
        match r {
            Ok(true) => ok += 1,
            Ok(false) => {}
            Err(e) => err = Some(e),
        }
    }
    rows.push("linking", "adding 10 random boundaries", "10/10", err.map_or(Ok(format!("{ok}/10")), Err));

    let pass = rows.0.iter().all(|r| r.pass);
    Report { version: REPORT_VERSION, seed, rows: rows.0, pass }
}

/// Two disjoint random puncture sets of sizes 1 or 2.
pub fn mv_configuration(curve: &CurveModel, seed: u64) -> Result<(Vec<CurvePoint>, Vec<CurvePoint>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sampler = SupportSampler::new(curve, rng.gen(), &BTreeSet::new());
    let n1 = rng.gen_range(1..=2);
    let n2 = rng.gen_range(1..=2);
    let mut s1 = Vec::new();
    for _ in 0..n1 {
        s1.push(sampler.next_point()?);
    }
    let mut s2 = vec![CurvePoint::Infinity];
    for _ in 1..n2 {
        s2.push(sampler.next_point()?);
    }
    Ok((s1, s2))
}
