use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::differential::Differential1;
use super::local::{expansion, ord_at};
use super::model::CurveModel;
use super::point::{canonical, fiber_orbits, short_label, CurvePoint};
use crate::arith::{factor_rational, Alg, Matrix, NumberField, Poly, Rat, Scalar};
use crate::error::{PolarError, Result};

/// Integer combination of points. Keys are canonical orbit representatives;
/// the weight applies to every point of the orbit.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Divisor {
    pub support: BTreeMap<CurvePoint, i64>,
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_point(&mut self, p: CurvePoint, w: i64) {
        let e = self.support.entry(p).or_insert(0);
        *e += w;
        if *e == 0 {
            self.support.retain(|_, v| *v != 0);
        }
    }

    pub fn weight(&self, p: &CurvePoint) -> i64 {
        self.support.get(p).copied().unwrap_or(0)
    }

    /// Sum of weights over geometric points.
    pub fn degree(&self) -> i64 {
        self.support.iter().map(|(p, w)| w * p.orbit_size() as i64).sum()
    }

    pub fn poles(&self) -> impl Iterator<Item = (&CurvePoint, i64)> {
        self.support.iter().filter(|(_, w)| **w < 0).map(|(p, w)| (p, *w))
    }

    pub fn to_json(&self, curve: &CurveModel) -> serde_json::Value {
        serde_json::Value::Array(
            self.support
                .iter()
                .map(|(p, w)| serde_json::json!({ "point": p.to_json(curve), "orbit_size": p.orbit_size(), "weight": w }))
                .collect(),
        )
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.support.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.support.iter().map(|(p, w)| format!("{w}*{}", short_label(p))).collect();
        f.write_str(&parts.join(" + "))
    }
}

fn mult(p: &Poly<Rat>, m: &Poly<Rat>) -> Option<i64> {
    (!p.is_zero()).then(|| p.multiplicity(m) as i64)
}

fn deg(p: &Poly<Rat>) -> Option<i64> {
    (!p.is_zero()).then(|| p.deg())
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> i64 {
    match (a, b) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => unreachable!("nonzero form"),
    }
}

fn root_of(m: &Poly<Rat>) -> Alg {
    if m.deg() == 1 {
        Alg::from_rat(-m.coeff(0) / m.coeff(1))
    } else {
        NumberField::new_unchecked(m.monic()).generator()
    }
}

fn irreducible_factors(p: &Poly<Rat>) -> Vec<Poly<Rat>> {
    if p.is_constant() {
        return Vec::new();
    }
    factor_rational(p).1.into_iter().map(|(m, _)| m).collect()
}

fn rational_parts(w: &Differential1) -> Result<Vec<Poly<Rat>>> {
    if !w.is_rational() {
        return Err(PolarError::Unsupported("divisor of a form with irrational coefficients".into()));
    }
    let down = |p: &Poly<Alg>| p.map(|c| c.as_rat().expect("rational coefficient"));
    Ok(match w {
        Differential1::Line { r } => vec![down(r.num()), down(r.den())],
        Differential1::Hyper { a, b, c } => vec![down(a), down(b), down(c)],
    })
}

/// Divisor of a nonzero form with rational coefficients.
pub fn divisor_of(curve: &CurveModel, w: &Differential1) -> Result<Divisor> {
    w.check_curve(curve)?;
    if w.is_zero() {
        return Err(PolarError::ZeroDifferential);
    }
    let parts = rational_parts(w)?;
    let mut d = Divisor::new();
    match curve {
        CurveModel::ProjectiveLine => {
            let (n, den) = (&parts[0], &parts[1]);
            for (p, sign) in [(n, 1i64), (den, -1)] {
                for m in irreducible_factors(p) {
                    let k = p.multiplicity(&m) as i64;
                    d.add_point(CurvePoint::line(root_of(&m)), sign * k);
                }
            }
            d.add_point(CurvePoint::Infinity, den.deg() - n.deg() - 2);
        }
        CurveModel::HyperellipticOdd { f } => {
            let (a, b, c) = (&parts[0], &parts[1], &parts[2]);
            let n = f.deg();
            let norm = &(a * a) - &(&(b * b) * f);
            let mut cand: Vec<Poly<Rat>> = Vec::new();
            for part in [c, f, &norm] {
                for m in irreducible_factors(part) {
                    if !cand.contains(&m) {
                        cand.push(m);
                    }
                }
            }
            for m in cand {
                let cm = c.multiplicity(&m) as i64;
                if f.rem(&m).is_zero() {
                    let ord = min_opt(mult(a, &m).map(|v| 2 * v), mult(b, &m).map(|v| 2 * v + 1)) - 2 * cm;
                    let p = canonical(curve, &CurvePoint::affine(root_of(&m), Alg::zero()))?;
                    d.add_point(p, ord);
                    continue;
                }
                let k = min_opt(mult(a, &m), mult(b, &m));
                let mk = m.pow(k as u32);
                let a1 = a.exact_div(&mk).unwrap_or_else(Poly::zero);
                let b1 = b.exact_div(&mk).unwrap_or_else(Poly::zero);
                let n1 = &(&a1 * &a1) - &(&(&b1 * &b1) * f);
                let e = n1.multiplicity(&m) as i64;
                if e == 0 {
                    for p in fiber_orbits(curve, &m)? {
                        d.add_point(p, k - cm);
                    }
                } else {
                    let theta = root_of(&m);
                    let ya = a1.lift::<Alg>().eval(&theta);
                    let yb = b1.lift::<Alg>().eval(&theta);
                    let p = canonical(curve, &CurvePoint::affine(theta, -(ya / yb)))?;
                    let q = canonical(curve, &p.involution())?;
                    d.add_point(p, k + e - cm);
                    d.add_point(q, k - cm);
                }
            }
            let top = min_opt(deg(a).map(|v| -2 * v), deg(b).map(|v| -2 * v - n));
            d.add_point(CurvePoint::Infinity, top + 2 * c.deg() + n - 3);
        }
    }
    Ok(d)
}

/// Sum of the residues of `ω` over all of its poles (which must be simple).
pub fn residue_sum(curve: &CurveModel, w: &Differential1) -> Result<Alg> {
    let Some(k) = w.field()? else {
        return residue_sum_rational(curve, w).map(Alg::from_rat);
    };
    // Tr(θ^i S) is the residue sum of the traced form Tr(θ^i ω).
    let n = k.degree();
    let theta = k.generator();
    let mut rows = Vec::with_capacity(n);
    let mut rhs = Vec::with_capacity(n);
    let mut pw = Alg::one();
    for _ in 0..n {
        check_simple(curve, w)?;
        rhs.push(residue_sum_rational(curve, &w.scale(&pw).trace()?)?);
        let row: Vec<Rat> = (0..n).map(|j| (pw.clone() * theta.pow(j as u32)).trace_in(Some(&k))).collect();
        rows.push(row);
        pw = pw * theta.clone();
    }
    let s = Matrix::from_rows(rows, n)
        .solve(&rhs)
        .ok_or_else(|| PolarError::Invariant("trace form is degenerate".into()))?;
    Ok(Alg::from_coords(&k, &s))
}

fn check_simple(curve: &CurveModel, w: &Differential1) -> Result<()> {
    let t = w.trace()?;
    if t.is_zero() {
        return Ok(());
    }
    if let Some((p, v)) = rational_poles(curve, &t)?.into_iter().find(|(_, v)| *v < -1) {
        return Err(PolarError::HigherOrderPole { order: -v, at: short_label(&p) });
    }
    Ok(())
}

fn pole_candidates(curve: &CurveModel, w: &Differential1) -> Result<Vec<CurvePoint>> {
    let den = match w {
        Differential1::Line { r } => r.den(),
        Differential1::Hyper { c, .. } => c,
    };
    let coeffs: Option<Vec<Rat>> = den.coeffs().iter().map(|c| c.as_rat()).collect();
    let den = Poly::new(coeffs.ok_or(PolarError::FieldMismatch)?);
    let mut cands = vec![CurvePoint::Infinity];
    if !den.is_constant() {
        for (m, _) in factor_rational(&den).1 {
            cands.extend(fiber_orbits(curve, &m)?);
        }
    }
    Ok(cands)
}

/// Poles of a nonzero form with rational coefficients. Only the fibres over
/// the roots of the denominator and the points at infinity are examined.
pub fn rational_poles(curve: &CurveModel, w: &Differential1) -> Result<Vec<(CurvePoint, i64)>> {
    let mut out = Vec::new();
    for p in pole_candidates(curve, w)? {
        let v = ord_at(curve, w, &p)?;
        if v < 0 {
            out.push((p, v));
        }
    }
    Ok(out)
}

fn residue_sum_rational(curve: &CurveModel, w: &Differential1) -> Result<Rat> {
    if w.is_zero() {
        return Ok(Rat::zero());
    }
    let mut sum = Rat::zero();
    for p in pole_candidates(curve, w)? {
        let s = expansion(curve, w, &p, Some(-1))?;
        let v = s.valuation().expect("valuation is known");
        if v < -1 {
            return Err(PolarError::HigherOrderPole { order: -v, at: short_label(&p) });
        }
        if v == -1 {
            sum += s.coeff(-1).expect("precision covers t^-1").trace_in(p.field()?.as_ref());
        }
    }
    Ok(sum)
}

/// Global residue sum as a scalar; it vanishes for every form.
pub fn residue_sum_check(curve: &CurveModel, w: &Differential1) -> Result<Scalar> {
    Ok(Scalar::new(residue_sum(curve, w)?, 0))
}

/// `x^i dx/y` for `i < g`.
pub fn holomorphic_basis(curve: &CurveModel) -> Vec<Differential1> {
    (0..curve.genus())
        .map(|i| Differential1::hyper(Poly::monomial(Alg::one(), i), Poly::zero(), Poly::one()).expect("valid form"))
        .collect()
}

fn eta(curve: &CurveModel, p: &CurvePoint) -> Result<Differential1> {
    let half = Alg::from_rat(Rat::new(1.into(), 2.into()));
    match (curve, p) {
        (_, CurvePoint::Infinity) => Ok(Differential1::zero(curve)),
        (CurveModel::ProjectiveLine, CurvePoint::Affine { x, .. }) => {
            Ok(Differential1::line(crate::arith::RatFunc::new(Poly::one(), Poly::linear_root(x.clone()))))
        }
        (CurveModel::HyperellipticOdd { .. }, CurvePoint::Affine { x, y }) => Differential1::hyper(
            Poly::constant(y.clone() * half.clone()),
            Poly::constant(half),
            Poly::linear_root(x.clone()),
        ),
    }
}

/// Form with simple poles only at `p` and `q`, residues `+1` and `-1`.
pub fn third_kind(curve: &CurveModel, p: &CurvePoint, q: &CurvePoint) -> Result<Differential1> {
    p.validate(curve)?;
    q.validate(curve)?;
    if p == q {
        return Err(PolarError::SamePoint);
    }
    Alg::common_field(p.x().into_iter().chain(p.y()).chain(q.x()).chain(q.y()))?;
    eta(curve, p)?.sub(&eta(curve, q)?)
}
