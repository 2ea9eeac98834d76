use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::model::CurveModel;
use crate::arith::{
    factor_rational, format_rat, poly_from_power_sums, rat, rat_sqrt, Alg, Matrix, NumberField, Poly, Rat,
};
use crate::error::{PolarError, Result};

/// A point of a curve model.
///
/// On the projective line `Affine { x: z, y: 0 }` is the point `z`. Points
/// whose coordinates are irrational carry them as elements of one common
/// number field. In homology computations such a point stands for its full
/// Galois orbit; see [`canonical`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Alg, y: Alg },
}

impl CurvePoint {
    pub fn line(z: Alg) -> Self {
        CurvePoint::Affine { x: z, y: Alg::zero() }
    }

    pub fn line_rat(z: Rat) -> Self {
        Self::line(Alg::from_rat(z))
    }

    pub fn affine(x: Alg, y: Alg) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn rational(x: Rat, y: Rat) -> Self {
        CurvePoint::Affine { x: Alg::from_rat(x), y: Alg::from_rat(y) }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Self::rational(rat(x), rat(y))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&Alg> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&Alg> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { y, .. } => Some(y),
        }
    }

    /// Common field of the coordinates (`None` for rational points).
    pub fn field(&self) -> Result<Option<Arc<NumberField>>> {
        match self {
            CurvePoint::Infinity => Ok(None),
            CurvePoint::Affine { x, y } => Alg::common_field([x, y]),
        }
    }

    /// Number of geometric points in the orbit of a canonical representative.
    pub fn orbit_size(&self) -> usize {
        self.field().ok().flatten().map_or(1, |k| k.degree())
    }

    /// Checks field consistency and the curve equation.
    pub fn validate(&self, curve: &CurveModel) -> Result<()> {
        let CurvePoint::Affine { x, y } = self else {
            return Ok(());
        };
        if !x.compatible(y) {
            return Err(PolarError::FieldMismatch);
        }
        match curve.f() {
            None => {
                if !y.is_zero() {
                    return Err(PolarError::NotOnCurve(format!("{self} has a y-coordinate on P^1")));
                }
            }
            Some(f) => {
                let lhs = y.clone() * y.clone();
                let rhs = f.lift::<Alg>().eval(x);
                if lhs != rhs {
                    return Err(PolarError::NotOnCurve(format!("{self}")));
                }
            }
        }
        Ok(())
    }

    /// Fixed point of the hyperelliptic involution.
    pub fn is_weierstrass(&self, curve: &CurveModel) -> bool {
        !curve.is_line() && self.y().is_none_or(|y| y.is_zero())
    }

    /// Image under `(x, y) -> (x, -y)`.
    pub fn involution(&self) -> CurvePoint {
        match self {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine { x: x.clone(), y: -y.clone() },
        }
    }

    pub fn to_json(&self, curve: &CurveModel) -> serde_json::Value {
        match self {
            CurvePoint::Infinity => serde_json::Value::String("infinity".into()),
            CurvePoint::Affine { x, y } => {
                if curve.is_line() {
                    serde_json::json!({ "x": x.to_json() })
                } else {
                    serde_json::json!({ "x": x.to_json(), "y": y.to_json() })
                }
            }
        }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => f.write_str("∞"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

/// Coordinates of `v` in the power basis of `field`, as a column.
fn coords(v: &Alg, field: Option<&Arc<NumberField>>) -> Vec<Rat> {
    v.coords_in(field)
}

/// Writes `target` as `Σ c_i u^i`, `i < n`, inside `field`.
fn express_in_powers(u: &Alg, target: &Alg, n: usize, field: Option<&Arc<NumberField>>) -> Option<Vec<Rat>> {
    let d = field.map_or(1, |k| k.degree());
    let mut cols = Vec::with_capacity(n);
    let mut pw = Alg::one();
    for _ in 0..n {
        cols.push(coords(&pw, field));
        pw = pw * u.clone();
    }
    Matrix::from_cols(cols, d).solve(&coords(target, field))
}

/// Canonical representative of the Galois orbit of `p`.
///
/// The coordinates are rewritten in the field `Q[s]/(χ)` where `χ` is the
/// minimal polynomial of `u = y + k x` for the least `k ≥ 0` making `u`
/// primitive (of `z` itself on the line). Conjugate points therefore have
/// identical representatives.
pub fn canonical(curve: &CurveModel, p: &CurvePoint) -> Result<CurvePoint> {
    p.validate(curve)?;
    let CurvePoint::Affine { x, y } = p else {
        return Ok(CurvePoint::Infinity);
    };
    let field = Alg::common_field([x, y])?;
    let Some(k) = field.as_ref() else {
        return Ok(p.clone());
    };
    if curve.is_line() {
        let m = x.minpoly();
        let nf = NumberField::new_unchecked(m);
        return Ok(CurvePoint::line(nf.generator()));
    }
    let mx = x.minpoly();
    let e = mx.deg() as usize;
    let y_in_qx = express_in_powers(x, y, e, Some(k)).is_some();
    let n = if y_in_qx { e } else { 2 * e };
    if n == 1 {
        return Ok(CurvePoint::Affine { x: Alg::from_rat(x.as_rat().unwrap()), y: Alg::from_rat(y.as_rat().unwrap()) });
    }
    for shift in 0i64.. {
        let u = y.clone() + Alg::int(shift) * x.clone();
        let chi = u.minpoly();
        if chi.deg() as usize != n {
            continue;
        }
        let nf = NumberField::new_unchecked(chi);
        let cx = express_in_powers(&u, x, n, Some(k))
            .ok_or_else(|| PolarError::Invariant("primitive element does not generate x".into()))?;
        let xr = Alg::from_coords(&nf, &cx);
        let yr = nf.generator() - Alg::int(shift) * xr.clone();
        return Ok(CurvePoint::Affine { x: xr, y: yr });
    }
    unreachable!()
}

/// Canonical representatives of every orbit of points whose x-coordinate
/// is a root of the monic irreducible `m` (the points of the line when the
/// curve is `P^1`).
pub fn fiber_orbits(curve: &CurveModel, m: &Poly<Rat>) -> Result<Vec<CurvePoint>> {
    let m = m.monic();
    let e = m.deg() as usize;
    if e == 0 {
        return Err(PolarError::Precondition("fiber over a constant polynomial".into()));
    }
    let theta = if e == 1 { Alg::from_rat(-m.coeff(0)) } else { NumberField::new_unchecked(m.clone()).generator() };
    let Some(f) = curve.f() else {
        return Ok(vec![CurvePoint::line(theta)]);
    };
    if f.rem(&m).is_zero() {
        return Ok(vec![canonical(curve, &CurvePoint::affine(theta, Alg::zero()))?]);
    }
    if e == 1 {
        let a = theta.as_rat().unwrap();
        let d = f.eval(&a);
        return Ok(match rat_sqrt(&d) {
            Some(s) => vec![CurvePoint::rational(a.clone(), -s.clone()), CurvePoint::rational(a, s)],
            None => {
                let nf = NumberField::new_unchecked(Poly::new(vec![-d, Rat::zero(), Rat::one()]));
                vec![canonical(curve, &CurvePoint::affine(Alg::from_rat(a), nf.generator()))?]
            }
        });
    }
    let lf = theta.field().cloned();
    let d = f.lift::<Alg>().eval(&theta);
    let tower = Tower { d: d.clone() };
    for shift in 0i64.. {
        let u = (Alg::int(shift) * theta.clone(), Alg::one());
        let mut pw = (Alg::one(), Alg::zero());
        let mut sums = vec![Rat::zero()];
        let mut cols = Vec::with_capacity(2 * e);
        for j in 0..=2 * e {
            if j < 2 * e {
                let mut c = pw.0.coords_in(lf.as_ref());
                c.extend(pw.1.coords_in(lf.as_ref()));
                cols.push(c);
            }
            if j > 0 {
                sums.push(rat(2) * pw.0.trace_in(lf.as_ref()));
            }
            pw = tower.mul(&pw, &u);
        }
        let chi = poly_from_power_sums(&sums, 2 * e);
        if !chi.is_squarefree() {
            continue;
        }
        let mut target = theta.coords_in(lf.as_ref());
        target.extend(vec![Rat::zero(); e]);
        let c = Matrix::from_cols(cols, 2 * e)
            .solve(&target)
            .ok_or_else(|| PolarError::Invariant("tower element is not primitive".into()))?;
        let (_, factors) = factor_rational(&chi);
        let mut out = Vec::new();
        for (h, _) in factors {
            let nf = NumberField::new_unchecked(h);
            let xr = Alg::from_coords(&nf, &c);
            let yr = nf.generator() - Alg::int(shift) * xr.clone();
            out.push(canonical(curve, &CurvePoint::affine(xr, yr))?);
        }
        out.sort();
        return Ok(out);
    }
    unreachable!()
}

/// `L[w]/(w^2 - d)` with elements `(p, q) = p + q w`.
struct Tower {
    d: Alg,
}

impl Tower {
    fn mul(&self, a: &(Alg, Alg), b: &(Alg, Alg)) -> (Alg, Alg) {
        (
            a.0.clone() * b.0.clone() + a.1.clone() * b.1.clone() * self.d.clone(),
            a.0.clone() * b.1.clone() + a.1.clone() * b.0.clone(),
        )
    }
}

/// Minimal polynomial of the x-coordinate of an affine point.
pub fn x_minpoly(p: &CurvePoint) -> Option<Poly<Rat>> {
    p.x().map(|x| x.minpoly())
}

/// Galois closure of a point set, as canonical orbit representatives.
pub fn orbit_set(curve: &CurveModel, points: &[CurvePoint]) -> Result<BTreeSet<CurvePoint>> {
    points.iter().map(|p| canonical(curve, p)).collect()
}

/// Number of geometric points in a set of orbit representatives.
pub fn geometric_count(set: &BTreeSet<CurvePoint>) -> usize {
    set.iter().map(|p| p.orbit_size()).sum()
}

/// Renders a rational coordinate pair compactly for diagnostics.
pub fn short_label(p: &CurvePoint) -> String {
    match p {
        CurvePoint::Infinity => "∞".into(),
        CurvePoint::Affine { x, y } => match (x.as_rat(), y.as_rat()) {
            (Some(a), Some(b)) => format!("({}, {})", format_rat(&a), format_rat(&b)),
            _ => {
                let m = x.minpoly();
                format!("orbit[x: {} = 0, size {}]", m.pretty("x"), p.orbit_size())
            }
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g2() -> CurveModel {
        CurveModel::hyperelliptic_ints(&[1, 1, 0, 0, 0, 1]).unwrap()
    }

    #[test]
    fn conjugate_points_share_a_representative() {
        let c = g2();
        // x^2 - 2x - 1 = 0, y = -2 - 3x lies on y^2 = x^5 + x + 1.
        let k = NumberField::new(&Poly::from_ints(&[-1, -2, 1])).unwrap();
        let t = k.generator();
        let p = CurvePoint::affine(t.clone(), Alg::int(-2) - Alg::int(3) * t.clone());
        p.validate(&c).unwrap();
        let conj_x = Alg::int(2) - t.clone();
        let q = CurvePoint::affine(conj_x.clone(), Alg::int(-2) - Alg::int(3) * conj_x);
        q.validate(&c).unwrap();
        assert_ne!(p, q);
        assert_eq!(canonical(&c, &p).unwrap(), canonical(&c, &q).unwrap());
        assert_ne!(canonical(&c, &p).unwrap(), canonical(&c, &p.involution()).unwrap());
        assert_eq!(canonical(&c, &p).unwrap().orbit_size(), 2);
    }

    #[test]
    fn fibers_over_rational_and_irrational_x() {
        let c = g2();
        let over0 = fiber_orbits(&c, &Poly::from_ints(&[0, 1])).unwrap();
        assert_eq!(over0, vec![CurvePoint::ints(0, -1), CurvePoint::ints(0, 1)]);
        let over1 = fiber_orbits(&c, &Poly::from_ints(&[-1, 1])).unwrap();
        assert_eq!(over1.len(), 1);
        assert_eq!(over1[0].orbit_size(), 2);
        // x^2 - 2x - 1: f(θ) is a square in Q(θ), so the fiber splits.
        let split = fiber_orbits(&c, &Poly::from_ints(&[-1, -2, 1])).unwrap();
        assert_eq!(split.len(), 2);
        for p in &split {
            p.validate(&c).unwrap();
            assert_eq!(p.orbit_size(), 2);
        }
        // x^2 - 2: the fiber is one orbit of size 4.
        let whole = fiber_orbits(&c, &Poly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!(whole.len(), 1);
        assert_eq!(whole[0].orbit_size(), 4);
        whole[0].validate(&c).unwrap();
        // Weierstrass orbit of the quadratic factor of f.
        let w = fiber_orbits(&c, &Poly::from_ints(&[1, 1, 1])).unwrap();
        assert_eq!(w.len(), 1);
        assert!(w[0].is_weierstrass(&c));
    }

    #[test]
    fn projective_line_orbits() {
        let l = CurveModel::projective_line();
        let o = fiber_orbits(&l, &Poly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!(o.len(), 1);
        assert_eq!(o[0].orbit_size(), 2);
        let k = NumberField::new(&Poly::from_ints(&[-2, 0, 1])).unwrap();
        let z = CurvePoint::line(Alg::int(3) * k.generator());
        assert_eq!(canonical(&l, &z).unwrap().x().unwrap().minpoly(), Poly::from_ints(&[-18, 0, 1]));
    }
}
