use num_traits::{One, Zero};

use super::differential::Differential1;
use super::model::CurveModel;
use super::point::{short_label, CurvePoint};
use crate::arith::{Alg, Field, Laurent, Poly, Scalar};
use crate::error::{PolarError, Result};

const START_WORK: usize = 8;
const MAX_WORK: usize = 4096;

/// Local parametrization of a neighbourhood of a point: `x(t)`, `y(t)` and
/// `dx/dt`. On the line `x` is the coordinate `z` and `y` is unused.
#[derive(Clone, Debug)]
pub struct Chart {
    pub x: Laurent<Alg>,
    pub y: Laurent<Alg>,
    pub dx: Laurent<Alg>,
    work: usize,
}

impl Chart {
    pub fn new(curve: &CurveModel, p: &CurvePoint, work: usize) -> Result<Chart> {
        p.validate(curve)?;
        let t = Laurent::monomial(Alg::one(), 1);
        match (curve, p) {
            (CurveModel::ProjectiveLine, CurvePoint::Infinity) => Ok(Chart {
                x: Laurent::monomial(Alg::one(), -1),
                y: Laurent::zero(),
                dx: Laurent::monomial(Alg::int(-1), -2),
                work,
            }),
            (CurveModel::ProjectiveLine, CurvePoint::Affine { x, .. }) => Ok(Chart {
                x: Laurent::monomial(x.clone(), 0).add(&t),
                y: Laurent::zero(),
                dx: Laurent::monomial(Alg::one(), 0),
                work,
            }),
            (CurveModel::HyperellipticOdd { f }, CurvePoint::Infinity) => {
                let n = f.deg() as usize;
                let mut u = vec![Alg::zero(); 2 * n + 1];
                for (i, c) in f.coeffs().iter().enumerate() {
                    u[2 * (n - i)] = Alg::from_rat(c.clone());
                }
                let u = Laurent::exact(0, u).sqrt(Alg::from_rat(curve.sqrt_lc()), work)?;
                Ok(Chart {
                    x: Laurent::monomial(Alg::one(), -2),
                    y: u.shift(-(n as i64)),
                    dx: Laurent::monomial(Alg::int(-2), -3),
                    work,
                })
            }
            (CurveModel::HyperellipticOdd { f }, CurvePoint::Affine { x, y }) => {
                let fl = f.lift::<Alg>();
                if y.is_zero() {
                    // y = s, x = e + h(s) with s^2 = f(e + h).
                    let g = fl.shift(x);
                    let c1 = g.coeff(1);
                    let tail = Poly::new(g.coeffs().iter().skip(2).cloned().collect());
                    let s2 = Laurent::monomial(Alg::one(), 2);
                    let prec = work as i64 + 4;
                    let c1inv = c1.inv();
                    let mut h = s2.scale(&c1inv).truncate(prec);
                    for _ in 0..(prec / 2 + 1) {
                        let corr = h.mul(&h).mul(&h.compose_poly(&tail));
                        h = s2.sub(&corr).scale(&c1inv).truncate(prec);
                    }
                    Ok(Chart { x: Laurent::monomial(x.clone(), 0).add(&h), y: t, dx: h.derivative(), work })
                } else {
                    let g = fl.shift(x);
                    let y = Laurent::from_poly(&g).sqrt(y.clone(), work)?;
                    Ok(Chart {
                        x: Laurent::monomial(x.clone(), 0).add(&t),
                        y,
                        dx: Laurent::monomial(Alg::one(), 0),
                        work,
                    })
                }
            }
        }
    }

    /// Expansion of `ω = φ(t) dt`, returning `φ`.
    pub fn expand(&self, w: &Differential1) -> Result<Laurent<Alg>> {
        match w {
            Differential1::Line { r } => {
                let n = self.x.compose_poly(r.num());
                let d = self.x.compose_poly(r.den());
                Ok(n.div(&d, self.work)?.mul(&self.dx))
            }
            Differential1::Hyper { a, b, c } => {
                let num = self.x.compose_poly(a).add(&self.x.compose_poly(b).mul(&self.y));
                let den = self.x.compose_poly(c).mul(&self.y);
                Ok(num.div(&den, self.work)?.mul(&self.dx))
            }
        }
    }
}

fn check_fields(w: &Differential1, p: &CurvePoint) -> Result<()> {
    if let (Some(a), Some(b)) = (w.field()?, p.field()?) {
        if !crate::arith::NumberField::same(&a, &b) {
            return Err(PolarError::FieldMismatch);
        }
    }
    Ok(())
}

/// Local expansion of `ω` at `p` with every coefficient up to `t^need`
/// known, or up to the first nonzero one when `need` is `None`.
pub fn expansion(curve: &CurveModel, w: &Differential1, p: &CurvePoint, need: Option<i64>) -> Result<Laurent<Alg>> {
    w.check_curve(curve)?;
    if w.is_zero() {
        return Err(PolarError::ZeroDifferential);
    }
    check_fields(w, p)?;
    let mut work = START_WORK;
    while work <= MAX_WORK {
        let s = Chart::new(curve, p, work)?.expand(w)?;
        let ok = match need {
            Some(k) => s.prec().is_none_or(|pr| pr > k) && s.valuation().is_some(),
            None => s.valuation().is_some(),
        };
        if ok {
            return Ok(s);
        }
        work *= 2;
    }
    Err(PolarError::InsufficientPrecision)
}

/// Coefficients of `t^k` for `k` in `lo..=hi` of the expansions of all
/// `forms` at `p`, indexed `[form][k - lo]`.
pub fn local_coefficients(
    curve: &CurveModel,
    forms: &[Differential1],
    p: &CurvePoint,
    lo: i64,
    hi: i64,
) -> Result<Vec<Vec<Alg>>> {
    let width = (hi - lo + 1).max(0) as usize;
    let mut out = vec![vec![Alg::zero(); width]; forms.len()];
    let mut pending: Vec<usize> = Vec::new();
    for (i, w) in forms.iter().enumerate() {
        w.check_curve(curve)?;
        check_fields(w, p)?;
        if !w.is_zero() {
            pending.push(i);
        }
    }
    let mut work = START_WORK;
    while !pending.is_empty() {
        if work > MAX_WORK {
            return Err(PolarError::InsufficientPrecision);
        }
        let chart = Chart::new(curve, p, work)?;
        let mut left = Vec::new();
        for i in pending {
            let s = chart.expand(&forms[i])?;
            if s.prec().is_some_and(|pr| pr <= hi) {
                left.push(i);
                continue;
            }
            for k in lo..=hi {
                out[i][(k - lo) as usize] = s.coeff(k).expect("within precision");
            }
        }
        pending = left;
        work *= 2;
    }
    Ok(out)
}

/// Order of `ω` at `p` in the local parameter of the chart.
pub fn ord_at(curve: &CurveModel, w: &Differential1, p: &CurvePoint) -> Result<i64> {
    let s = expansion(curve, w, p, None)?;
    Ok(s.valuation().expect("valuation is known"))
}

/// Coefficient of `dt/t`, as an element of the field of `p` and `ω`.
pub fn residue_value(curve: &CurveModel, w: &Differential1, p: &CurvePoint) -> Result<Alg> {
    if w.is_zero() {
        return Ok(Alg::zero());
    }
    let s = expansion(curve, w, p, Some(-1))?;
    let v = s.valuation().expect("valuation is known");
    if v < -1 {
        return Err(PolarError::HigherOrderPole { order: -v, at: short_label(p) });
    }
    Ok(s.coeff(-1).expect("precision covers t^-1"))
}

/// Residue of `ω` at `p` with `tau_power` 0.
pub fn residue_at(curve: &CurveModel, w: &Differential1, p: &CurvePoint) -> Result<Scalar> {
    Ok(Scalar::new(residue_value(curve, w, p)?, 0))
}
