use num_traits::Zero;

use crate::arith::{Alg, MPoly};
use crate::error::{PolarError, Result};

/// A rational 1-form on the plane curve `F(s, t) = 0`, stored as
/// `(num/den)·ds/F_t`; equivalently its value on the tangent
/// `u = (F_t, −F_s)` is `num/den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveForm {
    pub curve: MPoly,
    pub num: MPoly,
    pub den: MPoly,
}

impl CurveForm {
    /// The form `(p ds + q dt)/d` restricted to the curve.
    pub fn from_components(curve: &MPoly, p: &MPoly, q: &MPoly, d: &MPoly) -> Result<CurveForm> {
        if d.is_zero() {
            return Err(PolarError::ZeroPolynomial);
        }
        let ft = curve.derivative(1);
        let fs = curve.derivative(0);
        Ok(CurveForm { curve: curve.clone(), num: &(p * &ft) - &(q * &fs), den: d.clone() })
    }

    /// `ds/F_t`, the holomorphic form of a smooth plane cubic.
    pub fn canonical(curve: &MPoly) -> CurveForm {
        CurveForm { curve: curve.clone(), num: MPoly::one(2), den: MPoly::one(2) }
    }

    pub fn scale(&self, k: &crate::arith::Rat) -> CurveForm {
        CurveForm { curve: self.curve.clone(), num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero() || self.num.exact_div(&self.curve).is_some()
    }

    /// Value on the tangent `(F_t, −F_s)` at a point of the curve.
    pub fn on_tangent(&self, p: &[Alg; 2]) -> Result<Alg> {
        let d = self.den.eval(p);
        if d.is_zero() {
            return Err(PolarError::Precondition("form has a pole at an evaluation point".into()));
        }
        Ok(self.num.eval(p) / d)
    }

    /// Equality of restrictions to the curve.
    pub fn same_on_curve(&self, o: &CurveForm) -> bool {
        if self.curve != o.curve {
            return false;
        }
        let diff = &(&self.num * &o.den) - &(&o.num * &self.den);
        diff.is_zero() || self.curve.divides(&diff)
    }

    pub fn pretty(&self) -> String {
        let names = ["s", "t"];
        format!(
            "({})/({}) ds/F_t on {} = 0",
            self.num.pretty(&names),
            self.den.pretty(&names),
            self.curve.pretty(&names)
        )
    }
}

/// Poincaré residue of `num/den · ds∧dt` along `F = 0`, where `F` divides
/// `den`: writing the form as `(dF/F) ∧ ρ` gives `ρ = −G ds/(H F_t)` with
/// `G/H = num/(den/F)`.
pub fn residue_2form_along_curve(num: &MPoly, den: &MPoly, f: &MPoly) -> Result<CurveForm> {
    let h = den.exact_div(f).ok_or_else(|| PolarError::Precondition("curve is not a pole component".into()))?;
    if !num.is_zero() && f.divides(num) {
        return Err(PolarError::Precondition("numerator vanishes on the pole curve".into()));
    }
    if f.divides(&h) {
        return Err(PolarError::HigherOrderPole { order: 2, at: "pole curve".into() });
    }
    Ok(CurveForm { curve: f.clone(), num: -num, den: h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rat;

    fn poly(terms: &[((u32, u32), i64)]) -> MPoly {
        MPoly::from_terms(2, terms.iter().map(|((i, j), c)| (vec![*i, *j], Rat::from_integer((*c).into()))))
    }

    #[test]
    fn residue_along_coordinate_axis() {
        // β = dx∧dy/(x y) along x = 0 is dy/y.
        let x = poly(&[((1, 0), 1)]);
        let xy = poly(&[((1, 1), 1)]);
        let r = residue_2form_along_curve(&MPoly::one(2), &xy, &x).unwrap();
        let dy_y = CurveForm::from_components(&x, &MPoly::zero(2), &MPoly::one(2), &poly(&[((0, 1), 1)])).unwrap();
        assert!(r.same_on_curve(&dy_y));
    }

    #[test]
    fn residue_on_cubic() {
        let f = poly(&[((0, 2), 1), ((3, 0), -1), ((1, 0), 4), ((0, 0), -4)]);
        let r = residue_2form_along_curve(&MPoly::one(2), &f, &f).unwrap();
        let two_y = poly(&[((0, 1), 2)]);
        let dx_2y = CurveForm::from_components(&f, &MPoly::one(2), &MPoly::zero(2), &two_y).unwrap();
        assert!(r.same_on_curve(&dx_2y.scale(&Rat::from_integer((-1).into()))));
        assert!(!r.same_on_curve(&dx_2y.scale(&Rat::from_integer((-2).into()))));
    }
}
