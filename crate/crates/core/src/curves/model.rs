use num_traits::Zero;

use crate::arith::{format_rat, rat_sqrt, Poly, Rat};
use crate::error::{PolarError, Result};

/// The projective line or the smooth projective model of `y^2 = f(x)`
/// with `deg f` odd.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurveModel {
    ProjectiveLine,
    HyperellipticOdd { f: Poly<Rat> },
}

impl CurveModel {
    pub fn projective_line() -> Self {
        CurveModel::ProjectiveLine
    }

    /// Validates `f`: odd degree, squarefree, leading coefficient a square in Q.
    pub fn hyperelliptic(f: Poly<Rat>) -> Result<Self> {
        let d = f.deg();
        if d < 1 || d % 2 == 0 {
            return Err(PolarError::InvalidCurve(format!("deg f = {d} is not odd")));
        }
        if !f.is_squarefree() {
            return Err(PolarError::InvalidCurve(format!("f = {} is not squarefree", f.pretty("x"))));
        }
        if rat_sqrt(&f.lc()).is_none() {
            return Err(PolarError::InvalidCurve(format!(
                "leading coefficient {} of f is not a rational square",
                format_rat(&f.lc())
            )));
        }
        Ok(CurveModel::HyperellipticOdd { f })
    }

    /// `y^2 = f(x)` from integer coefficients, lowest degree first.
    pub fn hyperelliptic_ints(cs: &[i64]) -> Result<Self> {
        Self::hyperelliptic(Poly::from_ints(cs))
    }

    pub fn genus(&self) -> usize {
        match self {
            CurveModel::ProjectiveLine => 0,
            CurveModel::HyperellipticOdd { f } => ((f.deg() - 1) / 2) as usize,
        }
    }

    pub fn f(&self) -> Option<&Poly<Rat>> {
        match self {
            CurveModel::ProjectiveLine => None,
            CurveModel::HyperellipticOdd { f } => Some(f),
        }
    }

    pub fn is_line(&self) -> bool {
        matches!(self, CurveModel::ProjectiveLine)
    }

    /// `n = deg f` (odd); 0 for the line.
    pub fn degree(&self) -> usize {
        self.f().map_or(0, |f| f.deg() as usize)
    }

    /// Positive square root of the leading coefficient of `f`.
    pub(crate) fn sqrt_lc(&self) -> Rat {
        self.f().and_then(|f| rat_sqrt(&f.lc())).unwrap_or_else(|| Rat::from_integer(1.into()))
    }

    pub fn describe(&self) -> String {
        match self {
            CurveModel::ProjectiveLine => "P^1".into(),
            CurveModel::HyperellipticOdd { f } => format!("y^2 = {}", f.pretty("x")),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CurveModel::ProjectiveLine => serde_json::json!({ "kind": "p1" }),
            CurveModel::HyperellipticOdd { f } => serde_json::json!({
                "kind": "hyperelliptic_odd",
                "f": f.coeffs().iter().map(format_rat).collect::<Vec<_>>(),
            }),
        }
    }

    /// True if `x = a` is the x-coordinate of a Weierstrass point.
    pub fn is_weierstrass_x(&self, a: &Rat) -> bool {
        self.f().is_some_and(|f| f.eval(a).is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_and_validation() {
        assert_eq!(CurveModel::projective_line().genus(), 0);
        assert_eq!(CurveModel::hyperelliptic_ints(&[4, -4, 0, 1]).unwrap().genus(), 1);
        assert_eq!(CurveModel::hyperelliptic_ints(&[1, 1, 0, 0, 0, 1]).unwrap().genus(), 2);
        assert!(CurveModel::hyperelliptic_ints(&[1, 0, 1]).is_err());
        assert!(CurveModel::hyperelliptic_ints(&[0, 0, 0, 1]).is_err());
        assert!(CurveModel::hyperelliptic_ints(&[1, 0, 0, 2]).is_err());
        assert!(CurveModel::hyperelliptic_ints(&[1, 0, 0, 4]).is_ok());
    }
}
