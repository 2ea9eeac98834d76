use num_traits::Zero;

use crate::arith::{factor_rational, format_rat, resultant, Alg, MPoly, NumberField, Poly, Rat};
use crate::error::{PolarError, Result};

/// One Galois orbit of intersection points, given by a representative with
/// coordinates in `Q[X]/(minpoly)` where `X = s + shear·t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointGroup {
    pub minpoly: Poly<Rat>,
    pub shear: i64,
    pub point: [Alg; 2],
}

impl PointGroup {
    pub fn size(&self) -> usize {
        self.minpoly.deg() as usize
    }

    pub fn field(&self) -> Option<std::sync::Arc<NumberField>> {
        Alg::common_field(self.point.iter()).ok().flatten()
    }

    /// Sum of `value` over all conjugate points.
    pub fn trace(&self, value: &Alg) -> Rat {
        value.trace_in(self.field().as_ref())
    }

    pub fn label(&self) -> String {
        match (self.point[0].as_rat(), self.point[1].as_rat()) {
            (Some(s), Some(t)) => format!("({}, {})", s, t),
            _ => format!("{} conjugate points over {} = 0", self.size(), self.minpoly.pretty("X")),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "minpoly": self.minpoly.coeffs().iter().map(format_rat).collect::<Vec<_>>(),
            "shear": self.shear,
            "size": self.size(),
            "point": [self.point[0].to_json(), self.point[1].to_json()],
        })
    }
}

/// `g(X − c t, t)` in variables `(X, t)`.
fn sheared(g: &MPoly, c: i64) -> MPoly {
    let x = &MPoly::var(2, 0) - &MPoly::var(2, 1).scale(&Rat::from_integer(c.into()));
    g.substitute(&[x, MPoly::var(2, 1)])
}

/// Coefficients in `t` of a polynomial in `(X, t)`, evaluated at `X = θ`.
fn at_x(g: &MPoly, theta: &Alg) -> Poly<Alg> {
    let cs = g.coeffs_in(1);
    Poly::new(cs.iter().map(|c| c.to_univariate(0).expect("univariate in X").lift::<Alg>().eval(theta)).collect())
}

fn root_of(m: &Poly<Rat>) -> Alg {
    if m.deg() == 1 {
        Alg::from_rat(-m.coeff(0) / m.coeff(1))
    } else {
        NumberField::new_unchecked(m.monic()).generator()
    }
}

const MAX_SHEAR: i64 = 12;

/// Common zeros of two plane curves, grouped into Galois orbits, with
/// transversality certified by the Jacobian at each group.
pub fn transverse_points(a: &MPoly, b: &MPoly) -> Result<Vec<PointGroup>> {
    if a.nvars() != 2 || b.nvars() != 2 {
        return Err(PolarError::Precondition("curves must be bivariate".into()));
    }
    'shear: for c in 0..=MAX_SHEAR {
        let (sa, sb) = (sheared(a, c), sheared(b, c));
        if sa.degree_in(1) <= 0 && sb.degree_in(1) <= 0 {
            continue;
        }
        let r = match resultant(&sa, &sb) {
            Ok(r) => r,
            Err(PolarError::ConstantInEliminated) => continue,
            Err(e) => return Err(e),
        };
        if r.is_zero() {
            return Err(PolarError::Precondition("curves share a component".into()));
        }
        if r.is_constant() {
            return Ok(Vec::new());
        }
        let mut groups = Vec::new();
        for (m, _) in factor_rational(&r).1 {
            let theta = root_of(&m);
            let g = Poly::gcd(&at_x(&sa, &theta), &at_x(&sb, &theta));
            match g.deg() {
                0 => continue,
                1 => {}
                _ => continue 'shear,
            }
            let t = -(g.coeff(0) / g.coeff(1));
            let s = theta.clone() - Alg::int(c) * t.clone();
            let p = [s, t];
            let jac = a.derivative(0).eval(&p) * b.derivative(1).eval(&p)
                - a.derivative(1).eval(&p) * b.derivative(0).eval(&p);
            let group = PointGroup { minpoly: m.monic(), shear: c, point: p };
            if jac.is_zero() {
                return Err(PolarError::NonTransverse(group.label()));
            }
            groups.push(group);
        }
        groups.sort_by(|x, y| (x.minpoly.deg(), &x.minpoly).cmp(&(y.minpoly.deg(), &y.minpoly)));
        return Ok(groups);
    }
    Err(PolarError::Unsupported("no separating projection found".into()))
}
