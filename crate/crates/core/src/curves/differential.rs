use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::model::CurveModel;
use crate::arith::{bareiss_det_poly, Alg, Field, NumberField, Poly, Rat, RatFunc};
use crate::error::{PolarError, Result};

/// Rational 1-form on a curve model.
///
/// `Line { r }` is `r(z) dz`. `Hyper { a, b, c }` is `(a(x) + b(x) y)/c(x) · dx/y`,
/// kept with `gcd(a, b, c) = 1` and `c` monic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Differential1 {
    Line { r: RatFunc<Alg> },
    Hyper { a: Poly<Alg>, b: Poly<Alg>, c: Poly<Alg> },
}

impl Differential1 {
    pub fn line(r: RatFunc<Alg>) -> Self {
        Differential1::Line { r }
    }

    /// `num(z)/den(z) dz` with rational coefficients.
    pub fn line_rat(num: &Poly<Rat>, den: &Poly<Rat>) -> Self {
        Differential1::Line { r: RatFunc::new(num.lift(), den.lift()) }
    }

    pub fn hyper(a: Poly<Alg>, b: Poly<Alg>, c: Poly<Alg>) -> Result<Self> {
        if c.is_zero() {
            return Err(PolarError::ZeroPolynomial);
        }
        if a.is_zero() && b.is_zero() {
            return Ok(Differential1::Hyper { a, b, c: Poly::one() });
        }
        let g = Poly::gcd(&Poly::gcd(&a, &b), &c);
        let a = a.exact_div(&g).expect("gcd divides");
        let b = b.exact_div(&g).expect("gcd divides");
        let c = c.exact_div(&g).expect("gcd divides");
        let k = c.lc().inv();
        Ok(Differential1::Hyper { a: a.scale(&k), b: b.scale(&k), c: c.scale(&k) })
    }

    pub fn hyper_rat(a: &Poly<Rat>, b: &Poly<Rat>, c: &Poly<Rat>) -> Result<Self> {
        Self::hyper(a.lift(), b.lift(), c.lift())
    }

    /// The zero form of the given curve.
    pub fn zero(curve: &CurveModel) -> Self {
        match curve {
            CurveModel::ProjectiveLine => Differential1::Line { r: RatFunc::zero() },
            CurveModel::HyperellipticOdd { .. } => {
                Differential1::Hyper { a: Poly::zero(), b: Poly::zero(), c: Poly::one() }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Differential1::Line { r } => r.is_zero(),
            Differential1::Hyper { a, b, .. } => a.is_zero() && b.is_zero(),
        }
    }

    /// Checks that the form belongs to the curve's kind.
    pub fn check_curve(&self, curve: &CurveModel) -> Result<()> {
        match (self, curve) {
            (Differential1::Line { .. }, CurveModel::ProjectiveLine)
            | (Differential1::Hyper { .. }, CurveModel::HyperellipticOdd { .. }) => Ok(()),
            _ => Err(PolarError::Precondition("differential does not match the curve kind".into())),
        }
    }

    fn coefficients(&self) -> Vec<&Alg> {
        match self {
            Differential1::Line { r } => r.num().coeffs().iter().chain(r.den().coeffs()).collect(),
            Differential1::Hyper { a, b, c } => a.coeffs().iter().chain(b.coeffs()).chain(c.coeffs()).collect(),
        }
    }

    /// Field generated by the coefficients (`None` if rational).
    pub fn field(&self) -> Result<Option<Arc<NumberField>>> {
        Alg::common_field(self.coefficients())
    }

    pub fn is_rational(&self) -> bool {
        self.coefficients().iter().all(|c| c.is_rational())
    }

    pub fn add(&self, o: &Differential1) -> Result<Differential1> {
        Alg::common_field(self.coefficients().into_iter().chain(o.coefficients()))?;
        match (self, o) {
            (Differential1::Line { r: r1 }, Differential1::Line { r: r2 }) => Ok(Differential1::Line { r: r1 + r2 }),
            (Differential1::Hyper { a: a1, b: b1, c: c1 }, Differential1::Hyper { a: a2, b: b2, c: c2 }) => {
                if c1 == c2 {
                    return Self::hyper(a1 + a2, b1 + b2, c1.clone());
                }
                let a = &(a1 * c2) + &(a2 * c1);
                let b = &(b1 * c2) + &(b2 * c1);
                Self::hyper(a, b, c1 * c2)
            }
            _ => Err(PolarError::Precondition("adding differentials on different curves".into())),
        }
    }

    pub fn sub(&self, o: &Differential1) -> Result<Differential1> {
        self.add(&o.scale(&Alg::int(-1)))
    }

    pub fn scale(&self, k: &Alg) -> Differential1 {
        match self {
            Differential1::Line { r } => Differential1::Line { r: r.scale(k) },
            Differential1::Hyper { a, b, c } => {
                if k.is_zero() {
                    return Differential1::Hyper { a: Poly::zero(), b: Poly::zero(), c: Poly::one() };
                }
                Differential1::Hyper { a: a.scale(k), b: b.scale(k), c: c.clone() }
            }
        }
    }

    /// Galois trace down to a form with rational coefficients:
    /// the sum of all conjugates of `self`.
    pub fn trace(&self) -> Result<Differential1> {
        let Some(k) = self.field()? else {
            return Ok(self.clone());
        };
        match self {
            Differential1::Line { r } => {
                let n = norm_poly(r.den(), &k);
                let co = n.lift::<Alg>().exact_div(r.den()).expect("norm is divisible");
                let num = trace_poly(&(r.num() * &co), &k);
                Ok(Differential1::Line { r: RatFunc::new(num.lift(), n.lift()) })
            }
            Differential1::Hyper { a, b, c } => {
                let n = norm_poly(c, &k);
                let co = n.lift::<Alg>().exact_div(c).expect("norm is divisible");
                let ta = trace_poly(&(a * &co), &k);
                let tb = trace_poly(&(b * &co), &k);
                Self::hyper_rat(&ta, &tb, &n)
            }
        }
    }

    /// Renders the form with rational coefficients; irrational ones are
    /// shown through their field representation.
    pub fn pretty(&self) -> String {
        fn show(p: &Poly<Alg>, v: &str) -> String {
            if p.coeffs().iter().all(|c| c.is_rational()) {
                p.map(|c| c.as_rat().unwrap()).pretty(v)
            } else {
                let terms: Vec<String> = p
                    .coeffs()
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| format!("{c}*{v}^{i}"))
                    .collect();
                terms.join(" + ")
            }
        }
        let over = |num: String, den: &Poly<Alg>, v: &str, tail: &str| {
            if den.deg() == 0 && den.coeff(0) == Alg::one() {
                format!("({num}) {tail}")
            } else {
                format!("({num})/({}) {tail}", show(den, v))
            }
        };
        match self {
            Differential1::Line { r } => over(show(r.num(), "z"), r.den(), "z", "dz"),
            Differential1::Hyper { a, b, c } => {
                let num = if b.is_zero() {
                    show(a, "x")
                } else if a.is_zero() {
                    format!("({})*y", show(b, "x"))
                } else {
                    format!("{} + ({})*y", show(a, "x"), show(b, "x"))
                };
                over(num, c, "x", "dx/y")
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let enc = |p: &Poly<Alg>| serde_json::Value::Array(p.coeffs().iter().map(|c| c.to_json()).collect());
        match self {
            Differential1::Line { r } => {
                serde_json::json!({ "num": enc(r.num()), "den": enc(r.den()) })
            }
            Differential1::Hyper { a, b, c } => {
                serde_json::json!({ "a": enc(a), "b": enc(b), "c": enc(c) })
            }
        }
    }
}

impl fmt::Display for Differential1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// Coefficientwise trace of a polynomial over `k`.
fn trace_poly(p: &Poly<Alg>, k: &Arc<NumberField>) -> Poly<Rat> {
    Poly::new(p.coeffs().iter().map(|c| c.trace_in(Some(k))).collect())
}

/// Norm `N_{K(x)/Q(x)}(p)`: determinant of multiplication by `p` on `K[x]`
/// viewed as a free `Q[x]`-module with basis `1, θ, …, θ^{d-1}`.
#[allow(clippy::needless_range_loop)]
pub fn norm_poly(p: &Poly<Alg>, k: &Arc<NumberField>) -> Poly<Rat> {
    let d = k.degree();
    let theta = k.generator();
    let mut m = vec![vec![Poly::<Rat>::zero(); d]; d];
    let mut basis = Alg::one();
    for j in 0..d {
        // column j: coordinates of p · θ^j.
        let col: Vec<Vec<Rat>> = p.coeffs().iter().map(|c| (c.clone() * basis.clone()).coords_in(Some(k))).collect();
        for i in 0..d {
            m[i][j] = Poly::new(col.iter().map(|v| v[i].clone()).collect());
        }
        basis = basis * theta.clone();
    }
    bareiss_det_poly(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};

    #[test]
    fn canonical_reduction() {
        let x = Poly::<Rat>::from_ints(&[0, 1]);
        let w = Differential1::hyper_rat(&(&x * &x), &x.scale(&rat(2)), &(&x * &Poly::from_ints(&[1, 2]))).unwrap();
        let Differential1::Hyper { a, b, c } = &w else { panic!() };
        assert_eq!(c, &Poly::from_ints(&[1, 2]).lift::<Alg>().monic());
        assert_eq!(a, &Poly::from_rats(vec![rat(0), ratio(1, 2)]).lift());
        assert_eq!(b, &Poly::<Rat>::one().lift());
    }

    #[test]
    fn trace_of_line_form() {
        // Tr over Q(√2) of dz/(z - √2) is 2z/(z^2 - 2) dz.
        let k = NumberField::new(&Poly::from_ints(&[-2, 0, 1])).unwrap();
        let s2 = k.generator();
        let w = Differential1::line(RatFunc::new(Poly::one(), Poly::linear_root(s2)));
        let t = w.trace().unwrap();
        assert_eq!(t, Differential1::line_rat(&Poly::from_ints(&[0, 2]), &Poly::from_ints(&[-2, 0, 1])));
        assert_eq!(norm_poly(&Poly::linear_root(k.generator()), &k), Poly::from_ints(&[-2, 0, 1]));
    }
}
