use num_traits::{One, Zero};

use crate::arith::{format_rat, Alg, MPoly, Rat};
use crate::error::{PolarError, Result};

/// The plane `a x + b y + c z + e = 0` in affine 3-space with a fixed chart
/// `(s, t) ↦ origin + s f1 + t f2`: `(s, t) = (x, y)` if `c ≠ 0`, else
/// `(z, x)` if `b ≠ 0`, else `(y, z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plane {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub e: Rat,
}

impl Plane {
    pub fn new(a: Rat, b: Rat, c: Rat, e: Rat) -> Result<Plane> {
        if a.is_zero() && b.is_zero() && c.is_zero() {
            return Err(PolarError::Precondition("plane with a = b = c = 0".into()));
        }
        Ok(Plane { a, b, c, e })
    }

    pub fn ints(a: i64, b: i64, c: i64, e: i64) -> Result<Plane> {
        let r = |v: i64| Rat::from_integer(v.into());
        Self::new(r(a), r(b), r(c), r(e))
    }

    /// Indices of the ambient coordinates used as chart coordinates.
    pub fn chart_axes(&self) -> (usize, usize) {
        if !self.c.is_zero() {
            (0, 1)
        } else if !self.b.is_zero() {
            (2, 0)
        } else {
            (1, 2)
        }
    }

    /// `(origin, f1, f2)` of the chart.
    pub fn frame(&self) -> ([Rat; 3], [Rat; 3], [Rat; 3]) {
        let z = Rat::zero;
        let o = Rat::one;
        if !self.c.is_zero() {
            let c = self.c.clone();
            (
                [z(), z(), -self.e.clone() / c.clone()],
                [o(), z(), -self.a.clone() / c.clone()],
                [z(), o(), -self.b.clone() / c],
            )
        } else if !self.b.is_zero() {
            let b = self.b.clone();
            ([z(), -self.e.clone() / b.clone(), z()], [z(), z(), o()], [o(), -self.a.clone() / b, z()])
        } else {
            ([-self.e.clone() / self.a.clone(), z(), z()], [z(), o(), z()], [z(), z(), o()])
        }
    }

    /// Ambient point of chart coordinates `(s, t)`.
    pub fn embed(&self, s: &Alg, t: &Alg) -> [Alg; 3] {
        let (o, f1, f2) = self.frame();
        let comp = |i: usize| {
            Alg::from_rat(o[i].clone())
                + Alg::from_rat(f1[i].clone()) * s.clone()
                + Alg::from_rat(f2[i].clone()) * t.clone()
        };
        [comp(0), comp(1), comp(2)]
    }

    /// Chart coordinates of an ambient point of the plane.
    pub fn coords(&self, p: &[Alg; 3]) -> (Alg, Alg) {
        let (i, j) = self.chart_axes();
        (p[i].clone(), p[j].clone())
    }

    /// Pullback of an ambient polynomial to chart coordinates.
    pub fn pullback(&self, g: &MPoly) -> MPoly {
        let (o, f1, f2) = self.frame();
        let sub: Vec<MPoly> = (0..3)
            .map(|i| {
                MPoly::from_terms(
                    2,
                    [(vec![0, 0], o[i].clone()), (vec![1, 0], f1[i].clone()), (vec![0, 1], f2[i].clone())],
                )
            })
            .collect();
        g.substitute(&sub)
    }

    pub fn to_mpoly(&self) -> MPoly {
        MPoly::from_terms(
            3,
            [
                (vec![1, 0, 0], self.a.clone()),
                (vec![0, 1, 0], self.b.clone()),
                (vec![0, 0, 1], self.c.clone()),
                (vec![0, 0, 0], self.e.clone()),
            ],
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!([format_rat(&self.a), format_rat(&self.b), format_rat(&self.c), format_rat(&self.e)])
    }
}

/// Affine chart of `P^2` or `P^3` with a polar volume form `(num/den)·dx∧…`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientSpace {
    pub dim: usize,
    pub num: MPoly,
    pub den: MPoly,
}

impl AmbientSpace {
    pub fn new(dim: usize, num: MPoly, den: MPoly) -> Result<AmbientSpace> {
        if dim != 2 && dim != 3 {
            return Err(PolarError::Precondition("ambient dimension must be 2 or 3".into()));
        }
        if num.nvars() != dim || den.nvars() != dim {
            return Err(PolarError::Precondition("volume form variables do not match the dimension".into()));
        }
        if num.is_zero() || den.is_zero() {
            return Err(PolarError::ZeroPolynomial);
        }
        Ok(AmbientSpace { dim, num, den })
    }

    /// `dx∧dy` on the plane.
    pub fn plane() -> AmbientSpace {
        AmbientSpace { dim: 2, num: MPoly::one(2), den: MPoly::one(2) }
    }

    /// `dx∧dy∧dz/(xyz)`.
    pub fn p3_default() -> AmbientSpace {
        let xyz = MPoly::from_terms(3, [(vec![1, 1, 1], Rat::one())]);
        AmbientSpace { dim: 3, num: MPoly::one(3), den: xyz }
    }

    /// Coefficient of the volume form at a point; fails on its divisor.
    pub fn density(&self, p: &[Alg]) -> Result<Alg> {
        let d = self.den.eval(p);
        let n = self.num.eval(p);
        if d.is_zero() || n.is_zero() {
            return Err(PolarError::Precondition("evaluation point lies on the divisor of the volume form".into()));
        }
        Ok(n / d)
    }

    /// True if `(x_i) ↦ (λ_i x_i)` preserves the volume form.
    pub fn preserved_by_scaling(&self, lambda: &[Rat]) -> bool {
        let sub: Vec<MPoly> = lambda.iter().enumerate().map(|(i, l)| MPoly::var(self.dim, i).scale(l)).collect();
        let jac: Rat = lambda.iter().product();
        let n2 = self.num.substitute(&sub).scale(&jac);
        let d2 = self.den.substitute(&sub);
        &n2 * &self.den == &self.num * &d2
    }
}
