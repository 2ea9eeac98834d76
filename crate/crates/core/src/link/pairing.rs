use num_traits::{One, Zero};
use serde::Serialize;

use super::curveform::{residue_2form_along_curve, CurveForm};
use super::geometry::{AmbientSpace, Plane};
use super::points::{transverse_points, PointGroup};
use crate::arith::{factor_rational, Alg, MPoly, Rat, Scalar, ScalarSum};
use crate::error::{PolarError, Result};

/// A smooth curve with a 1-form, in the plane (`plane = None`) or in a
/// plane of affine 3-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddedCycle1 {
    pub plane: Option<Plane>,
    pub form: CurveForm,
}

impl EmbeddedCycle1 {
    pub fn curve(&self) -> &MPoly {
        &self.form.curve
    }
}

/// `weight · (num/den) ds∧dt` on a plane of affine 3-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundingChain2 {
    pub plane: Plane,
    pub num: MPoly,
    pub den: MPoly,
    pub weight: Scalar,
}

impl BoundingChain2 {
    pub fn new(plane: Plane, num: MPoly, den: MPoly) -> BoundingChain2 {
        BoundingChain2 { plane, num, den, weight: Scalar::new(Alg::one(), 0) }
    }
}

/// One summand of an intersection or linking number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingTerm {
    pub points: String,
    pub orbit_size: usize,
    pub contribution: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub value: Scalar,
    pub terms: Vec<PairingTerm>,
}

fn det2(u: &[Alg; 2], v: &[Alg; 2]) -> Alg {
    u[0].clone() * v[1].clone() - u[1].clone() * v[0].clone()
}

fn det3(u: &[Alg; 3], v: &[Alg; 3], w: &[Alg; 3]) -> Alg {
    u[0].clone() * (v[1].clone() * w[2].clone() - v[2].clone() * w[1].clone())
        - u[1].clone() * (v[0].clone() * w[2].clone() - v[2].clone() * w[0].clone())
        + u[2].clone() * (v[0].clone() * w[1].clone() - v[1].clone() * w[0].clone())
}

fn tangent(f: &MPoly, p: &[Alg; 2]) -> Result<[Alg; 2]> {
    let u = [f.derivative(1).eval(p), -f.derivative(0).eval(p)];
    if u[0].is_zero() && u[1].is_zero() {
        return Err(PolarError::Singular(format!(
            "curve {} is singular at an intersection point",
            f.pretty(&["s", "t"])
        )));
    }
    Ok(u)
}

fn term(group: &PointGroup, v: &Alg) -> PairingTerm {
    PairingTerm {
        points: group.label(),
        orbit_size: group.size(),
        contribution: crate::arith::format_rat(&group.trace(v)),
    }
}

/// `Σ α(u) β(v) / μ(u, v)` over the transverse intersection of two curves in
/// the plane, with `u`, `v` tangent to the curves.
pub fn polar_intersection(amb: &AmbientSpace, a: &EmbeddedCycle1, b: &EmbeddedCycle1) -> Result<Pairing> {
    if amb.dim != 2 || a.plane.is_some() || b.plane.is_some() {
        return Err(PolarError::Precondition("intersection needs a planar ambient".into()));
    }
    let mut total = Rat::zero();
    let mut terms = Vec::new();
    if a.form.is_zero() || b.form.is_zero() {
        return Ok(Pairing { value: Scalar::rational(total), terms });
    }
    for g in transverse_points(a.curve(), b.curve())? {
        let p = &g.point;
        let u = tangent(a.curve(), p)?;
        let v = tangent(b.curve(), p)?;
        let mu = amb.density(p)?;
        let val = a.form.on_tangent(p)? * b.form.on_tangent(p)? / (mu * det2(&u, &v));
        total += g.trace(&val);
        terms.push(term(&g, &val));
    }
    Ok(Pairing { value: Scalar::rational(total), terms })
}

/// Outcome of checking that a 2-chain bounds a given cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundingCheck {
    pub ok: bool,
    pub diagnostic: Option<String>,
}

/// True iff the residue of `s` along the curve of `c` equals the form of
/// `c` and `s` has no other pole component.
pub fn verify_bounding(s: &BoundingChain2, c: &EmbeddedCycle1) -> BoundingCheck {
    let fail = |m: String| BoundingCheck { ok: false, diagnostic: Some(m) };
    if c.plane.as_ref() != Some(&s.plane) {
        return fail("chain and cycle lie in different planes".into());
    }
    let f = c.curve();
    let h = match s.den.exact_div(f) {
        Some(h) => h,
        None => return fail("the cycle's curve is not a pole component of the 2-form".into()),
    };
    if !h.is_constant() {
        let extra = extra_components(&h);
        return fail(format!("extra pole components: {extra}"));
    }
    match residue_2form_along_curve(&s.num, &s.den, f) {
        Ok(r) => {
            let r = r.scale(&s.weight.value.as_rat().unwrap_or_else(Rat::one));
            if s.weight.tau_power == 0 && r.same_on_curve(&c.form) {
                BoundingCheck { ok: true, diagnostic: None }
            } else {
                fail("residue differs from the cycle's form".into())
            }
        }
        Err(e) => fail(e.to_string()),
    }
}

fn extra_components(h: &MPoly) -> String {
    let names = ["s", "t"];
    for (i, name) in names.iter().enumerate() {
        if h.degree_in(1 - i) <= 0 {
            if let Some(u) = h.to_univariate(i) {
                let fs: Vec<String> = factor_rational(&u).1.iter().map(|(m, _)| m.pretty(name)).collect();
                return fs.join(", ");
            }
        }
    }
    h.pretty(&names)
}

/// Linking number of `c1` with the boundary of `s2`: the polar intersection
/// of `c1` with the 2-chain, `Σ α1(u) β2(f1', f2') / γ(u, f1', f2')`.
pub fn polar_linking(amb: &AmbientSpace, c1: &EmbeddedCycle1, s2: &BoundingChain2) -> Result<Pairing> {
    if amb.dim != 3 {
        return Err(PolarError::Precondition("linking needs a 3-dimensional ambient".into()));
    }
    let p1 = c1.plane.as_ref().ok_or_else(|| PolarError::Precondition("cycle needs a carrier plane".into()))?;
    let mut total = Rat::zero();
    let mut terms = Vec::new();
    if c1.form.is_zero() || s2.num.is_zero() || s2.weight.is_zero() {
        return Ok(Pairing { value: Scalar::zero_with(s2.weight.tau_power), terms });
    }
    let ell = p1.pullback(&s2.plane.to_mpoly());
    if ell.is_constant() {
        if ell.is_zero() {
            return Err(PolarError::NonTransverse("cycle lies in the plane of the 2-chain".into()));
        }
        return Ok(Pairing { value: Scalar::zero_with(s2.weight.tau_power), terms });
    }
    let (_, g1, g2) = s2.plane.frame();
    let g1: [Alg; 3] = g1.map(Alg::from_rat);
    let g2: [Alg; 3] = g2.map(Alg::from_rat);
    let (_, f1, f2) = p1.frame();
    for g in transverse_points(c1.curve(), &ell)? {
        let p = &g.point;
        let u2 = tangent(c1.curve(), p)?;
        let u: [Alg; 3] = std::array::from_fn(|i| {
            Alg::from_rat(f1[i].clone()) * u2[0].clone() + Alg::from_rat(f2[i].clone()) * u2[1].clone()
        });
        let x = p1.embed(&p[0], &p[1]);
        let (s, t) = s2.plane.coords(&x);
        let q = [s, t];
        let d = s2.den.eval(&q);
        if d.is_zero() {
            return Err(PolarError::Precondition(format!(
                "intersection {} lies on the boundary of the 2-chain",
                g.label()
            )));
        }
        let beta = s2.num.eval(&q) / d;
        let gamma = amb.density(&x)?;
        let det = det3(&u, &g1, &g2);
        if det.is_zero() {
            return Err(PolarError::NonTransverse(g.label()));
        }
        let val = c1.form.on_tangent(p)? * beta / (gamma * det);
        total += g.trace(&val);
        terms.push(term(&g, &val));
    }
    let value = s2.weight.checked_mul(&Scalar::rational(total))?;
    Ok(Pairing { value, terms })
}

/// Linking number against a sum of 2-chains.
pub fn polar_linking_sum(amb: &AmbientSpace, c1: &EmbeddedCycle1, chains: &[BoundingChain2]) -> Result<ScalarSum> {
    let mut acc = ScalarSum::new();
    for s in chains {
        acc.add(&polar_linking(amb, c1, s)?.value)?;
    }
    Ok(acc)
}

/// `∂Γ` for `Γ = G dx∧dy∧dz / Π L_i` with distinct planes `L_i`: one
/// residue 2-chain per plane, weighted by `2πi`.
pub fn boundary3(amb: &AmbientSpace, num: &MPoly, planes: &[Plane]) -> Result<Vec<BoundingChain2>> {
    if amb.dim != 3 || num.nvars() != 3 {
        return Err(PolarError::Precondition("boundary of a 3-form needs a 3-dimensional ambient".into()));
    }
    if num.is_zero() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (i, l) in planes.iter().enumerate() {
        let g = l.pullback(num);
        if g.is_zero() {
            return Err(PolarError::Precondition("numerator vanishes on a pole plane".into()));
        }
        let lead = if !l.c.is_zero() {
            l.c.clone()
        } else if !l.b.is_zero() {
            l.b.clone()
        } else {
            l.a.clone()
        };
        let mut den = MPoly::constant(2, lead);
        for (j, m) in planes.iter().enumerate() {
            if j != i {
                let r = l.pullback(&m.to_mpoly());
                if r.is_zero() {
                    return Err(PolarError::Precondition("repeated pole plane".into()));
                }
                den = &den * &r;
            }
        }
        out.push(BoundingChain2 { plane: l.clone(), num: g, den, weight: Scalar::new(Alg::one(), 1) });
    }
    Ok(out)
}

/// Image of a cycle under `(x, y, z) ↦ (λ_0 x, λ_1 y, λ_2 z)`.
pub fn scale_cycle(c: &EmbeddedCycle1, lambda: &[Rat; 3]) -> Result<EmbeddedCycle1> {
    let plane = c.plane.as_ref().ok_or_else(|| PolarError::Precondition("cycle needs a carrier plane".into()))?;
    let (np, (li, lj)) = scale_plane(plane, lambda)?;
    let sub = back_sub(&li, &lj);
    let curve = c.form.curve.substitute(&sub);
    // ds/F_t pulls back to (ds'/λ_i)/(F'_t' λ_j): the tangent value scales by 1/(λ_i λ_j).
    let num = c.form.num.substitute(&sub);
    let den = c.form.den.substitute(&sub).scale(&(&li * &lj));
    Ok(EmbeddedCycle1 { plane: Some(np), form: CurveForm { curve, num, den } })
}

/// Image of a 2-chain under the same scaling.
pub fn scale_chain(s: &BoundingChain2, lambda: &[Rat; 3]) -> Result<BoundingChain2> {
    let (np, (li, lj)) = scale_plane(&s.plane, lambda)?;
    let sub = back_sub(&li, &lj);
    Ok(BoundingChain2 {
        plane: np,
        num: s.num.substitute(&sub),
        den: s.den.substitute(&sub).scale(&(&li * &lj)),
        weight: s.weight.clone(),
    })
}

fn scale_plane(p: &Plane, lambda: &[Rat; 3]) -> Result<(Plane, (Rat, Rat))> {
    if lambda.iter().any(|l| l.is_zero()) {
        return Err(PolarError::Precondition("scaling factors must be nonzero".into()));
    }
    let np = Plane::new(
        p.a.clone() / lambda[0].clone(),
        p.b.clone() / lambda[1].clone(),
        p.c.clone() / lambda[2].clone(),
        p.e.clone(),
    )?;
    let (i, j) = np.chart_axes();
    Ok((np, (lambda[i].clone(), lambda[j].clone())))
}

/// Old chart coordinates in terms of new ones: `s = s'/λ_i`, `t = t'/λ_j`.
fn back_sub(li: &Rat, lj: &Rat) -> Vec<MPoly> {
    vec![MPoly::var(2, 0).scale(&(Rat::one() / li.clone())), MPoly::var(2, 1).scale(&(Rat::one() / lj.clone()))]
}
