use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;

use crate::arith::{factor_rational, Alg, Poly, Rat, Scalar};
use crate::curves::{
    canonical, divisor_of, fiber_orbits, geometric_count, norm_poly, ord_at, residue_value, short_label, CurveModel,
    CurvePoint, Differential1,
};
use crate::error::{PolarError, Result};

/// Scalar-weighted sum of points. A key with irrational coordinates stands
/// for its orbit: the value at each conjugate point is the matching
/// conjugate of the stored value.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain0 {
    pub terms: BTreeMap<CurvePoint, Scalar>,
}

impl Chain0 {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, p: CurvePoint, s: Scalar) -> Result<()> {
        if let Some(t) = self.terms.values().next() {
            if t.tau_power != s.tau_power {
                return Err(PolarError::TauMismatch { left: t.tau_power, right: s.tau_power });
            }
        }
        let sum = match self.terms.get(&p) {
            Some(old) => old.checked_add(&s)?,
            None => s,
        };
        if sum.is_zero() {
            self.terms.remove(&p);
        } else {
            self.terms.insert(p, sum);
        }
        Ok(())
    }

    pub fn add(&self, o: &Chain0) -> Result<Chain0> {
        let mut out = self.clone();
        for (p, s) in &o.terms {
            out.add_term(p.clone(), s.clone())?;
        }
        Ok(out)
    }

    /// Sum of the weights over all geometric points.
    pub fn total(&self) -> Result<Scalar> {
        let tau = self.terms.values().next().map_or(0, |s| s.tau_power);
        let mut acc = Scalar::zero_with(tau);
        for (p, s) in &self.terms {
            let v = match p.field()? {
                Some(k) if s.value.is_rational() || s.value.compatible(&k.generator()) => {
                    Alg::from_rat(s.value.trace_in(Some(&k)))
                }
                Some(_) => return Err(PolarError::FieldMismatch),
                None => s.value.clone(),
            };
            acc = acc.checked_add(&Scalar::new(v, tau))?;
        }
        Ok(acc)
    }

    pub fn to_json(&self, curve: &CurveModel) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(p, s)| serde_json::json!({ "point": p.to_json(curve), "weight": s.to_json() }))
                .collect(),
        )
    }
}

impl fmt::Display for Chain0 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, s)| format!("{s}·[{}]", short_label(p))).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Weighted sum of 1-forms on a fixed curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain1 {
    pub curve: CurveModel,
    pub terms: Vec<(Differential1, Scalar)>,
}

impl Chain1 {
    pub fn new(curve: CurveModel) -> Self {
        Chain1 { curve, terms: Vec::new() }
    }

    pub fn single(curve: CurveModel, w: Differential1) -> Self {
        Chain1 { curve, terms: vec![(w, Scalar::rational(Rat::from_integer(1.into())))] }
    }

    pub fn push(&mut self, w: Differential1, weight: Scalar) -> Result<()> {
        w.check_curve(&self.curve)?;
        self.terms.push((w, weight));
        Ok(())
    }

    /// Terms combined into one form per `tau_power`.
    fn absorbed(&self) -> Result<BTreeMap<i32, Differential1>> {
        let mut out: BTreeMap<i32, Differential1> = BTreeMap::new();
        for (w, s) in &self.terms {
            let scaled = w.scale(&s.value);
            let e = out.entry(s.tau_power).or_insert_with(|| Differential1::zero(&self.curve));
            *e = e.add(&scaled)?;
        }
        Ok(out)
    }
}

/// A curve with finitely many punctures, stored as orbit representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuncturedCurve {
    pub closure: CurveModel,
    pub punctures: BTreeSet<CurvePoint>,
}

impl PuncturedCurve {
    pub fn new(closure: CurveModel, punctures: &[CurvePoint]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for p in punctures {
            if !set.insert(canonical(&closure, p)?) {
                return Err(PolarError::Precondition(format!("puncture {} listed twice", short_label(p))));
            }
        }
        Ok(PuncturedCurve { closure, punctures: set })
    }

    pub fn projective(closure: CurveModel) -> Self {
        PuncturedCurve { closure, punctures: BTreeSet::new() }
    }

    /// Number of geometric punctures.
    pub fn puncture_count(&self) -> usize {
        geometric_count(&self.punctures)
    }
}

fn irreducible_factors(p: &Poly<Rat>) -> Vec<Poly<Rat>> {
    if p.is_constant() {
        return Vec::new();
    }
    factor_rational(p).1.into_iter().map(|(m, _)| m).collect()
}

/// Poles of a nonzero form with their orders (as negative weights).
pub fn poles_of(curve: &CurveModel, w: &Differential1) -> Result<Vec<(CurvePoint, i64)>> {
    if w.is_rational() {
        return Ok(divisor_of(curve, w)?.poles().map(|(p, v)| (p.clone(), v)).collect());
    }
    let k = w.field()?.expect("irrational form has a field");
    let den = match w {
        Differential1::Line { r } => norm_poly(r.den(), &k),
        Differential1::Hyper { c, .. } => norm_poly(c, &k),
    };
    let mut cands = vec![CurvePoint::Infinity];
    for m in irreducible_factors(&den) {
        cands.extend(fiber_orbits(curve, &m)?);
    }
    let mut out = Vec::new();
    for p in cands {
        if p.field()?.is_some() {
            return Err(PolarError::Unsupported("irrational pole of a form with irrational coefficients".into()));
        }
        let v = ord_at(curve, w, &p)?;
        if v < 0 {
            out.push((p, v));
        }
    }
    Ok(out)
}

/// `∂` of a 1-chain: `2πi` times the residues at every pole.
pub fn boundary1(c: &Chain1) -> Result<Chain0> {
    let mut out = Chain0::new();
    for (tau, w) in c.absorbed()? {
        if w.is_zero() {
            continue;
        }
        for (p, v) in poles_of(&c.curve, &w)? {
            if v < -1 {
                return Err(PolarError::HigherOrderPole { order: -v, at: short_label(&p) });
            }
            let r = residue_value(&c.curve, &w, &p)?;
            if !r.is_zero() {
                out.add_term(p, Scalar::new(r, tau + 1))?;
            }
        }
    }
    Ok(out)
}

/// True iff every form has only simple poles, none at a puncture, and
/// vanishes at every puncture.
pub fn is_admissible(c: &Chain1, x: &PuncturedCurve) -> bool {
    admissible(c, x).unwrap_or(false)
}

fn admissible(c: &Chain1, x: &PuncturedCurve) -> Result<bool> {
    if c.curve != x.closure {
        return Ok(false);
    }
    for (w, s) in &c.terms {
        if w.is_zero() || s.is_zero() {
            continue;
        }
        if poles_of(&c.curve, w)?.iter().any(|(_, v)| *v < -1) {
            return Ok(false);
        }
        for p in &x.punctures {
            if ord_at(&c.curve, w, p)? < 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
