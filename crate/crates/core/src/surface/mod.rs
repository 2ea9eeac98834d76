//! Polar 2-chains on the affine plane: rational 2-forms with simple poles
//! along a line arrangement, their boundary, and the cancellation of
//! repeated residues.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{format_rat, Alg, MPoly, Poly, Rat, RatFunc, Scalar};
use crate::curves::{residue_value, CurveModel, CurvePoint, Differential1};
use crate::error::{PolarError, Result};

/// The affine line `a x + b y + c = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
}

impl Line {
    pub fn new(a: Rat, b: Rat, c: Rat) -> Result<Line> {
        if a.is_zero() && b.is_zero() {
            return Err(PolarError::Precondition("line with a = b = 0".into()));
        }
        Ok(Line { a, b, c })
    }

    pub fn ints(a: i64, b: i64, c: i64) -> Result<Line> {
        Self::new(Rat::from_integer(a.into()), Rat::from_integer(b.into()), Rat::from_integer(c.into()))
    }

    pub fn to_mpoly(&self) -> MPoly {
        MPoly::from_terms(2, [(vec![1, 0], self.a.clone()), (vec![0, 1], self.b.clone()), (vec![0, 0], self.c.clone())])
    }

    /// Parametrization `t ↦ (x(t), y(t))`: `t = x` unless the line is vertical.
    pub fn param(&self) -> (Poly<Rat>, Poly<Rat>) {
        if !self.b.is_zero() {
            (Poly::x(), Poly::from_rats(vec![-self.c.clone() / self.b.clone(), -self.a.clone() / self.b.clone()]))
        } else {
            (Poly::constant(-self.c.clone() / self.a.clone()), Poly::x())
        }
    }

    /// Parameter value of a point on the line.
    pub fn param_of(&self, x: &Rat, y: &Rat) -> Rat {
        if !self.b.is_zero() {
            x.clone()
        } else {
            y.clone()
        }
    }

    pub fn is_parallel(&self, o: &Line) -> bool {
        (&self.a * &o.b - &self.b * &o.a).is_zero()
    }

    pub fn is_proportional(&self, o: &Line) -> bool {
        self.is_parallel(o)
            && (&self.a * &o.c - &self.c * &o.a).is_zero()
            && (&self.b * &o.c - &self.c * &o.b).is_zero()
    }

    pub fn contains(&self, x: &Rat, y: &Rat) -> bool {
        (&self.a * x + &self.b * y + &self.c).is_zero()
    }

    /// Intersection with a non-parallel line.
    pub fn meet(&self, o: &Line) -> Option<(Rat, Rat)> {
        let det = &self.a * &o.b - &self.b * &o.a;
        if det.is_zero() {
            return None;
        }
        let x = (&self.b * &o.c - &self.c * &o.b) / det.clone();
        let y = (&self.c * &o.a - &self.a * &o.c) / det;
        Some((x, y))
    }

    /// Slope coordinate `v = y/x` of the point at infinity (`None` for
    /// vertical lines, which meet the line at infinity at `v = ∞`).
    pub fn slope(&self) -> Option<Rat> {
        (!self.b.is_zero()).then(|| -self.a.clone() / self.b.clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!([format_rat(&self.a), format_rat(&self.b), format_rat(&self.c)])
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}x + {}y + {} = 0}}", format_rat(&self.a), format_rat(&self.b), format_rat(&self.c))
    }
}

/// A pole line of a plane 2-form, possibly the line at infinity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PoleLine {
    Affine(Line),
    Infinity,
}

impl PoleLine {
    pub fn label(&self) -> String {
        match self {
            PoleLine::Affine(l) => l.to_string(),
            PoleLine::Infinity => "{line at infinity}".into(),
        }
    }
}

fn restrict(g: &MPoly, line: &Line) -> Poly<Rat> {
    let (x, y) = line.param();
    g.substitute(&[MPoly::from_univariate(1, 0, &x), MPoly::from_univariate(1, 0, &y)])
        .to_univariate(0)
        .expect("univariate after substitution")
}

/// `G dx∧dy / Π ℓ_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plane2Form {
    numerator: MPoly,
    lines: Vec<Line>,
    with_infinity: bool,
}

impl Plane2Form {
    /// Validates normal crossings (distinct lines, no three through a point)
    /// and that the numerator vanishes on no pole line.
    pub fn new(numerator: MPoly, lines: Vec<Line>) -> Result<Plane2Form> {
        if numerator.nvars() != 2 {
            return Err(PolarError::Precondition("numerator must be bivariate".into()));
        }
        for (i, l) in lines.iter().enumerate() {
            for m in &lines[..i] {
                if l.is_proportional(m) {
                    return Err(PolarError::NotNormalCrossing(format!("line {l} is repeated")));
                }
            }
            if !numerator.is_zero() && restrict(&numerator, l).is_zero() {
                return Err(PolarError::Precondition(format!("numerator vanishes on {l}")));
            }
        }
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                if let Some((x, y)) = lines[i].meet(&lines[j]) {
                    if let Some(k) = (0..lines.len()).find(|&k| k != i && k != j && lines[k].contains(&x, &y)) {
                        return Err(PolarError::NotNormalCrossing(format!(
                            "{}, {} and {} meet at ({}, {})",
                            lines[i],
                            lines[j],
                            lines[k],
                            format_rat(&x),
                            format_rat(&y)
                        )));
                    }
                }
            }
        }
        Ok(Plane2Form { numerator, lines, with_infinity: false })
    }

    /// Adds the line at infinity of `P^2` to the arrangement; it becomes a
    /// pole line when the form has a pole there.
    pub fn with_line_at_infinity(mut self) -> Result<Plane2Form> {
        self.with_infinity = true;
        let form = self;
        if form.infinity_order()? == -1 {
            for i in 0..form.lines.len() {
                for j in i + 1..form.lines.len() {
                    if form.lines[i].is_parallel(&form.lines[j]) {
                        return Err(PolarError::NotNormalCrossing(format!(
                            "{} and {} meet on the polar line at infinity",
                            form.lines[i], form.lines[j]
                        )));
                    }
                }
            }
        }
        Ok(form)
    }

    pub fn numerator(&self) -> &MPoly {
        &self.numerator
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn includes_infinity(&self) -> bool {
        self.with_infinity
    }

    /// Order of the form along the line at infinity.
    fn infinity_order(&self) -> Result<i64> {
        if self.numerator.is_zero() {
            return Ok(0);
        }
        let ord = self.lines.len() as i64 - self.numerator.total_degree() - 3;
        if ord < -1 {
            return Err(PolarError::HigherOrderPole { order: -ord, at: "line at infinity".into() });
        }
        Ok(ord)
    }

    /// True if the line at infinity is part of the arrangement and a pole.
    pub fn has_infinity_pole(&self) -> Result<bool> {
        Ok(self.with_infinity && self.infinity_order()? == -1)
    }

    pub fn pole_lines(&self) -> Result<Vec<PoleLine>> {
        if self.numerator.is_zero() {
            return Ok(Vec::new());
        }
        let mut out: Vec<PoleLine> = self.lines.iter().cloned().map(PoleLine::Affine).collect();
        if self.has_infinity_pole()? {
            out.push(PoleLine::Infinity);
        }
        Ok(out)
    }

    /// Plain-text rendering.
    pub fn pretty(&self) -> String {
        let den: Vec<String> = self.lines.iter().map(|l| l.to_mpoly().pretty(&["x", "y"])).collect();
        format!("({}) dx^dy / ({})", self.numerator.pretty(&["x", "y"]), den.join(")("))
    }
}

/// Poincaré residue of `β` along `ℓ`, as a form in the parameter of `ℓ`
/// (`x`, or `y` on vertical lines, or `v = y/x` on the line at infinity).
pub fn residue_along_line(beta: &Plane2Form, pole: &PoleLine) -> Result<Differential1> {
    match pole {
        PoleLine::Affine(l) => {
            let idx = beta.lines.iter().position(|m| m == l).ok_or(PolarError::NotAPoleLine)?;
            if beta.numerator.is_zero() {
                return Ok(Differential1::zero(&CurveModel::ProjectiveLine));
            }
            let num = restrict(&beta.numerator, l);
            let mut den = Poly::<Rat>::one();
            for (j, m) in beta.lines.iter().enumerate() {
                if j != idx {
                    den = &den * &restrict(&m.to_mpoly(), l);
                }
            }
            // β = (dℓ/ℓ) ∧ ρ with ρ = -G/(bΠ') dx, or G/(aΠ') dy on vertical lines.
            let k = if l.b.is_zero() { l.a.clone() } else { -l.b.clone() };
            Ok(Differential1::line(RatFunc::new(num.lift(), den.scale(&k).lift())))
        }
        PoleLine::Infinity => {
            if !beta.has_infinity_pole()? {
                return Err(PolarError::NotAPoleLine);
            }
            let d = beta.numerator.total_degree() as u32;
            let top: Vec<Rat> = (0..=d)
                .map(|j| {
                    beta.numerator
                        .terms()
                        .find(|(e, _)| e[0] == d - j && e[1] == j)
                        .map_or_else(Rat::zero, |(_, c)| c.clone())
                })
                .collect();
            let mut den = Poly::<Rat>::one();
            for m in &beta.lines {
                den = &den * &Poly::from_rats(vec![m.a.clone(), m.b.clone()]);
            }
            Ok(Differential1::line(RatFunc::new(Poly::from_rats(top).lift(), den.scale(&-Rat::one()).lift())))
        }
    }
}

/// Weighted sum of residue forms on lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineChain1 {
    pub terms: Vec<(PoleLine, Differential1, Scalar)>,
}

impl LineChain1 {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(l, w, s)| {
                    let line = match l {
                        PoleLine::Affine(l) => l.to_json(),
                        PoleLine::Infinity => serde_json::Value::String("infinity".into()),
                    };
                    serde_json::json!({ "line": line, "form": w.pretty(), "weight": s.to_json() })
                })
                .collect(),
        )
    }
}

/// `∂β = 2πi Σ (ℓ, res_ℓ β)`.
pub fn boundary2(beta: &Plane2Form) -> Result<LineChain1> {
    let mut terms = Vec::new();
    for l in beta.pole_lines()? {
        let w = residue_along_line(beta, &l)?;
        terms.push((l, w, Scalar::new(Alg::one(), 1)));
    }
    Ok(LineChain1 { terms })
}

/// Repeated residues at one double point of the pole divisor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DoublePoint {
    pub lines: (usize, usize),
    pub point: String,
    pub residues: (String, String),
    pub sum: String,
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct D2Report {
    pub pole_lines: usize,
    pub points: Vec<DoublePoint>,
    pub pass: bool,
}

fn line_point(t: Option<Rat>) -> CurvePoint {
    t.map_or(CurvePoint::Infinity, CurvePoint::line_rat)
}

/// Checks that at every double point the residues of the two boundary
/// forms cancel.
pub fn d2_check(beta: &Plane2Form) -> Result<D2Report> {
    let chain = boundary2(beta)?;
    let p1 = CurveModel::projective_line();
    let mut points = Vec::new();
    let n = chain.terms.len();
    for i in 0..n {
        for j in i + 1..n {
            let (li, wi, _) = &chain.terms[i];
            let (lj, wj, _) = &chain.terms[j];
            let (ti, tj, label) = match (li, lj) {
                (PoleLine::Affine(a), PoleLine::Affine(b)) => {
                    let Some((x, y)) = a.meet(b) else { continue };
                    let label = format!("({}, {})", format_rat(&x), format_rat(&y));
                    (Some(a.param_of(&x, &y)), Some(b.param_of(&x, &y)), label)
                }
                (PoleLine::Affine(a), PoleLine::Infinity) => {
                    let v = a.slope();
                    let label = format!("infinity, slope {}", v.as_ref().map_or("∞".into(), format_rat));
                    (None, v, label)
                }
                _ => unreachable!("the line at infinity is listed last"),
            };
            let ri = residue_value(&p1, wi, &line_point(ti))?;
            let rj = residue_value(&p1, wj, &line_point(tj))?;
            let sum = ri.clone() + rj.clone();
            points.push(DoublePoint {
                lines: (i, j),
                point: label,
                residues: (ri.to_string(), rj.to_string()),
                sum: sum.to_string(),
                zero: sum.is_zero(),
            });
        }
    }
    let pass = points.iter().all(|p| p.zero);
    Ok(D2Report { pole_lines: n, points, pass })
}
