//! Scene files: JSON descriptions of curves, points, forms and chains.

use serde::Deserialize;

use polar_core::arith::{Alg, MPoly, NumberField, Rat, Scalar};
use polar_core::curves::{third_kind, CurveModel, CurvePoint, Differential1};
use polar_core::link::{AmbientSpace, BoundingChain2, CurveForm, EmbeddedCycle1, Plane};
use polar_core::surface::{Line, Plane2Form};
use polar_core::PolarError;

use crate::expr::{parse_fraction, parse_mpoly, parse_number, parse_poly, parse_ratfunc};

pub const SCENE_VERSION: &str = "1";

/// A schema problem, located by a JSON pointer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", if self.pointer.is_empty() { "/" } else { &self.pointer }, self.message)
    }
}

/// Either a schema error or a mathematical one raised while building objects.
#[derive(Debug)]
pub enum LoadError {
    Schema(SchemaError),
    Math(PolarError),
}

impl From<PolarError> for LoadError {
    fn from(e: PolarError) -> Self {
        LoadError::Math(e)
    }
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> LoadError {
    LoadError::Schema(SchemaError { pointer: pointer.into(), message: message.into() })
}

type Load<T> = std::result::Result<T, LoadError>;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    pub version: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub curve: Option<CurveSpec>,
    #[serde(default)]
    pub points: Vec<PointSpec>,
    #[serde(default)]
    pub punctures: Vec<PointSpec>,
    #[serde(default)]
    pub chain: Vec<WeightedForm>,
    #[serde(default)]
    pub mv: Option<MvSpec>,
    #[serde(default)]
    pub arrangement: Option<ArrangementSpec>,
    #[serde(default)]
    pub ambient: Option<AmbientSpec>,
    #[serde(default)]
    pub cycles: Vec<CycleSpec>,
    #[serde(default)]
    pub bounding: Vec<Chain2Spec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CurveSpec {
    ProjectiveLine,
    /// `y^2 = f(x)` with `f` in the variable `x`.
    Hyperelliptic {
        f: String,
    },
}

/// `"infinity"`, `{"z": ...}` on the line, `{"x": ..., "y": ...}` on a
/// hyperelliptic curve. With `minpoly` (in `a`), coordinates may use the
/// root `a`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum PointSpec {
    Named(String),
    Coords(PointCoords),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointCoords {
    #[serde(default)]
    pub z: Option<String>,
    #[serde(default)]
    pub x: Option<String>,
    #[serde(default)]
    pub y: Option<String>,
    #[serde(default)]
    pub minpoly: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FormSpec {
    /// `r(z) dz` on the line.
    Line { r: String },
    /// `(a(x) + b(x) y)/c(x) · dx/y`.
    Hyper {
        a: String,
        #[serde(default)]
        b: Option<String>,
        #[serde(default)]
        c: Option<String>,
    },
    /// The normalized third-kind form with residues `+1` at `p`, `-1` at `q`.
    ThirdKind { third_kind: [PointSpec; 2] },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedForm {
    pub form: FormSpec,
    #[serde(default)]
    pub weight: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MvSpec {
    pub s1: Vec<PointSpec>,
    pub s2: Vec<PointSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementSpec {
    /// Affine lines as linear polynomials in `x, y`.
    pub lines: Vec<String>,
    pub numerator: String,
    #[serde(default)]
    pub line_at_infinity: bool,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmbientSpec {
    pub dim: usize,
    /// Volume form `num/den · dx∧dy(∧dz)`; defaults to `1` in the plane and
    /// `1/(x y z)` in three-space.
    #[serde(default)]
    pub density: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleSpec {
    /// Carrier plane as a linear polynomial in `x, y, z`; absent in the plane.
    #[serde(default)]
    pub plane: Option<String>,
    /// Curve in chart coordinates `s, t`.
    pub curve: String,
    /// `(p ds + q dt)/d`; defaults to `ds/F_t`.
    #[serde(default)]
    pub form: Option<CycleForm>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleForm {
    #[serde(default)]
    pub p: Option<String>,
    #[serde(default)]
    pub q: Option<String>,
    #[serde(default)]
    pub d: Option<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Chain2Spec {
    pub plane: String,
    /// `num/den · ds∧dt` in chart coordinates `s, t`.
    pub form: String,
    #[serde(default)]
    pub weight: Option<String>,
    /// The boundary curve in `s, t`; defaults to the whole denominator.
    #[serde(default)]
    pub boundary: Option<String>,
}

/// Parses and validates a scene from JSON text.
pub fn parse_scene(text: &str) -> std::result::Result<SceneFile, SchemaError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let scene: SceneFile = serde_path_to_error::deserialize(de)
        .map_err(|e| SchemaError { pointer: pointer_of(e.path()), message: e.inner().to_string() })?;
    if scene.version != SCENE_VERSION {
        return Err(SchemaError {
            pointer: "/version".into(),
            message: format!("unsupported scene version {:?} (expected {SCENE_VERSION:?})", scene.version),
        });
    }
    Ok(scene)
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{key}")),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => {}
        }
    }
    out
}

fn expr<T>(r: std::result::Result<T, String>, ptr: &str) -> Load<T> {
    r.map_err(|m| schema(ptr, m))
}

impl SceneFile {
    pub fn curve(&self) -> Load<CurveModel> {
        match &self.curve {
            None => Err(schema("/curve", "missing curve")),
            Some(CurveSpec::ProjectiveLine) => Ok(CurveModel::projective_line()),
            Some(CurveSpec::Hyperelliptic { f }) => {
                let f = expr(parse_poly(f, "x"), "/curve/f")?;
                Ok(CurveModel::hyperelliptic(f)?)
            }
        }
    }

    pub fn points_at(&self, curve: &CurveModel, specs: &[PointSpec], ptr: &str) -> Load<Vec<CurvePoint>> {
        specs.iter().enumerate().map(|(i, p)| point(curve, p, &format!("{ptr}/{i}"))).collect()
    }

    pub fn chain(&self, curve: &CurveModel) -> Load<Vec<(Differential1, Rat)>> {
        self.chain
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let ptr = format!("/chain/{i}");
                let form = form(curve, &w.form, &format!("{ptr}/form"))?;
                let weight = match &w.weight {
                    None => Rat::from_integer(1.into()),
                    Some(s) => expr(parse_number(s), &format!("{ptr}/weight"))?,
                };
                Ok((form, weight))
            })
            .collect()
    }

    pub fn arrangement(&self) -> Load<Plane2Form> {
        let a = self.arrangement.as_ref().ok_or_else(|| schema("/arrangement", "missing arrangement"))?;
        let mut lines = Vec::new();
        for (i, l) in a.lines.iter().enumerate() {
            let ptr = format!("/arrangement/lines/{i}");
            let p = expr(parse_mpoly(l, &["x", "y"]), &ptr)?;
            if p.total_degree() != 1 {
                return Err(schema(ptr, "a line must be a polynomial of degree 1"));
            }
            let c = |e: Vec<u32>| {
                p.terms().find(|(k, _)| **k == e).map(|(_, v)| v.clone()).unwrap_or_else(|| Rat::from_integer(0.into()))
            };
            lines.push(Line::new(c(vec![1, 0]), c(vec![0, 1]), c(vec![0, 0]))?);
        }
        let g = expr(parse_mpoly(&a.numerator, &["x", "y"]), "/arrangement/numerator")?;
        let form = Plane2Form::new(g, lines)?;
        Ok(if a.line_at_infinity { form.with_line_at_infinity()? } else { form })
    }

    pub fn ambient(&self) -> Load<AmbientSpace> {
        let a = self.ambient.as_ref().ok_or_else(|| schema("/ambient", "missing ambient"))?;
        let vars: &[&str] = match a.dim {
            2 => &["x", "y"],
            3 => &["x", "y", "z"],
            _ => return Err(schema("/ambient/dim", "dimension must be 2 or 3")),
        };
        match &a.density {
            None if a.dim == 2 => Ok(AmbientSpace::plane()),
            None => Ok(AmbientSpace::p3_default()),
            Some(s) => {
                let f = expr(parse_fraction(s, vars), "/ambient/density")?;
                Ok(AmbientSpace::new(a.dim, f.num, f.den)?)
            }
        }
    }

    pub fn cycles(&self) -> Load<Vec<EmbeddedCycle1>> {
        self.cycles.iter().enumerate().map(|(i, c)| cycle(c, &format!("/cycles/{i}"))).collect()
    }

    pub fn bounding(&self) -> Load<Vec<BoundingChain2>> {
        self.bounding
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let ptr = format!("/bounding/{i}");
                let plane = plane(&b.plane, &format!("{ptr}/plane"))?;
                let f = expr(parse_fraction(&b.form, &["s", "t"]), &format!("{ptr}/form"))?;
                let mut s = BoundingChain2::new(plane, f.num, f.den);
                if let Some(w) = &b.weight {
                    s.weight = Scalar::rational(expr(parse_number(w), &format!("{ptr}/weight"))?);
                }
                Ok(s)
            })
            .collect()
    }

    /// Declared boundary curve of each bounding chain.
    pub fn boundaries(&self) -> Load<Vec<Option<MPoly>>> {
        self.bounding
            .iter()
            .enumerate()
            .map(|(i, b)| match &b.boundary {
                Some(c) => Ok(Some(expr(parse_mpoly(c, &["s", "t"]), &format!("/bounding/{i}/boundary"))?)),
                None => Ok(None),
            })
            .collect()
    }
}

pub fn plane(s: &str, ptr: &str) -> Load<Plane> {
    let p = expr(parse_mpoly(s, &["x", "y", "z"]), ptr)?;
    if p.total_degree() != 1 {
        return Err(schema(ptr, "a plane must be a polynomial of degree 1"));
    }
    let c = |e: Vec<u32>| {
        p.terms().find(|(k, _)| **k == e).map(|(_, v)| v.clone()).unwrap_or_else(|| Rat::from_integer(0.into()))
    };
    Ok(Plane::new(c(vec![1, 0, 0]), c(vec![0, 1, 0]), c(vec![0, 0, 1]), c(vec![0, 0, 0]))?)
}

fn cycle(c: &CycleSpec, ptr: &str) -> Load<EmbeddedCycle1> {
    let plane = c.plane.as_ref().map(|p| plane(p, &format!("{ptr}/plane"))).transpose()?;
    let curve = expr(parse_mpoly(&c.curve, &["s", "t"]), &format!("{ptr}/curve"))?;
    let form = match &c.form {
        None => CurveForm::canonical(&curve),
        Some(f) => {
            let get = |s: &Option<String>, name: &str, default: &str| {
                expr(parse_mpoly(s.as_deref().unwrap_or(default), &["s", "t"]), &format!("{ptr}/form/{name}"))
            };
            CurveForm::from_components(&curve, &get(&f.p, "p", "0")?, &get(&f.q, "q", "0")?, &get(&f.d, "d", "1")?)?
        }
    };
    Ok(EmbeddedCycle1 { plane, form })
}

fn alg(s: &str, field: &Option<std::sync::Arc<NumberField>>, ptr: &str) -> Load<Alg> {
    match field {
        None => Ok(Alg::from_rat(expr(parse_number(s), ptr)?)),
        Some(k) => Ok(Alg::from_poly(Some(k.clone()), &expr(parse_poly(s, "a"), ptr)?)),
    }
}

pub fn point(curve: &CurveModel, p: &PointSpec, ptr: &str) -> Load<CurvePoint> {
    let c = match p {
        PointSpec::Named(n) if n == "infinity" => return Ok(CurvePoint::Infinity),
        PointSpec::Named(n) => {
            return Err(schema(ptr, format!("unknown point {n:?}; use \"infinity\" or coordinates")))
        }
        PointSpec::Coords(c) => c,
    };
    let field = match &c.minpoly {
        None => None,
        Some(m) => Some(NumberField::new(&expr(parse_poly(m, "a"), &format!("{ptr}/minpoly"))?)?),
    };
    let pt = match (curve.is_line(), &c.z, &c.x, &c.y) {
        (true, Some(z), None, None) => CurvePoint::line(alg(z, &field, &format!("{ptr}/z"))?),
        (false, None, Some(x), Some(y)) => {
            CurvePoint::affine(alg(x, &field, &format!("{ptr}/x"))?, alg(y, &field, &format!("{ptr}/y"))?)
        }
        (true, ..) => return Err(schema(ptr, "a point of the projective line needs exactly the field z")),
        (false, ..) => return Err(schema(ptr, "a point of a hyperelliptic curve needs exactly the fields x and y")),
    };
    pt.validate(curve)?;
    Ok(pt)
}

pub fn form(curve: &CurveModel, f: &FormSpec, ptr: &str) -> Load<Differential1> {
    match (f, curve.is_line()) {
        (FormSpec::Line { r }, true) => {
            let (n, d) = expr(parse_ratfunc(r, "z"), &format!("{ptr}/r"))?;
            Ok(Differential1::line_rat(&n, &d))
        }
        (FormSpec::Hyper { a, b, c }, false) => {
            let get = |s: Option<&str>, name: &str, default: &str| {
                expr(parse_poly(s.unwrap_or(default), "x"), &format!("{ptr}/{name}"))
            };
            let a = get(Some(a), "a", "0")?;
            let b = get(b.as_deref(), "b", "0")?;
            let c = get(c.as_deref(), "c", "1")?;
            if c.is_zero() {
                return Err(schema(format!("{ptr}/c"), "denominator is zero"));
            }
            Ok(Differential1::hyper_rat(&a, &b, &c)?)
        }
        (FormSpec::ThirdKind { third_kind: [p, q] }, _) => {
            let p = point(curve, p, &format!("{ptr}/third_kind/0"))?;
            let q = point(curve, q, &format!("{ptr}/third_kind/1"))?;
            Ok(third_kind(curve, &p, &q)?)
        }
        (FormSpec::Line { .. }, false) => Err(schema(ptr, "r(z) dz forms live on the projective line")),
        (FormSpec::Hyper { .. }, true) => Err(schema(ptr, "(a + b y)/c dx/y forms live on hyperelliptic curves")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_fields_with_pointer() {
        let e = parse_scene(r#"{"version":"1","curve":{"kind":"hyperelliptic","f":"x^3+1","g":"2"}}"#).unwrap_err();
        assert!(e.pointer.starts_with("/curve"), "{e}");
        let e = parse_scene(r#"{"version":"1","chain":[{"form":{"r":"1/z"},"weigth":"2"}]}"#).unwrap_err();
        assert!(e.pointer.starts_with("/chain/0"), "{e}");
        let e = parse_scene(r#"{"version":"2"}"#).unwrap_err();
        assert_eq!(e.pointer, "/version");
    }

    #[test]
    fn builds_points_and_forms() {
        let s = parse_scene(
            r#"{"version":"1","curve":{"kind":"hyperelliptic","f":"x^5+x+1"},
                "points":[{"x":"0","y":"1"},"infinity",{"minpoly":"a^2-2a-1","x":"a","y":"-2-3a"}]}"#,
        )
        .unwrap();
        let c = s.curve().unwrap();
        let pts = s.points_at(&c, &s.points, "/points").unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[2].orbit_size(), 2);
    }
}
