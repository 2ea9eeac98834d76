//! Floating-point quadrature check of the Cauchy–Stokes formula on the
//! projective line:
//!
//! `∫ ω ∧ ∂̄v = 2πi Σ_P res_P(ω) v(P)`
//!
//! for a rational 1-form `ω = f(z) dz` with simple poles and a smooth test
//! function `v` supported in a disc.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{rat_to_f64, roots::complex_roots, Poly, Rat};
use crate::curves::Differential1;
use crate::error::{PolarError, Result};

/// `dz ∧ dz̄ = AREA_FACTOR · dA` with `dA = dx ∧ dy`.
pub const AREA_FACTOR: Complex64 = Complex64 { re: 0.0, im: -2.0 };

/// One term `coeff · z^z_pow · z̄^zbar_pow`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub z: u32,
    pub zbar: u32,
    pub coeff: [f64; 2],
}

/// `v(z) = poly(z, z̄) · bump(|z − center| / radius)` with
/// `bump(r) = exp(1/(r² − 1))` for `r < 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothTestForm {
    pub center: [f64; 2],
    pub radius: f64,
    pub poly: Vec<PolyTerm>,
}

impl SmoothTestForm {
    pub fn new(center: Complex64, radius: f64, poly: Vec<PolyTerm>) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(PolarError::Precondition("bump radius must be positive".into()));
        }
        Ok(SmoothTestForm { center: [center.re, center.im], radius, poly })
    }

    /// The plain bump with `poly = 1`.
    pub fn bump(center: Complex64, radius: f64) -> Result<Self> {
        Self::new(center, radius, vec![PolyTerm { z: 0, zbar: 0, coeff: [1.0, 0.0] }])
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(self.center[0], self.center[1])
    }

    fn s(&self, z: Complex64) -> f64 {
        (z - self.center()).norm_sqr() / (self.radius * self.radius)
    }

    fn bump_at(&self, z: Complex64) -> f64 {
        let s = self.s(z);
        if s < 1.0 {
            (1.0 / (s - 1.0)).exp()
        } else {
            0.0
        }
    }

    fn poly_at(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.poly.iter().map(|t| coeff(t) * z.powu(t.z) * zb.powu(t.zbar)).sum()
    }

    fn poly_dbar(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.poly
            .iter()
            .filter(|t| t.zbar > 0)
            .map(|t| coeff(t) * t.zbar as f64 * z.powu(t.z) * zb.powu(t.zbar - 1))
            .sum()
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        let b = self.bump_at(z);
        if b == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.poly_at(z) * b
    }

    pub fn in_support(&self, z: Complex64) -> bool {
        self.s(z) < 1.0
    }
}

fn coeff(t: &PolyTerm) -> Complex64 {
    Complex64::new(t.coeff[0], t.coeff[1])
}

/// `∂v/∂z̄` at `z`.
pub fn dbar_eval(v: &SmoothTestForm, z: Complex64) -> Complex64 {
    let s = v.s(z);
    if s >= 1.0 {
        return Complex64::new(0.0, 0.0);
    }
    let b = (1.0 / (s - 1.0)).exp();
    let db = -(z - v.center()) * (b / (v.radius * v.radius * (s - 1.0) * (s - 1.0)));
    v.poly_dbar(z) * b + v.poly_at(z) * db
}

/// Quadrature resolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    /// Largest radial panel width and target arc spacing.
    pub base_cell: f64,
    /// Number of geometric annuli refining each pole disc.
    pub depth: usize,
    /// Required agreement between the base and the half-size run.
    pub tol: f64,
    /// Floor for the denominator of the relative error.
    pub abs_floor: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { base_cell: 0.02, depth: 6, tol: 1e-6, abs_floor: 1.0 }
    }
}

impl QuadratureConfig {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.depth < 1 || !(self.base_cell > 0.0) || !(self.abs_floor > 0.0) {
            return Err(PolarError::Precondition("quadrature needs tol > 0, depth ≥ 1, base_cell > 0".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StokesReport {
    pub lhs: [f64; 2],
    pub rhs: [f64; 2],
    pub rel_error: f64,
    pub cells: usize,
    pub poles: Vec<[f64; 2]>,
}

impl StokesReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.rel_error <= tol
    }
}

/// A rational function with numerically located simple poles.
struct Rational {
    num: Vec<f64>,
    den: Vec<f64>,
    poles: Vec<(Complex64, Complex64)>,
}

fn horner(c: &[f64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

impl Rational {
    fn new(omega: &Differential1) -> Result<Rational> {
        let r = match omega {
            Differential1::Line { r } => r,
            _ => return Err(PolarError::Precondition("the quadrature oracle works on the projective line".into())),
        };
        let rat = |p: &Poly<crate::arith::Alg>| -> Result<Poly<Rat>> {
            let cs: Option<Vec<Rat>> = p.coeffs().iter().map(|c| c.as_rat()).collect();
            cs.map(Poly::new).ok_or_else(|| PolarError::Unsupported("form with irrational coefficients".into()))
        };
        let (n, d) = (rat(r.num())?, rat(r.den())?);
        let g = Poly::gcd(&d, &d.derivative());
        if g.degree().unwrap_or(0) > 0 {
            return Err(PolarError::HigherOrderPole { order: 2, at: format!("a root of {}", g.pretty("z")) });
        }
        let nd = d.derivative();
        let num: Vec<f64> = n.coeffs().iter().map(rat_to_f64).collect();
        let den: Vec<f64> = d.coeffs().iter().map(rat_to_f64).collect();
        let dd: Vec<f64> = nd.coeffs().iter().map(rat_to_f64).collect();
        let poles = complex_roots(&d)
            .into_iter()
            .map(|a| (a, horner(&num, a) / horner(&dd, a)))
            .filter(|(_, res)| res.norm() > 0.0)
            .collect();
        Ok(Rational { num, den, poles })
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.num, z) / horner(&self.den, z)
    }
}

/// Smooth step: 1 on `[0, 1/2]`, 0 on `[1, ∞)`.
fn cutoff(t: f64) -> f64 {
    if t <= 0.5 {
        return 1.0;
    }
    if t >= 1.0 {
        return 0.0;
    }
    let u = 2.0 * t - 1.0;
    let e = |x: f64| (-1.0 / x).exp();
    e(1.0 - u) / (e(1.0 - u) + e(u))
}

#[allow(clippy::excessive_precision)]
const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329_0,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
#[allow(clippy::excessive_precision)]
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362_0,
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Neumaier-compensated complex accumulator.
#[derive(Default)]
struct Acc {
    sum: Complex64,
    comp: Complex64,
}

impl Acc {
    fn add(&mut self, x: Complex64) {
        fn step(s: &mut f64, c: &mut f64, x: f64) {
            let t = *s + x;
            if s.abs() >= x.abs() {
                *c += (*s - t) + x;
            } else {
                *c += (x - t) + *s;
            }
            *s = t;
        }
        step(&mut self.sum.re, &mut self.comp.re, x.re);
        step(&mut self.sum.im, &mut self.comp.im, x.im);
    }

    fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

/// Radial panels on `[0, rmax]`: geometric annuli near 0 (when `depth > 0`),
/// each split to width at most `h`.
fn panels(rmax: f64, h: f64, depth: usize) -> Vec<(f64, f64)> {
    let mut cuts = vec![0.0];
    for k in (0..depth).rev() {
        cuts.push(rmax / 2f64.powi(k as i32 + 1));
    }
    cuts.push(rmax);
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let n = ((b - a) / h).ceil().max(1.0) as usize;
        for i in 0..n {
            out.push((a + (b - a) * i as f64 / n as f64, a + (b - a) * (i + 1) as f64 / n as f64));
        }
    }
    out
}

/// `∫∫ g(origin + r e^{iθ}) r dr dθ` over the disc of radius `rmax`.
fn polar_disc(
    origin: Complex64,
    rmax: f64,
    h: f64,
    depth: usize,
    g: &dyn Fn(Complex64) -> Complex64,
) -> (Complex64, usize) {
    let ps = panels(rmax, h, depth);
    let n_theta = ((2.0 * PI * rmax / h).ceil() as usize).max(64);
    let dtheta = 2.0 * PI / n_theta as f64;
    let dirs: Vec<Complex64> = (0..n_theta).map(|k| Complex64::from_polar(1.0, k as f64 * dtheta)).collect();
    let mut acc = Acc::default();
    for &(a, b) in &ps {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            let r = mid + half * x;
            let mut ring = Acc::default();
            for d in &dirs {
                ring.add(g(origin + d * r));
            }
            acc.add(ring.value() * (w * half * r * dtheta));
        }
    }
    (acc.value(), ps.len() * n_theta)
}

struct Lhs {
    value: Complex64,
    cells: usize,
}

fn lhs(f: &Rational, v: &SmoothTestForm, h: f64, depth: usize) -> Lhs {
    let c = v.center();
    let reach = v.radius;
    // Pole discs for every pole whose disc can meet the support.
    let all: Vec<Complex64> = f.poles.iter().map(|p| p.0).collect();
    let mut discs: Vec<(Complex64, f64)> = Vec::new();
    for (i, &a) in all.iter().enumerate() {
        let sep =
            all.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, b)| (a - b).norm()).fold(f64::INFINITY, f64::min);
        let rho = (0.4 * sep).min(reach);
        if (a - c).norm() < reach + rho {
            discs.push((a, rho));
        }
    }
    let density = |z: Complex64| f.eval(z) * dbar_eval(v, z) * AREA_FACTOR;
    let mut total = Acc::default();
    let mut cells = 0;
    for &(a, rho) in &discs {
        let g = |z: Complex64| {
            let w = cutoff((z - a).norm() / rho);
            if w == 0.0 || !v.in_support(z) {
                Complex64::new(0.0, 0.0)
            } else {
                density(z) * w
            }
        };
        let (val, n) = polar_disc(a, rho, h.min(rho / 4.0), depth, &g);
        total.add(val);
        cells += n;
    }
    let outer = |z: Complex64| {
        let w = 1.0 - discs.iter().map(|&(a, rho)| cutoff((z - a).norm() / rho)).sum::<f64>();
        if w <= 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            density(z) * w
        }
    };
    let (val, n) = polar_disc(c, reach, h, 0, &outer);
    total.add(val);
    cells += n;
    Lhs { value: total.value(), cells }
}

/// `2πi Σ res_P(ω) v(P)`.
fn rhs(f: &Rational, v: &SmoothTestForm) -> Complex64 {
    let s: Complex64 = f.poles.iter().map(|(a, res)| res * v.value(*a)).sum();
    Complex64::new(0.0, 2.0 * PI) * s
}

/// Compares both sides of the Cauchy–Stokes formula.
pub fn stokes_check(omega: &Differential1, v: &SmoothTestForm, cfg: &QuadratureConfig) -> Result<StokesReport> {
    stokes_check_signed(omega, v, cfg, 1.0)
}

/// As [`stokes_check`] with the right side multiplied by `sign`.
pub fn stokes_check_signed(
    omega: &Differential1,
    v: &SmoothTestForm,
    cfg: &QuadratureConfig,
    sign: f64,
) -> Result<StokesReport> {
    cfg.validate()?;
    if !(v.radius > 0.0 && v.radius.is_finite()) {
        return Err(PolarError::Precondition("bump radius must be positive".into()));
    }
    let f = Rational::new(omega)?;
    let coarse = lhs(&f, v, cfg.base_cell, cfg.depth);
    let fine = lhs(&f, v, cfg.base_cell / 2.0, cfg.depth);
    let scale = fine.value.norm().max(cfg.abs_floor);
    let drift = (fine.value - coarse.value).norm() / scale;
    if drift > cfg.tol {
        return Err(PolarError::Quadrature(format!(
            "refinement changed the integral by {drift:.3e} (tolerance {:.1e})",
            cfg.tol
        )));
    }
    let r = rhs(&f, v) * sign;
    let rel_error = (fine.value - r).norm() / r.norm().max(cfg.abs_floor);
    Ok(StokesReport {
        lhs: [fine.value.re, fine.value.im],
        rhs: [r.re, r.im],
        rel_error,
        cells: coarse.cells + fine.cells,
        poles: f.poles.iter().map(|(a, _)| [a.re + 0.0, a.im + 0.0]).collect(),
    })
}

/// A named packaged configuration.
pub struct PackagedCase {
    pub name: &'static str,
    pub omega: Differential1,
    pub v: SmoothTestForm,
}

fn term(z: u32, zbar: u32, re: f64, im: f64) -> PolyTerm {
    PolyTerm { z, zbar, coeff: [re, im] }
}

/// The three reference configurations.
pub fn packaged_cases() -> Vec<PackagedCase> {
    let p = |c: &[i64]| Poly::<Rat>::from_ints(c);
    vec![
        PackagedCase {
            name: "dz/z, unit bump at 0",
            omega: Differential1::line_rat(&p(&[1]), &p(&[0, 1])),
            v: SmoothTestForm::bump(Complex64::new(0.0, 0.0), 1.0).expect("valid"),
        },
        PackagedCase {
            name: "-dz/(z(z-1)), bump at 1/2 radius 3/2",
            omega: Differential1::line_rat(&p(&[-1]), &p(&[0, -1, 1])),
            v: SmoothTestForm::new(
                Complex64::new(0.5, 0.0),
                1.5,
                vec![term(0, 0, 1.0, 0.0), term(0, 1, 0.5, 0.25), term(1, 1, -0.3, 0.0), term(2, 0, 0.0, 0.2)],
            )
            .expect("valid"),
        },
        PackagedCase {
            name: "dz/(z^2+1), bump at 0.3+0.2i radius 1.6",
            omega: Differential1::line_rat(&p(&[1]), &p(&[1, 0, 1])),
            v: SmoothTestForm::new(Complex64::new(0.3, 0.2), 1.6, vec![term(1, 0, 1.0, 0.0), term(0, 0, 0.5, -0.5)])
                .expect("valid"),
        },
    ]
}


#[cfg(test)]
mod packaged {
    use super::*;

    #[test]
    fn all_cases_within_tolerance() {
        for case in packaged_cases() {
            let cfg = QuadratureConfig::default();
            let r = stokes_check(&case.omega, &case.v, &cfg).unwrap();
            let finer =
                stokes_check(&case.omega, &case.v, &QuadratureConfig { base_cell: cfg.base_cell / 2.0, ..cfg.clone() })
                    .unwrap();
            eprintln!("{}: {:e} -> {:e}", case.name, r.rel_error, finer.rel_error);
            assert!(r.rel_error <= 1e-6, "{}: {r:?}", case.name);
            assert!(finer.rel_error <= r.rel_error.max(1e-12), "{}", case.name);
        }
    }
}
