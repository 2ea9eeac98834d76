use std::collections::BTreeSet;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::chains::PuncturedCurve;
use crate::arith::{span_rank, Alg, Matrix, Poly, Rat};
use crate::curves::{
    canonical, fiber_orbits, geometric_count, holomorphic_basis, local_coefficients, residue_value, short_label,
    x_minpoly, CurveModel, CurvePoint, Differential1,
};
use crate::error::{PolarError, Result};

/// Forms with at most simple poles inside a finite support `T`, as an
/// explicit finite-dimensional space over `Q`.
///
/// The ambient basis is an ansatz `(A + B y)/(C y) dx` (or `p/C dz`) with
/// `C` the product of the x-minimal polynomials of the affine points of `T`.
/// Conditions are linear in the ansatz coefficients and are read off from
/// local expansions at orbit representatives.
#[derive(Clone, Debug)]
pub struct SupportSpace {
    pub curve: CurveModel,
    pub support: BTreeSet<CurvePoint>,
    pub basis: Vec<Differential1>,
    base_conditions: Vec<Vec<Rat>>,
    residue_rows: Vec<Vec<Rat>>,
}

fn split_rows(coeffs: &[Vec<Alg>], k: usize, p: &CurvePoint) -> Result<Vec<Vec<Rat>>> {
    let field = p.field()?;
    let d = field.as_ref().map_or(1, |f| f.degree());
    let mut rows = vec![Vec::with_capacity(coeffs.len()); d];
    for form in coeffs {
        let c = form[k].coords_in(field.as_ref());
        for (i, v) in c.into_iter().enumerate() {
            rows[i].push(v);
        }
    }
    Ok(rows)
}

impl SupportSpace {
    pub fn new(curve: &CurveModel, support: &BTreeSet<CurvePoint>) -> Result<SupportSpace> {
        let mut minpolys: BTreeSet<Poly<Rat>> = BTreeSet::new();
        for p in support {
            if let Some(m) = x_minpoly(p) {
                minpolys.insert(m);
            }
        }
        let c = minpolys.iter().fold(Poly::<Rat>::one(), |acc, m| &acc * m);
        let dc = c.deg();
        let inf = i64::from(support.contains(&CurvePoint::Infinity));
        let cl = c.lift::<Alg>();
        let mut basis = Vec::new();
        match curve {
            CurveModel::ProjectiveLine => {
                for i in 0..=(dc - 2 + inf) {
                    let num = Poly::monomial(Alg::one(), i as usize);
                    basis.push(Differential1::line(crate::arith::RatFunc::new(num, cl.clone())));
                }
            }
            CurveModel::HyperellipticOdd { .. } => {
                let g = curve.genus() as i64;
                for i in 0..=(dc + g - 1) {
                    basis.push(Differential1::hyper(Poly::monomial(Alg::one(), i as usize), Poly::zero(), cl.clone())?);
                }
                for j in 0..=(dc - 2 + inf) {
                    basis.push(Differential1::hyper(Poly::zero(), Poly::monomial(Alg::one(), j as usize), cl.clone())?);
                }
            }
        }
        let mut space = SupportSpace {
            curve: curve.clone(),
            support: support.clone(),
            basis,
            base_conditions: Vec::new(),
            residue_rows: Vec::new(),
        };
        let mut conds = Vec::new();
        let mut res = Vec::new();
        for p in support {
            let co = space.coefficients(p, -2, -1)?;
            if p.is_weierstrass(curve) && !p.is_infinity() {
                conds.extend(split_rows(&co, 0, p)?);
            }
            res.extend(split_rows(&co, 1, p)?);
        }
        for m in &minpolys {
            for q in fiber_orbits(curve, m)? {
                if !support.contains(&q) {
                    conds.extend(space.order_conditions(&q, 0)?);
                }
            }
        }
        space.base_conditions = conds;
        space.residue_rows = res;
        Ok(space)
    }

    fn coefficients(&self, p: &CurvePoint, lo: i64, hi: i64) -> Result<Vec<Vec<Alg>>> {
        local_coefficients(&self.curve, &self.basis, p, lo, hi)
    }

    /// Rows forcing `ord_p ≥ r` on the ansatz.
    fn order_conditions(&self, p: &CurvePoint, r: i64) -> Result<Vec<Vec<Rat>>> {
        if r <= -2 {
            return Ok(Vec::new());
        }
        let co = self.coefficients(p, -2, r - 1)?;
        let mut rows = Vec::new();
        for k in 0..(r + 2) as usize {
            rows.extend(split_rows(&co, k, p)?);
        }
        Ok(rows)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Number of geometric points of the support.
    pub fn support_size(&self) -> usize {
        geometric_count(&self.support)
    }

    /// Basis (as coefficient vectors) of the forms with simple poles in
    /// the support that vanish at every puncture.
    pub fn admissible(&self, punctures: &BTreeSet<CurvePoint>) -> Result<Vec<Vec<Rat>>> {
        if let Some(p) = punctures.iter().find(|p| self.support.contains(p)) {
            return Err(PolarError::PunctureInSupport(short_label(p)));
        }
        let mut rows = self.base_conditions.clone();
        for p in punctures {
            rows.extend(self.order_conditions(p, 1)?);
        }
        let n = self.dim();
        if rows.is_empty() {
            let id = Matrix::<Rat>::identity(n);
            return Ok((0..n).map(|i| id.row(i).to_vec()).collect());
        }
        Ok(Matrix::from_rows(rows, n).kernel())
    }

    /// Residue vector (Q-coordinates over the support) of a combination.
    pub fn residues(&self, v: &[Rat]) -> Vec<Rat> {
        self.residue_rows.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn combination(&self, v: &[Rat]) -> Result<Differential1> {
        let mut acc = Differential1::zero(&self.curve);
        for (w, c) in self.basis.iter().zip(v) {
            if !c.is_zero() {
                acc = acc.add(&w.scale(&Alg::from_rat(c.clone())))?;
            }
        }
        Ok(acc)
    }
}

/// Homology dimensions computed on one finite support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteSupport {
    pub hp0: usize,
    pub hp1: usize,
    pub support_size: usize,
    pub chain_dim: usize,
    pub residue_rank: usize,
}

fn finite(space: &SupportSpace, punctures: &BTreeSet<CurvePoint>) -> Result<FiniteSupport> {
    let v = space.admissible(punctures)?;
    let images: Vec<Vec<Rat>> = v.iter().map(|b| space.residues(b)).collect();
    let size = space.support_size();
    let rank = span_rank(&images, size);
    Ok(FiniteSupport {
        hp0: size - rank,
        hp1: v.len() - rank,
        support_size: size,
        chain_dim: v.len(),
        residue_rank: rank,
    })
}

/// `|T| − rank` of the residue map on admissible chains with poles in `T`.
pub fn hp0_finite_support(x: &PuncturedCurve, t: &[CurvePoint]) -> Result<FiniteSupport> {
    let mut set = BTreeSet::new();
    for p in t {
        set.insert(canonical(&x.closure, p)?);
    }
    if let Some(p) = set.iter().find(|p| x.punctures.contains(p)) {
        return Err(PolarError::PunctureInSupport(short_label(p)));
    }
    if geometric_count(&set) < 2 {
        return Err(PolarError::Precondition("support needs at least two points".into()));
    }
    finite(&SupportSpace::new(&x.closure, &set)?, &x.punctures)
}

/// Holomorphic forms on the closure vanishing at every puncture.
pub fn hp1_punctured(x: &PuncturedCurve) -> Result<usize> {
    let basis = holomorphic_basis(&x.closure);
    if basis.is_empty() {
        return Ok(0);
    }
    let mut rows = Vec::new();
    for p in &x.punctures {
        let co = local_coefficients(&x.closure, &basis, p, 0, 0)?;
        rows.extend(split_rows(&co, 0, p)?);
    }
    Ok(basis.len() - span_rank(&rows, basis.len()))
}

/// Deterministic source of support points with rational x-coordinates.
pub struct SupportSampler {
    curve: CurveModel,
    rng: ChaCha8Rng,
    avoid: BTreeSet<CurvePoint>,
    used: BTreeSet<Rat>,
}

impl SupportSampler {
    pub fn new(curve: &CurveModel, seed: u64, avoid: &BTreeSet<CurvePoint>) -> Self {
        SupportSampler {
            curve: curve.clone(),
            rng: ChaCha8Rng::seed_from_u64(seed),
            avoid: avoid.clone(),
            used: BTreeSet::new(),
        }
    }

    /// Next orbit representative outside the avoided set.
    pub fn next_point(&mut self) -> Result<CurvePoint> {
        loop {
            let n: i64 = self.rng.gen_range(-40..=40);
            let d: i64 = self.rng.gen_range(1..=4);
            let a = Rat::new(n.into(), d.into());
            if self.used.contains(&a) || self.curve.is_weierstrass_x(&a) {
                continue;
            }
            let m = Poly::from_rats(vec![-a.clone(), Rat::one()]);
            let mut orbits = fiber_orbits(&self.curve, &m)?;
            orbits.retain(|p| !self.avoid.contains(p));
            if orbits.is_empty() {
                continue;
            }
            self.used.insert(a);
            let i = self.rng.gen_range(0..orbits.len());
            let p = orbits.swap_remove(i);
            self.avoid.insert(p.clone());
            return Ok(p);
        }
    }
}

/// Homology of a punctured curve from supports of growing size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stabilized {
    pub hp0: usize,
    pub hp1: usize,
    pub support_sizes: Vec<usize>,
    pub hp0_values: Vec<usize>,
    pub residue_ranks: Vec<usize>,
}

const EXTRA_STEPS: usize = 12;

/// Grows a random support until two consecutive sizes beyond
/// `2g + |D| + 2` give the same `hp0`.
pub fn hp0_stabilized(x: &PuncturedCurve, seed: u64) -> Result<Stabilized> {
    let bound = 2 * x.closure.genus() + x.puncture_count() + 2;
    let mut sampler = SupportSampler::new(&x.closure, seed, &x.punctures);
    let mut t = BTreeSet::new();
    if !x.punctures.contains(&CurvePoint::Infinity) {
        t.insert(CurvePoint::Infinity);
    }
    while geometric_count(&t) < bound.max(2) {
        t.insert(sampler.next_point()?);
    }
    let mut out = Stabilized { hp0: 0, hp1: 0, support_sizes: vec![], hp0_values: vec![], residue_ranks: vec![] };
    for _ in 0..EXTRA_STEPS {
        let r = finite(&SupportSpace::new(&x.closure, &t)?, &x.punctures)?;
        out.support_sizes.push(r.support_size);
        out.hp0_values.push(r.hp0);
        out.residue_ranks.push(r.residue_rank);
        let n = out.hp0_values.len();
        let beyond = out.support_sizes.iter().filter(|s| **s > bound).count();
        if beyond >= 2 && out.hp0_values[n - 1] == out.hp0_values[n - 2] {
            out.hp0 = r.hp0;
            out.hp1 = r.hp1;
            return Ok(out);
        }
        t.insert(sampler.next_point()?);
    }
    Err(PolarError::NonStabilization { cap: geometric_count(&t) })
}

/// Homology of the projective curve from an explicit generating set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectiveHomology {
    pub hp0: usize,
    pub hp1: usize,
    pub support_size: usize,
    pub generators: usize,
    pub residue_rank: usize,
}

fn eta_infinity(curve: &CurveModel, p: &CurvePoint) -> Result<Differential1> {
    let half = Alg::from_rat(Rat::new(1.into(), 2.into()));
    let CurvePoint::Affine { x, y } = p else { unreachable!("affine point") };
    match curve {
        CurveModel::ProjectiveLine => {
            Ok(Differential1::line(crate::arith::RatFunc::new(Poly::one(), Poly::linear_root(x.clone()))))
        }
        CurveModel::HyperellipticOdd { .. } => Differential1::hyper(
            Poly::constant(y.clone() * half.clone()),
            Poly::constant(half),
            Poly::linear_root(x.clone()),
        ),
    }
}

/// `HP_0` and `HP_1` of the projective curve. The generators are the
/// holomorphic basis and the traces `Tr(θ^i η_P)` of third-kind forms with
/// poles at `P` and `∞`, over a fixed support containing rational,
/// irrational and Weierstrass orbits.
pub fn hp_projective(curve: &CurveModel) -> Result<ProjectiveHomology> {
    let mut t: BTreeSet<CurvePoint> = BTreeSet::new();
    t.insert(CurvePoint::Infinity);
    let mut ms: Vec<Poly<Rat>> =
        vec![Poly::from_ints(&[0, 1]), Poly::from_ints(&[-1, 1]), Poly::from_ints(&[-2, 0, 1])];
    if let Some(f) = curve.f() {
        ms.push(crate::arith::factor_rational(f).1[0].0.clone());
    }
    for m in &ms {
        if curve.f().is_some_and(|f| f.rem(m).is_zero()) && Some(m) != ms.last() {
            continue;
        }
        t.extend(fiber_orbits(curve, m)?);
    }
    let mut gens = holomorphic_basis(curve);
    for p in t.iter().filter(|p| !p.is_infinity()) {
        let eta = eta_infinity(curve, p)?;
        match p.field()? {
            None => gens.push(eta),
            Some(k) => {
                let theta = k.generator();
                for i in 0..k.degree() {
                    gens.push(eta.scale(&theta.pow(i as u32)).trace()?);
                }
            }
        }
    }
    let size = geometric_count(&t);
    let mut images = Vec::new();
    for w in &gens {
        let mut v = Vec::with_capacity(size);
        for p in &t {
            let r = if w.is_zero() { Alg::zero() } else { residue_value(curve, w, p)? };
            v.extend(r.coords_in(p.field()?.as_ref()));
        }
        images.push(v);
    }
    let rank = span_rank(&images, size);
    let gen_rank = independent_forms(curve, &gens, &t)?;
    Ok(ProjectiveHomology {
        hp0: size - rank,
        hp1: gen_rank - rank,
        support_size: size,
        generators: gens.len(),
        residue_rank: rank,
    })
}

/// Rank of a family of forms, measured through enough Laurent coefficients
/// at the support to separate them.
fn independent_forms(curve: &CurveModel, forms: &[Differential1], t: &BTreeSet<CurvePoint>) -> Result<usize> {
    let mut cols: Vec<Vec<Rat>> = vec![Vec::new(); forms.len()];
    let depth = forms.len() as i64 + 2;
    for p in t {
        let co = local_coefficients(curve, forms, p, -2, depth)?;
        for k in 0..co.first().map_or(0, |c| c.len()) {
            let rows = split_rows(&co, k, p)?;
            for row in rows {
                for (i, v) in row.into_iter().enumerate() {
                    cols[i].push(v);
                }
            }
        }
    }
    let n = cols.first().map_or(0, |c| c.len());
    Ok(span_rank(&cols, n))
}
