use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::factor::factor_rational;
use super::field::{format_rat, rat, rat_to_f64, Field, Rat};
use super::poly::Poly;
use crate::error::{PolarError, Result};

/// A simple algebraic extension `Q[θ]/(m(θ))` with `m` monic irreducible.
#[derive(Debug)]
pub struct NumberField {
    modulus: Poly<Rat>,
    /// Power sums `p_k = Σ θ_i^k` over the roots, `k < 2·deg`.
    power_sums: Vec<Rat>,
}

impl NumberField {
    /// Builds the field, rejecting reducible or degree-1 moduli.
    pub fn new(modulus: &Poly<Rat>) -> Result<Arc<Self>> {
        let m = modulus.monic();
        if m.deg() < 2 {
            return Err(PolarError::Precondition("number field modulus must have degree at least 2".into()));
        }
        let (_, factors) = factor_rational(&m);
        if factors.len() != 1 || factors[0].1 != 1 {
            return Err(PolarError::Reducible(m.pretty("t")));
        }
        Ok(Self::new_unchecked(m))
    }

    /// Skips the irreducibility test; the caller guarantees it.
    pub fn new_unchecked(modulus: Poly<Rat>) -> Arc<Self> {
        let m = modulus.monic();
        let d = m.deg() as usize;
        let a: Vec<Rat> = m.coeffs().to_vec();
        let mut p = vec![rat(d as i64)];
        for k in 1..2 * d {
            // Newton's identities for monic m = x^d + a_{d-1} x^{d-1} + ...
            let mut s = Rat::zero();
            for i in 1..=k.min(d) {
                let ai = &a[d - i];
                if i == k {
                    s += ai * rat(k as i64);
                } else {
                    s += ai * &p[k - i];
                }
            }
            p.push(-s);
        }
        Arc::new(NumberField { modulus: m, power_sums: p })
    }

    /// `Q(√d)` presented by `w^2 - d`.
    pub fn quadratic(d: &BigInt) -> Arc<Self> {
        Self::new_unchecked(Poly::new(vec![Rat::from_integer(-d.clone()), Rat::zero(), Rat::one()]))
    }

    pub fn modulus(&self) -> &Poly<Rat> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg() as usize
    }

    pub fn generator(self: &Arc<Self>) -> Alg {
        Alg::from_poly(Some(self.clone()), &Poly::x())
    }

    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || a.modulus == b.modulus
    }

    /// Complex roots of the modulus in a fixed order (sorted by real, then
    /// imaginary part). Used only for floating-point renderings and oracles.
    pub fn complex_roots(&self) -> Vec<Complex64> {
        let mut r = crate::arith::roots::complex_roots(&self.modulus);
        r.sort_by(|a, b| {
            a.re.partial_cmp(&b.re).unwrap_or(Ordering::Equal).then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
        });
        r
    }
}

/// Element of `Q` or of a number field.
///
/// Rational values never carry a field, so they combine freely with
/// elements of any field. Mixing two different fields panics; the
/// fallible entry points use [`Alg::compatible`] first.
#[derive(Clone)]
pub struct Alg {
    field: Option<Arc<NumberField>>,
    coeffs: Vec<Rat>,
}

impl Alg {
    pub fn from_rat(r: Rat) -> Self {
        if r.is_zero() {
            Alg { field: None, coeffs: Vec::new() }
        } else {
            Alg { field: None, coeffs: vec![r] }
        }
    }

    pub fn int(n: i64) -> Self {
        Self::from_rat(rat(n))
    }

    /// Reduces `p(θ)` into the field.
    pub fn from_poly(field: Option<Arc<NumberField>>, p: &Poly<Rat>) -> Self {
        match field {
            None => {
                assert!(p.is_constant(), "polynomial element without a field");
                Self::from_rat(p.coeff(0))
            }
            Some(k) => {
                let r = p.rem(&k.modulus);
                if r.is_constant() {
                    Self::from_rat(r.coeff(0))
                } else {
                    Alg { field: Some(k), coeffs: r.into_coeffs() }
                }
            }
        }
    }

    pub fn from_coords(field: &Arc<NumberField>, coords: &[Rat]) -> Self {
        Self::from_poly(Some(field.clone()), &Poly::new(coords.to_vec()))
    }

    pub fn field(&self) -> Option<&Arc<NumberField>> {
        self.field.as_ref()
    }

    pub fn is_rational(&self) -> bool {
        self.field.is_none()
    }

    pub fn as_rat(&self) -> Option<Rat> {
        self.field.is_none().then(|| self.coeffs.first().cloned().unwrap_or_else(Rat::zero))
    }

    pub fn to_poly(&self) -> Poly<Rat> {
        Poly::new(self.coeffs.clone())
    }

    /// Coordinates in the power basis of `field`, padded to its degree.
    pub fn coords_in(&self, field: Option<&Arc<NumberField>>) -> Vec<Rat> {
        let d = field.map_or(1, |k| k.degree());
        let mut v = self.coeffs.clone();
        v.resize(d, Rat::zero());
        v
    }

    /// True when both values can live in one field.
    pub fn compatible(&self, other: &Alg) -> bool {
        match (&self.field, &other.field) {
            (Some(a), Some(b)) => NumberField::same(a, b),
            _ => true,
        }
    }

    pub fn common_field<'a>(items: impl IntoIterator<Item = &'a Alg>) -> Result<Option<Arc<NumberField>>> {
        let mut out: Option<Arc<NumberField>> = None;
        for a in items {
            if let Some(k) = &a.field {
                match &out {
                    None => out = Some(k.clone()),
                    Some(o) if NumberField::same(o, k) => {}
                    Some(_) => return Err(PolarError::FieldMismatch),
                }
            }
        }
        Ok(out)
    }

    fn unify(&self, other: &Alg) -> Option<Arc<NumberField>> {
        match (&self.field, &other.field) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => {
                assert!(NumberField::same(a, b), "arithmetic across different number fields");
                Some(a.clone())
            }
        }
    }

    /// Trace from `field` (or Q) down to Q.
    pub fn trace_in(&self, field: Option<&Arc<NumberField>>) -> Rat {
        match field {
            None => {
                assert!(self.is_rational());
                self.as_rat().unwrap()
            }
            Some(k) => {
                if let Some(f) = &self.field {
                    assert!(NumberField::same(f, k));
                }
                self.coeffs.iter().zip(&k.power_sums).map(|(c, p)| c * p).sum()
            }
        }
    }

    /// Trace over the element's own field.
    pub fn trace(&self) -> Rat {
        self.trace_in(self.field.as_ref())
    }

    /// Characteristic polynomial of multiplication by `self` on `field`.
    pub fn charpoly_in(&self, field: Option<&Arc<NumberField>>) -> Poly<Rat> {
        let d = field.map_or(1, |k| k.degree());
        let mut p = Vec::with_capacity(d + 1);
        let mut pw = Alg::int(1);
        p.push(Rat::zero());
        for _ in 1..=d {
            pw = pw * self.clone();
            p.push(pw.trace_in(field));
        }
        poly_from_power_sums(&p, d)
    }

    /// Minimal polynomial over Q (monic).
    pub fn minpoly(&self) -> Poly<Rat> {
        self.charpoly_in(self.field.as_ref()).squarefree_part()
    }

    pub fn norm(&self) -> Rat {
        let d = self.field.as_ref().map_or(1, |k| k.degree());
        let c = self.charpoly_in(self.field.as_ref()).coeff(0);
        if d.is_multiple_of(2) {
            c
        } else {
            -c
        }
    }

    pub fn pow(&self, mut e: u32) -> Alg {
        let mut base = self.clone();
        let mut acc = Alg::int(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// Value under the embedding `θ ↦ root`.
    pub fn to_complex(&self, root: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * root + Complex64::new(rat_to_f64(c), 0.0);
        }
        acc
    }

    /// All complex conjugates, in the order of [`NumberField::complex_roots`].
    pub fn conjugates(&self) -> Vec<Complex64> {
        match &self.field {
            None => vec![Complex64::new(rat_to_f64(&self.as_rat().unwrap()), 0.0)],
            Some(k) => k.complex_roots().into_iter().map(|r| self.to_complex(r)).collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match &self.field {
            None => serde_json::Value::String(format_rat(&self.as_rat().unwrap())),
            Some(k) => serde_json::json!({
                "min_poly": k.modulus.coeffs().iter().map(format_rat).collect::<Vec<_>>(),
                "coeffs": self.coeffs_padded().iter().map(format_rat).collect::<Vec<_>>(),
            }),
        }
    }

    fn coeffs_padded(&self) -> Vec<Rat> {
        self.coords_in(self.field.as_ref())
    }
}

impl Field for Alg {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        match &self.field {
            None => Alg::from_rat(self.as_rat().unwrap().recip()),
            Some(k) => {
                let (g, s, _) = Poly::ext_gcd(&self.to_poly(), &k.modulus);
                assert!(g.is_one_poly(), "non-invertible element: modulus is reducible");
                Alg::from_poly(Some(k.clone()), &s)
            }
        }
    }

    fn from_rat(r: Rat) -> Self {
        Alg::from_rat(r)
    }
}

impl Poly<Rat> {
    fn is_one_poly(&self) -> bool {
        self.coeffs().len() == 1 && self.coeffs()[0].is_one()
    }
}

impl Zero for Alg {
    fn zero() -> Self {
        Alg::from_rat(Rat::zero())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Alg {
    fn one() -> Self {
        Alg::int(1)
    }
}

impl Add for Alg {
    type Output = Alg;
    fn add(self, o: Alg) -> Alg {
        let k = self.unify(&o);
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| self.coeffs.get(i).cloned().unwrap_or_default() + o.coeffs.get(i).cloned().unwrap_or_default())
            .collect();
        Alg::from_poly(k, &Poly::new(v))
    }
}

impl Sub for Alg {
    type Output = Alg;
    fn sub(self, o: Alg) -> Alg {
        self + (-o)
    }
}

impl Neg for Alg {
    type Output = Alg;
    fn neg(self) -> Alg {
        Alg { field: self.field, coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl Mul for Alg {
    type Output = Alg;
    fn mul(self, o: Alg) -> Alg {
        if self.is_zero() || o.is_zero() {
            return Alg::zero();
        }
        let k = self.unify(&o);
        let p = &self.to_poly() * &o.to_poly();
        Alg::from_poly(k, &p)
    }
}

impl Div for Alg {
    type Output = Alg;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Alg) -> Alg {
        self * o.inv()
    }
}

impl PartialEq for Alg {
    fn eq(&self, o: &Alg) -> bool {
        self.coeffs == o.coeffs
            && match (&self.field, &o.field) {
                (None, None) => true,
                (Some(a), Some(b)) => NumberField::same(a, b),
                _ => false,
            }
    }
}

impl Eq for Alg {}

impl Ord for Alg {
    fn cmp(&self, o: &Alg) -> Ordering {
        let ka = self.field.as_ref().map(|k| k.modulus.coeffs());
        let kb = o.field.as_ref().map(|k| k.modulus.coeffs());
        ka.cmp(&kb).then_with(|| self.coeffs.cmp(&o.coeffs))
    }
}

impl PartialOrd for Alg {
    fn partial_cmp(&self, o: &Alg) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Hash for Alg {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.field.as_ref().map(|k| k.modulus.coeffs().to_vec()).hash(h);
        self.coeffs.hash(h);
    }
}

impl fmt::Debug for Alg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Alg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            None => write!(f, "{}", self.as_rat().unwrap()),
            Some(k) => write!(f, "[{} mod {}]", self.to_poly().pretty("t"), k.modulus.pretty("t")),
        }
    }
}

impl From<Rat> for Alg {
    fn from(r: Rat) -> Alg {
        Alg::from_rat(r)
    }
}

impl Default for Alg {
    fn default() -> Self {
        Alg::zero()
    }
}

/// Monic polynomial of degree `d` whose roots have power sums `p[1..=d]`
/// (Newton's identities; `p[0]` is ignored).
pub fn poly_from_power_sums(p: &[Rat], d: usize) -> Poly<Rat> {
    let mut e = vec![Rat::one()];
    for k in 1..=d {
        let mut s = Rat::zero();
        for i in 1..=k {
            let term = &e[k - i] * &p[i];
            if i % 2 == 1 {
                s += term;
            } else {
                s -= term;
            }
        }
        e.push(s / rat(k as i64));
    }
    let mut c = vec![Rat::zero(); d + 1];
    for (k, ek) in e.iter().enumerate() {
        c[d - k] = if k % 2 == 0 { ek.clone() } else { -ek.clone() };
    }
    Poly::new(c)
}

/// Sum of `expr(a)` over all roots `a` of the irreducible `conjugacy`.
pub fn trace_sum(num: &Poly<Rat>, den: &Poly<Rat>, conjugacy: &Poly<Rat>) -> Result<Rat> {
    if conjugacy.deg() < 1 {
        return Err(PolarError::Precondition("conjugacy polynomial must be nonconstant".into()));
    }
    let (_, fs) = factor_rational(conjugacy);
    if fs.len() != 1 || fs[0].1 != 1 {
        return Err(PolarError::Reducible(conjugacy.pretty("z")));
    }
    if den.is_zero() {
        return Err(PolarError::ZeroPolynomial);
    }
    if conjugacy.deg() == 1 {
        let a = -conjugacy.coeff(0) / conjugacy.coeff(1);
        let d = den.eval(&a);
        if d.is_zero() {
            return Err(PolarError::PoleAtRoot);
        }
        return Ok(num.eval(&a) / d);
    }
    let k = NumberField::new_unchecked(conjugacy.clone());
    let t = k.generator();
    let d = den.lift::<Alg>().eval(&t);
    if d.is_zero() {
        return Err(PolarError::PoleAtRoot);
    }
    let v = num.lift::<Alg>().eval(&t) / d;
    Ok(v.trace_in(Some(&k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::ratio;

    fn sqrt2() -> Arc<NumberField> {
        NumberField::new(&Poly::from_ints(&[-2, 0, 1])).unwrap()
    }

    #[test]
    fn arithmetic_in_quadratic_field() {
        let k = sqrt2();
        let w = k.generator();
        assert_eq!(w.clone() * w.clone(), Alg::int(2));
        let a = w.clone() + Alg::int(1);
        let b = a.inv();
        assert_eq!(a.clone() * b, Alg::int(1));
        assert_eq!(a.norm(), rat(-1));
        assert_eq!(a.trace(), rat(2));
        assert_eq!(a.minpoly(), Poly::from_ints(&[-1, -2, 1]));
    }

    #[test]
    fn rejects_reducible_modulus() {
        assert!(matches!(NumberField::new(&Poly::from_ints(&[-1, 0, 1])), Err(PolarError::Reducible(_))));
    }

    #[test]
    fn trace_sum_examples() {
        let m = Poly::from_ints(&[-2, 0, 1]);
        let one = Poly::one();
        assert_eq!(trace_sum(&Poly::x(), &one, &m).unwrap(), rat(0));
        assert_eq!(trace_sum(&Poly::from_ints(&[0, 0, 1]), &one, &m).unwrap(), rat(4));
        assert_eq!(trace_sum(&one, &Poly::from_ints(&[-3, 1]), &m).unwrap(), ratio(-6, 7));
        assert_eq!(trace_sum(&one, &Poly::from_ints(&[-2, 0, 1]), &m), Err(PolarError::PoleAtRoot));
        assert!(matches!(trace_sum(&one, &one, &Poly::from_ints(&[-1, 0, 1])), Err(PolarError::Reducible(_))));
    }

    #[test]
    fn cubic_field_charpoly() {
        let k = NumberField::new(&Poly::from_ints(&[1, 0, -1, 1])).unwrap();
        let t = k.generator();
        assert_eq!(t.charpoly_in(Some(&k)), Poly::from_ints(&[1, 0, -1, 1]));
        let u = t.clone() * t.clone() + Alg::int(1);
        let cp = u.charpoly_in(Some(&k));
        assert_eq!(cp.lift::<Alg>().eval(&u), Alg::zero());
    }
}
