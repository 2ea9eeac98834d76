//! Truncated Laurent series with tracked absolute precision.

use super::field::Field;
use super::poly::Poly;
use crate::error::{PolarError, Result};

/// `Σ coeffs[i] t^(val+i) + O(t^prec)`; `prec = None` means exact.
///
/// The first stored coefficient is nonzero. A series with no known nonzero
/// term stores no coefficients and has `val == prec`.
#[derive(Clone, Debug, PartialEq)]
pub struct Laurent<F> {
    val: i64,
    coeffs: Vec<F>,
    prec: Option<i64>,
}

fn pmin(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<F: Field> Laurent<F> {
    fn build(val: i64, mut coeffs: Vec<F>, prec: Option<i64>) -> Self {
        let mut val = val;
        if let Some(p) = prec {
            let keep = (p - val).max(0) as usize;
            coeffs.truncate(keep);
        }
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Laurent { val: prec.unwrap_or(0), coeffs: Vec::new(), prec },
            Some(i) => {
                coeffs.drain(..i);
                val += i as i64;
                while coeffs.last().is_some_and(|c| c.is_zero()) {
                    coeffs.pop();
                }
                Laurent { val, coeffs, prec }
            }
        }
    }

    pub fn exact(val: i64, coeffs: Vec<F>) -> Self {
        Self::build(val, coeffs, None)
    }

    pub fn with_precision(val: i64, coeffs: Vec<F>, prec: i64) -> Self {
        Self::build(val, coeffs, Some(prec))
    }

    pub fn from_poly(p: &Poly<F>) -> Self {
        Self::exact(0, p.coeffs().to_vec())
    }

    pub fn monomial(c: F, k: i64) -> Self {
        Self::exact(k, vec![c])
    }

    pub fn zero() -> Self {
        Self::exact(0, Vec::new())
    }

    /// `O(t^p)`.
    pub fn big_o(p: i64) -> Self {
        Self::build(p, Vec::new(), Some(p))
    }

    pub fn prec(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Exponent of the first nonzero term, if one is known.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.val)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.prec.is_none()
    }

    /// Coefficient of `t^k`, or `None` if it lies beyond the precision.
    pub fn coeff(&self, k: i64) -> Option<F> {
        if self.prec.is_some_and(|p| k >= p) {
            return None;
        }
        if k < self.val || k >= self.val + self.coeffs.len() as i64 {
            return Some(F::zero());
        }
        Some(self.coeffs[(k - self.val) as usize].clone())
    }

    pub fn leading_coeff(&self) -> Option<F> {
        self.coeffs.first().cloned()
    }

    /// Effective lower exponent used in precision bookkeeping.
    fn low(&self) -> i64 {
        self.val
    }

    pub fn truncate(&self, p: i64) -> Self {
        Self::build(self.val, self.coeffs.clone(), pmin(self.prec, Some(p)))
    }

    pub fn shift(&self, k: i64) -> Self {
        Laurent { val: self.val + k, coeffs: self.coeffs.clone(), prec: self.prec.map(|p| p + k) }
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::build(self.val, self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(), self.prec)
    }

    pub fn neg(&self) -> Self {
        Laurent { val: self.val, coeffs: self.coeffs.iter().map(|x| -x.clone()).collect(), prec: self.prec }
    }

    pub fn add(&self, o: &Self) -> Self {
        let prec = pmin(self.prec, o.prec);
        let lo = self.val.min(o.val);
        let hi_a = self.val + self.coeffs.len() as i64;
        let hi_b = o.val + o.coeffs.len() as i64;
        let mut hi = hi_a.max(hi_b);
        if let Some(p) = prec {
            hi = hi.min(p);
        }
        let lo = match prec {
            Some(p) => lo.min(p),
            None => lo,
        };
        let coeffs = (lo..hi.max(lo))
            .map(|k| self.coeff(k).unwrap_or_else(F::zero) + o.coeff(k).unwrap_or_else(F::zero))
            .collect();
        Self::build(lo, coeffs, prec)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_exact_zero() || o.is_exact_zero() {
            return Self::zero();
        }
        let prec = pmin(self.prec.map(|p| p + o.low()), o.prec.map(|p| p + self.low()));
        let val = self.val + o.val;
        let mut n = self.coeffs.len() + o.coeffs.len();
        n = n.saturating_sub(1);
        if let Some(p) = prec {
            n = n.min((p - val).max(0) as usize);
        }
        let mut c = vec![F::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= n {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if !b.is_zero() {
                    c[i + j] = c[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Self::build(val, c, prec)
    }

    /// Multiplicative inverse; an exact non-monomial input is expanded to
    /// `work` terms of relative precision.
    pub fn inv(&self, work: usize) -> Result<Self> {
        let c0 = self.leading_coeff().ok_or(PolarError::InsufficientPrecision)?;
        if self.is_exact() && self.coeffs.len() == 1 {
            return Ok(Self::exact(-self.val, vec![c0.inv()]));
        }
        let rel = match self.prec {
            Some(p) => ((p - self.val) as usize).min(work.max(1)),
            None => work.max(1),
        };
        let inv0 = c0.inv();
        let mut r: Vec<F> = Vec::with_capacity(rel);
        r.push(inv0.clone());
        for n in 1..rel {
            let mut s = F::zero();
            for k in 1..=n.min(self.coeffs.len() - 1) {
                let a = &self.coeffs[k];
                if !a.is_zero() {
                    s = s + a.clone() * r[n - k].clone();
                }
            }
            r.push(-(s * inv0.clone()));
        }
        Ok(Self::build(-self.val, r, Some(-self.val + rel as i64)))
    }

    pub fn div(&self, o: &Self, work: usize) -> Result<Self> {
        Ok(self.mul(&o.inv(work)?))
    }

    /// Square root with leading coefficient `root0` (`root0^2` must equal
    /// the leading coefficient); the valuation must be even.
    pub fn sqrt(&self, root0: F, work: usize) -> Result<Self> {
        let c0 = self.leading_coeff().ok_or(PolarError::InsufficientPrecision)?;
        if self.val % 2 != 0 {
            return Err(PolarError::Invariant("square root of odd-valuation series".into()));
        }
        if root0.clone() * root0.clone() != c0 {
            return Err(PolarError::Invariant("wrong leading square root".into()));
        }
        let rel = match self.prec {
            Some(p) => ((p - self.val) as usize).min(work.max(1)),
            None => work.max(1),
        };
        let two_inv = (root0.clone() + root0.clone()).inv();
        let mut s: Vec<F> = vec![root0];
        for n in 1..rel {
            let mut acc = self.coeffs.get(n).cloned().unwrap_or_else(F::zero);
            for i in 1..n {
                acc = acc - s[i].clone() * s[n - i].clone();
            }
            s.push(acc * two_inv.clone());
        }
        let half = self.val / 2;
        Ok(Self::build(half, s, Some(half + rel as i64)))
    }

    /// Termwise derivative `d/dt`.
    pub fn derivative(&self) -> Self {
        let coeffs =
            self.coeffs.iter().enumerate().map(|(i, c)| c.clone() * F::from_int(self.val + i as i64)).collect();
        Self::build(self.val - 1, coeffs, self.prec.map(|p| p - 1))
    }

    /// `p(self)` by Horner's rule.
    pub fn compose_poly(&self, p: &Poly<F>) -> Self {
        let mut acc = Self::zero();
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&Self::monomial(c.clone(), 0));
        }
        acc
    }
}
