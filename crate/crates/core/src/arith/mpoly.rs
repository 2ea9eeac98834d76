use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::field::{Field, Rat};
use super::linalg::bareiss_det_poly;
use super::poly::Poly;
use crate::error::{PolarError, Result};

/// Sparse polynomial in a fixed number of variables over Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self::from_terms(nvars, [(vec![0; nvars], c)])
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rat::one())
    }

    /// The variable with index `i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::from_terms(nvars, [(e, Rat::one())])
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Rat)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    /// Embeds a univariate polynomial as a polynomial in variable `i`.
    pub fn from_univariate(nvars: usize, i: usize, p: &Poly<Rat>) -> Self {
        Self::from_terms(
            nvars,
            p.coeffs().iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; nvars];
                e[i] = k as u32;
                (e, c.clone())
            }),
        )
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> Rat {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> i64 {
        self.terms.keys().map(|e| e.iter().map(|&x| x as i64).sum()).max().unwrap_or(-1)
    }

    pub fn degree_in(&self, i: usize) -> i64 {
        self.terms.keys().map(|e| e[i] as i64).max().unwrap_or(-1)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                p.add_term(f, c * Rat::from_integer(e[i].into()));
            }
        }
        p
    }

    /// Evaluates at a point with coordinates in any field containing Q.
    pub fn eval<F: Field>(&self, pt: &[F]) -> F {
        assert_eq!(pt.len(), self.nvars);
        let mut acc = F::zero();
        for (e, c) in &self.terms {
            let mut t = F::from_rat(c.clone());
            for (x, &k) in pt.iter().zip(e) {
                for _ in 0..k {
                    t = t * x.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitutes `subs[i]` for variable `i`; all substitutes share one arity.
    pub fn substitute(&self, subs: &[MPoly]) -> MPoly {
        assert_eq!(subs.len(), self.nvars);
        let n = subs.first().map_or(0, |s| s.nvars);
        let mut cache: Vec<Vec<MPoly>> = subs.iter().map(|s| vec![MPoly::one(n), s.clone()]).collect();
        let mut acc = MPoly::zero(n);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while cache[i].len() <= k as usize {
                    let next = &cache[i][cache[i].len() - 1] * &subs[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][k as usize];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Converts a polynomial involving only variable `i` to univariate form.
    pub fn to_univariate(&self, i: usize) -> Option<Poly<Rat>> {
        let mut cs = vec![Rat::zero(); (self.degree_in(i).max(0) + 1) as usize];
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != i && k > 0) {
                return None;
            }
            cs[e[i] as usize] = c.clone();
        }
        Some(Poly::new(cs))
    }

    /// Coefficients of powers of variable `i`, lowest first.
    pub fn coeffs_in(&self, i: usize) -> Vec<MPoly> {
        let d = self.degree_in(i).max(0) as usize;
        let mut out = vec![MPoly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = f[i] as usize;
            f[i] = 0;
            out[k].add_term(f, c.clone());
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    /// For a bivariate polynomial: coefficients in `y` as polynomials in `x`.
    pub fn y_coeffs_over_x(&self) -> Vec<Poly<Rat>> {
        assert_eq!(self.nvars, 2);
        self.coeffs_in(1).iter().map(|c| c.to_univariate(0).expect("only x remains")).collect()
    }

    fn leading(&self) -> Option<(&Vec<u32>, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Exact quotient `self / d` under lexicographic order, if `d` divides.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let (de, dc) = d.leading().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut r = self.clone();
        let mut q = MPoly::zero(self.nvars);
        while let Some((e, c)) = r.leading().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&de).any(|(a, b)| a < b) {
                return None;
            }
            let f: Vec<u32> = e.iter().zip(&de).map(|(a, b)| a - b).collect();
            let t = MPoly::from_terms(self.nvars, [(f, c / &dc)]);
            r = &r - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    pub fn divides(&self, other: &MPoly) -> bool {
        other.exact_div(self).is_some()
    }

    pub fn pretty(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (e, c) in self.terms.iter().rev() {
            let neg = c < &Rat::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].to_string() } else { format!("{}^{}", names[i], k) })
                .collect();
            if mono.is_empty() {
                s.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    s.push_str(&format!("{mag}*"));
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x", "y", "z", "w"];
        if self.nvars <= 4 {
            f.write_str(&self.pretty(&names[..self.nvars]))
        } else {
            write!(f, "{:?}", self.terms)
        }
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, o: &MPoly) -> MPoly {
        assert_eq!(self.nvars, o.nvars);
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, o: &MPoly) -> MPoly {
        self + &(-o)
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect() }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, o: &MPoly) -> MPoly {
        assert_eq!(self.nvars, o.nvars);
        let mut r = MPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                r.add_term(e, ca * cb);
            }
        }
        r
    }
}

/// Resultant with respect to `y` of two bivariate polynomials in `(x, y)`,
/// as a polynomial in `x` (Sylvester determinant).
pub fn resultant(p: &MPoly, q: &MPoly) -> Result<Poly<Rat>> {
    if p.is_zero() || q.is_zero() {
        return Err(PolarError::ZeroPolynomial);
    }
    let a = p.y_coeffs_over_x();
    let b = q.y_coeffs_over_x();
    let (m, n) = (a.len() - 1, b.len() - 1);
    if m == 0 && n == 0 {
        return Err(PolarError::ConstantInEliminated);
    }
    if m == 0 {
        return Ok(a[0].pow(n as u32));
    }
    if n == 0 {
        return Ok(b[0].pow(m as u32));
    }
    let size = m + n;
    let mut rows = vec![vec![Poly::zero(); size]; size];
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            rows[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            rows[n + i][i + k] = c.clone();
        }
    }
    Ok(bareiss_det_poly(rows))
}
