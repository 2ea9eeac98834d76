use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::One;

use super::factor::factor_rational;
use super::field::{Field, Rat};
use super::poly::Poly;

/// Reduced quotient of polynomials with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    /// Reduces `num/den`; panics on a zero denominator.
    pub fn new(num: Poly<F>, den: Poly<F>) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let num = num.exact_div(&g).expect("gcd divides");
        let den = den.exact_div(&g).expect("gcd divides");
        let lc = den.lc().inv();
        RatFunc { num: num.scale(&lc), den: den.scale(&lc) }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval(&self, x: &F) -> Option<F> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.num.scale(c), self.den.clone())
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> RatFunc<G> {
        RatFunc::new(self.num.map(&f), self.den.map(&f))
    }
}

impl RatFunc<Rat> {
    pub fn lift<G: Field>(&self) -> RatFunc<G> {
        self.map(|c| G::from_rat(c.clone()))
    }

    pub fn pretty(&self, var: &str) -> String {
        if self.den.is_constant() {
            self.num.pretty(var)
        } else {
            format!("({})/({})", self.num.pretty(var), self.den.pretty(var))
        }
    }
}

impl fmt::Display for RatFunc<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty("z"))
    }
}

impl<F: Field> Add for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn add(self, o: &RatFunc<F>) -> RatFunc<F> {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone());
        }
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl<F: Field> Sub for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn sub(self, o: &RatFunc<F>) -> RatFunc<F> {
        self + &(-o)
    }
}

impl<F: Field> Neg for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn neg(self) -> RatFunc<F> {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl<F: Field> Mul for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn mul(self, o: &RatFunc<F>) -> RatFunc<F> {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl<F: Field> Div for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn div(self, o: &RatFunc<F>) -> RatFunc<F> {
        assert!(!o.is_zero(), "division by the zero rational function");
        RatFunc::new(&self.num * &o.den, &self.den * &o.num)
    }
}

/// Polynomial part plus terms `numerator / pole^order`.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractions {
    pub polynomial: Poly<Rat>,
    /// `(pole_minimal_polynomial, order, numerator)` with `deg numerator < deg pole`.
    pub terms: Vec<(Poly<Rat>, usize, Poly<Rat>)>,
}

impl PartialFractions {
    pub fn recombine(&self) -> RatFunc<Rat> {
        let mut acc = RatFunc::from_poly(self.polynomial.clone());
        for (m, k, n) in &self.terms {
            acc = &acc + &RatFunc::new(n.clone(), m.pow(*k as u32));
        }
        acc
    }
}

/// Full decomposition over Q: CRT over the irreducible factors of the
/// denominator followed by `m`-adic expansion of each local numerator.
pub fn partial_fractions(f: &RatFunc<Rat>) -> PartialFractions {
    let (q, r) = f.num.div_rem(&f.den);
    let mut terms = Vec::new();
    if !r.is_zero() {
        let (_, factors) = factor_rational(&f.den);
        for (m, e) in factors {
            let pe = m.pow(e as u32);
            let cofactor = f.den.exact_div(&pe).expect("factor divides");
            let (g, s, _) = Poly::ext_gcd(&cofactor, &pe);
            debug_assert!(g.is_constant() && g.coeff(0).is_one());
            // r / den restricted to pe: numerator ≡ r · cofactor^{-1} (mod pe).
            let mut local = (&r * &s).rem(&pe);
            // m-adic digits: local = Σ c_j m^j.
            let mut j = 0;
            while !local.is_zero() {
                let (quot, digit) = local.div_rem(&m);
                if !digit.is_zero() {
                    terms.push((m.clone(), e - j, digit));
                }
                local = quot;
                j += 1;
            }
        }
    }
    terms.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| a.0.cmp(&b.0)).then(b.1.cmp(&a.1)));
    PartialFractions { polynomial: q, terms }
}
