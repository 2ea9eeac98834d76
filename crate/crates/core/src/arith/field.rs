use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{PolarError, Result};

/// Arbitrary-precision rational number.
pub type Rat = BigRational;

/// Coefficient field of the exact core.
///
/// Implemented by [`Rat`] and by number-field elements. `inv` panics on zero;
/// callers check `is_zero` first wherever zero is reachable from input.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn inv(&self) -> Self;
    fn from_rat(r: Rat) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rat(rat(n))
    }
}

impl Field for Rat {
    fn inv(&self) -> Self {
        self.recip()
    }

    fn from_rat(r: Rat) -> Self {
        r
    }
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `num/den`, the wire form of rationals.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `n`, `-n`, `n/d` (whitespace tolerated).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || PolarError::Precondition(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Decimal rendering with `digits` fractional digits (round half away from zero).
pub fn rat_to_decimal(r: &Rat, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r * Rat::from_integer(scale.clone());
    let rounded = scaled.round().to_integer();
    let neg = rounded.is_negative();
    let mag = rounded.abs().to_string();
    let mag = if mag.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - mag.len()), mag) } else { mag };
    let (int, frac) = mag.split_at(mag.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Square root in Q when it exists.
pub fn rat_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Writes `r = s^2 * d` with `d` a squarefree integer and `s > 0` rational.
/// Trial division only; intended for desk-scale inputs.
pub fn squarefree_decompose(r: &Rat) -> (BigInt, Rat) {
    assert!(!r.is_zero());
    // r = n/d = n*d / d^2
    let mut m: BigInt = r.numer() * r.denom();
    let sign = if m.is_negative() { -1 } else { 1 };
    m = m.abs();
    let mut square = BigInt::one();
    let mut core = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            square *= num_traits::pow(p.clone(), (e / 2) as usize);
            if e % 2 == 1 {
                core *= &p;
            }
        }
        p += 1;
    }
    core *= m;
    let s = Rat::new(square, r.denom().clone());
    (core * sign, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("-3/6").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rat(" 7 ").unwrap(), rat(7));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("abc").is_err());
        assert_eq!(format_rat(&ratio(6, -4)), "-3/2");
    }

    #[test]
    fn decimals() {
        assert_eq!(rat_to_decimal(&ratio(-1, 2), 3), "-0.500");
        assert_eq!(rat_to_decimal(&ratio(2, 3), 4), "0.6667");
        assert_eq!(rat_to_decimal(&rat(12), 0), "12");
    }

    #[test]
    fn squarefree_parts() {
        let (d, s) = squarefree_decompose(&ratio(12, 5));
        // 12/5 = 60/25 = (2/5)^2 * 15
        assert_eq!(d, BigInt::from(15));
        assert_eq!(s, ratio(2, 5));
        let (d, s) = squarefree_decompose(&rat(-8));
        assert_eq!(d, BigInt::from(-2));
        assert_eq!(s, rat(2));
        assert_eq!(rat_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(rat_sqrt(&rat(2)), None);
    }
}
