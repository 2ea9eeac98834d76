use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use super::field::{rat_to_decimal, Rat};
use super::nf::Alg;
use crate::error::{PolarError, Result};

/// Exact number times a symbolic power of `2πi`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    pub value: Alg,
    pub tau_power: i32,
}

impl Scalar {
    pub fn new(value: Alg, tau_power: i32) -> Self {
        Scalar { value, tau_power }
    }

    pub fn rational(r: Rat) -> Self {
        Scalar::new(Alg::from_rat(r), 0)
    }

    pub fn zero_with(tau_power: i32) -> Self {
        Scalar::new(Alg::zero(), tau_power)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn checked_add(&self, o: &Scalar) -> Result<Scalar> {
        if self.tau_power != o.tau_power {
            return Err(PolarError::TauMismatch { left: self.tau_power, right: o.tau_power });
        }
        if !self.value.compatible(&o.value) {
            return Err(PolarError::FieldMismatch);
        }
        Ok(Scalar::new(self.value.clone() + o.value.clone(), self.tau_power))
    }

    pub fn checked_mul(&self, o: &Scalar) -> Result<Scalar> {
        if !self.value.compatible(&o.value) {
            return Err(PolarError::FieldMismatch);
        }
        Ok(Scalar::new(self.value.clone() * o.value.clone(), self.tau_power + o.tau_power))
    }

    pub fn neg(&self) -> Scalar {
        Scalar::new(-self.value.clone(), self.tau_power)
    }

    /// Multiplies by `(2πi)^k`.
    pub fn times_tau(&self, k: i32) -> Scalar {
        Scalar::new(self.value.clone(), self.tau_power + k)
    }

    pub fn to_json(&self) -> Value {
        json!({ "value": self.value.to_json(), "tau_power": self.tau_power })
    }

    /// JSON with an extra approximate rendering of the rational part.
    pub fn to_json_decimal(&self, digits: Option<usize>) -> Value {
        let mut v = self.to_json();
        if let (Some(d), Some(r)) = (digits, self.value.as_rat()) {
            v["approx"] = Value::String(format!("{} (approx)", rat_to_decimal(&r, d)));
        }
        v
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tau_power {
            0 => write!(f, "{}", self.value),
            1 => write!(f, "{}·(2πi)", self.value),
            k => write!(f, "{}·(2πi)^{}", self.value, k),
        }
    }
}

/// Formal sum of scalars with different `2πi` powers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScalarSum {
    parts: BTreeMap<i32, Alg>,
}

impl ScalarSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, s: &Scalar) -> Result<()> {
        let cur = self.parts.remove(&s.tau_power).unwrap_or_else(Alg::zero);
        if !cur.compatible(&s.value) {
            self.parts.insert(s.tau_power, cur);
            return Err(PolarError::FieldMismatch);
        }
        let v = cur + s.value.clone();
        if !v.is_zero() {
            self.parts.insert(s.tau_power, v);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part(&self, tau_power: i32) -> Alg {
        self.parts.get(&tau_power).cloned().unwrap_or_else(Alg::zero)
    }

    pub fn parts(&self) -> impl Iterator<Item = (i32, &Alg)> {
        self.parts.iter().map(|(k, v)| (*k, v))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.parts.iter().map(|(k, v)| Scalar::new(v.clone(), *k).to_json()).collect())
    }
}
