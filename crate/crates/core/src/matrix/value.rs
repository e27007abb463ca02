use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An exact rational truth value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Value(Ratio<i64>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is not a reduced rational value token")]
pub struct ValueTokenError(pub String);

impl Value {
    pub const ZERO: Value = Value(Ratio::new_raw(0, 1));
    pub const HALF: Value = Value(Ratio::new_raw(1, 2));
    pub const ONE: Value = Value(Ratio::new_raw(1, 1));

    /// `numer/denom`, reduced. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Value {
        Value(Ratio::new(numer, denom))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// `1 - self`
    pub fn complement(self) -> Value {
        Value(Ratio::one() - self.0)
    }

    /// `self + rhs` (unbounded)
    pub fn plus(self, rhs: Value) -> Value {
        Value(self.0 + rhs.0)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Value {
    type Err = ValueTokenError;

    /// Accepts only canonical tokens: `"0"`, `"1"`, `"-2"`, `"1/2"`; not
    /// `"2/4"`, `"1/1"` or `" 1"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ValueTokenError(s.to_string());
        let parse_int = |t: &str| -> Option<i64> {
            let digits = t.strip_prefix('-').unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return None;
            }
            t.parse().ok()
        };
        let value = match s.split_once('/') {
            None => Value(Ratio::from_integer(parse_int(s).ok_or_else(bad)?)),
            Some((n, d)) => {
                let n = parse_int(n).ok_or_else(bad)?;
                let d = parse_int(d).ok_or_else(bad)?;
                if d <= 0 {
                    return Err(bad());
                }
                Value(Ratio::new(n, d))
            }
        };
        if value.to_string() != s {
            return Err(bad());
        }
        Ok(value)
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
