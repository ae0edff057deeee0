//! Fracpairs: unreduced pairs of integers, zero denominator allowed.
//!
//! Addition follows the gcd-based rule
//!
//! ```text
//! q ≠ 0 ∧ s ≠ 0  →  p/q + r/s ≅ ((p·s + q·r) \ g) / ((q·s) \ g),   g = gcd(q, s)
//! ```
//!
//! completed by the zero-denominator cases in [`ZeroMode`]. When both
//! denominators are negative `g` is taken negative as well, so that
//! `p/q + r/q ≅ (p+r)/q` holds for every `q ≠ 0`. Negation,
//! multiplication and division are componentwise and never reduce.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fracpair<T> {
    pub num: T,
    pub den: T,
}

/// How `p/0 + r/0` is completed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ZeroMode {
    /// `p/0 + r/0 ≅ (p+r)/0`, keeping the quasi-cardinality rule unconditional.
    SumNumerators,
    /// `p/0 + r/0 ≅ 0/0`, forgetting both numerators.
    #[default]
    Collapse,
}

/// Integer division with `n \ 0 = 0`.
pub fn int_div<T: Integer + Clone>(n: &T, d: &T) -> T {
    if d.is_zero() {
        T::zero()
    } else {
        n.clone() / d.clone()
    }
}

impl<T> Fracpair<T>
where
    T: Integer + Signed + Clone,
{
    pub fn new(num: T, den: T) -> Self {
        Fracpair { num, den }
    }

    pub fn sum(&self, other: &Self, mode: ZeroMode) -> Self {
        let (p, q) = (&self.num, &self.den);
        let (r, s) = (&other.num, &other.den);
        match (q.is_zero(), s.is_zero()) {
            (false, false) => {
                let mut g = q.gcd(s);
                if q.is_negative() && s.is_negative() {
                    g = -g;
                }
                let num = p.clone() * s.clone() + q.clone() * r.clone();
                let den = q.clone() * s.clone();
                Fracpair::new(int_div(&num, &g), int_div(&den, &g))
            }
            (false, true) => self.clone(),
            (true, false) => other.clone(),
            (true, true) => match mode {
                ZeroMode::SumNumerators => Fracpair::new(p.clone() + r.clone(), T::zero()),
                ZeroMode::Collapse => Fracpair::new(T::zero(), T::zero()),
            },
        }
    }

    /// `-(p/q) = (-p)/q`
    pub fn negated(&self) -> Self {
        Fracpair::new(-self.num.clone(), self.den.clone())
    }

    /// `(p/q)·(r/s) = (p·r)/(q·s)`
    pub fn product(&self, other: &Self) -> Self {
        Fracpair::new(
            self.num.clone() * other.num.clone(),
            self.den.clone() * other.den.clone(),
        )
    }

    /// `(p/q)/(r/s) = (p·s)/(q·r)`
    pub fn quotient(&self, other: &Self) -> Self {
        Fracpair::new(
            self.num.clone() * other.den.clone(),
            self.den.clone() * other.num.clone(),
        )
    }

    /// Cross-multiplication equivalence `p·s = q·r`.
    pub fn is_equivalent(&self, other: &Self) -> bool {
        self.num.clone() * other.den.clone() == self.den.clone() * other.num.clone()
    }

    /// Value in the involutive rationals; a zero denominator gives 0.
    pub fn value(&self) -> Ratio<T> {
        if self.den.is_zero() {
            Ratio::zero()
        } else {
            Ratio::new(self.num.clone(), self.den.clone())
        }
    }
}

impl<T: fmt::Display> fmt::Display for Fracpair<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FracpairParseError {
    #[error("expected p/q, got {0:?}")]
    Shape(String),
    #[error("invalid integer {0:?}")]
    Integer(String),
}

fn parse_int<T: Num>(s: &str) -> Result<T, FracpairParseError> {
    let s = s.trim();
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(FracpairParseError::Integer(s.to_string()));
    }
    T::from_str_radix(s, 10).map_err(|_| FracpairParseError::Integer(s.to_string()))
}

impl<T: Num> FromStr for Fracpair<T> {
    type Err = FracpairParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (num, den) = s
            .split_once('/')
            .ok_or_else(|| FracpairParseError::Shape(s.to_string()))?;
        Ok(Fracpair {
            num: parse_int(num)?,
            den: parse_int(den)?,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct FracpairJson {
    num: String,
    den: String,
}

impl<T: fmt::Display> Serialize for Fracpair<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FracpairJson {
            num: self.num.to_string(),
            den: self.den.to_string(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Num> Deserialize<'de> for Fracpair<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let j = FracpairJson::deserialize(deserializer)?;
        Ok(Fracpair {
            num: parse_int(&j.num).map_err(serde::de::Error::custom)?,
            den: parse_int(&j.den).map_err(serde::de::Error::custom)?,
        })
    }
}
