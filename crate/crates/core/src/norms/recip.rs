use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact reciprocal exponent `1/p ∈ [0, 1]`; `0` is `p = ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Recip(Ratio<i64>);

impl Recip {
    pub const ZERO: Recip = Recip(Ratio::new_raw(0, 1));
    pub const HALF: Recip = Recip(Ratio::new_raw(1, 2));
    pub const ONE: Recip = Recip(Ratio::new_raw(1, 1));

    /// The reciprocal `num/den`, reduced.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::parameter("reciprocal with zero denominator"));
        }
        Recip::from_ratio(Ratio::new(num, den))
    }

    pub fn from_ratio(v: Ratio<i64>) -> Result<Self> {
        if v < Ratio::from_integer(0) || v > Ratio::from_integer(1) {
            return Err(Error::parameter(format!("reciprocal {v} outside [0, 1]")));
        }
        Ok(Recip(v))
    }

    /// `1/p` for the exponent `p = num/den >= 1`.
    pub fn from_exponent(num: i64, den: i64) -> Result<Self> {
        if num <= 0 || den <= 0 {
            return Err(Error::parameter(format!("exponent {num}/{den} must be positive")));
        }
        Recip::from_ratio(Ratio::new(den, num))
    }

    pub fn inf() -> Self {
        Recip::ZERO
    }

    pub fn value(self) -> Ratio<i64> {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    /// The exponent `p` itself, `f64::INFINITY` at `1/p = 0`.
    pub fn exponent(self) -> f64 {
        if self.is_inf() {
            f64::INFINITY
        } else {
            *self.0.denom() as f64 / *self.0.numer() as f64
        }
    }

    pub fn is_inf(self) -> bool {
        *self.0.numer() == 0
    }

    /// `1/p' = 1 - 1/p`.
    pub fn conjugate(self) -> Recip {
        Recip(Ratio::from_integer(1) - self.0)
    }

    /// Reciprocal rendered as `num/den`, the form used in region tables.
    pub fn fraction(self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }

    /// The lattice `{0, 1/k, ..., 1}`.
    pub fn lattice(k: i64) -> Vec<Recip> {
        (0..=k).map(|i| Recip(Ratio::new(i, k))).collect()
    }
}

/// Displays the exponent: `inf`, `2`, `3/2`.
impl fmt::Display for Recip {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inf() {
            return f.write_str("inf");
        }
        let p = self.0.recip();
        if p.is_integer() {
            write!(f, "{}", p.numer())
        } else {
            write!(f, "{}/{}", p.numer(), p.denom())
        }
    }
}

/// Parses an exponent `p`: `inf`, `∞`, an integer, a fraction `a/b` or a decimal.
impl FromStr for Recip {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::parameter(format!("cannot parse exponent '{s}'"));
        if matches!(s.to_ascii_lowercase().as_str(), "inf" | "infinity" | "∞") {
            return Ok(Recip::ZERO);
        }
        let p = if let Some((a, b)) = s.split_once('/') {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b <= 0 {
                return Err(bad());
            }
            Ratio::new(a, b)
        } else if let Some((int, frac)) = s.split_once('.') {
            if frac.len() > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let den = 10i64.pow(frac.len() as u32);
            let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
            Ratio::new(int * den + frac, den)
        } else {
            Ratio::from_integer(s.parse::<i64>().map_err(|_| bad())?)
        };
        if p < Ratio::from_integer(1) {
            return Err(Error::parameter(format!("exponent '{s}' is below 1")));
        }
        Recip::from_ratio(p.recip())
    }
}

impl Serialize for Recip {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Recip {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Float(f64),
            Text(String),
        }
        let text = match Raw::deserialize(deserializer)? {
            Raw::Int(i) => i.to_string(),
            Raw::Float(x) if x.is_infinite() => "inf".to_string(),
            Raw::Float(x) => x.to_string(),
            Raw::Text(s) => s,
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}
