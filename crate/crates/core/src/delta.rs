//! Exact rational slack parameter.
//!
//! All ceiling/floor expressions derived from the slack are computed in
//! integer arithmetic, never through floating point, so that thresholds like
//! `ceil((1 + delta) * n)` are reproducible bit for bit.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A strictly positive rational slack value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Delta(Ratio<i64>);

fn ceil_div(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    if num >= 0 {
        (num + den - 1) / den
    } else {
        num / den
    }
}

impl Delta {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Parameter("delta denominator is zero".into()));
        }
        let ratio = Ratio::new(numer, denom);
        if ratio <= Ratio::from_integer(0) {
            return Err(Error::Parameter(format!(
                "delta must be positive, got {}/{}",
                numer, denom
            )));
        }
        Ok(Delta(ratio))
    }

    pub fn one() -> Self {
        Delta(Ratio::from_integer(1))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn at_most_one(&self) -> bool {
        self.0 <= Ratio::from_integer(1)
    }

    /// `ceil((1 + delta) * n)`.
    pub fn ceil_one_plus_times(&self, n: usize) -> usize {
        let (p, q) = (self.numer() as i128, self.denom() as i128);
        ceil_div((q + p) * n as i128, q) as usize
    }

    /// `ceil(delta * n)`.
    pub fn ceil_times(&self, n: usize) -> usize {
        let (p, q) = (self.numer() as i128, self.denom() as i128);
        ceil_div(p * n as i128, q) as usize
    }

    /// `ceil(delta * n / 6)`.
    pub fn ceil_sixth_times(&self, n: usize) -> usize {
        let (p, q) = (self.numer() as i128, self.denom() as i128);
        ceil_div(p * n as i128, 6 * q) as usize
    }

    /// `floor(n * (1 - delta/6))`; negative when delta exceeds 6.
    pub fn floor_complement_sixth(&self, n: usize) -> i64 {
        let (p, q) = (self.numer() as i128, self.denom() as i128);
        (n as i128 * (6 * q - p)).div_euclid(6 * q) as i64
    }

    /// The slack handed to the reduced problem on `reduced_n` colours:
    /// `(ceil(delta * n) - 12) / reduced_n`. `None` when that is not positive.
    pub fn reduced(&self, n: usize, reduced_n: usize) -> Option<Delta> {
        let numer = self.ceil_times(n) as i64 - 12;
        if numer <= 0 || reduced_n == 0 {
            return None;
        }
        Some(Delta(Ratio::new(numer, reduced_n as i64)))
    }

    /// Rescales the slack when restricting from `n` colours to `sub_n`:
    /// `delta * n / sub_n`.
    pub fn rescaled(&self, n: usize, sub_n: usize) -> Result<Delta> {
        if sub_n == 0 {
            return Err(Error::Parameter("cannot rescale delta to 0 colours".into()));
        }
        let scaled = self.0 * Ratio::new(n as i64, sub_n as i64);
        Ok(Delta(scaled))
    }

    /// Smallest colour count for which the recursion is self-sustaining:
    /// `ceil(144 / delta^2)`. Reported for diagnostics only.
    pub fn n_zero(&self) -> u64 {
        let (p, q) = (self.numer() as i128, self.denom() as i128);
        ceil_div(144 * q * q, p * p) as u64
    }

    /// Exact test of `delta * sqrt(n) >= 12`, i.e. `delta^2 * n >= 144`.
    pub fn sqrt_threshold_holds(&self, n: usize) -> bool {
        let (p, q) = (self.numer() as i128, self.denom() as i128);
        p * p * n as i128 >= 144 * q * q
    }

    /// Exact comparison `self * n >= rhs * n` lifted to products:
    /// returns `self * a >= b` for integers `a`, `b`.
    pub fn times_at_least(&self, a: usize, b: i64) -> bool {
        let (p, q) = (self.numer() as i128, self.denom() as i128);
        p * a as i128 >= b as i128 * q
    }
}

impl fmt::Display for Delta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Delta {
    type Err = Error;

    /// Accepts `"1"`, `"3/4"` and plain decimals like `"0.25"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let p: i64 = num
                .trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("bad delta numerator in {s:?}")))?;
            let q: i64 = den
                .trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("bad delta denominator in {s:?}")))?;
            return Delta::new(p, q);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parameter(format!("bad decimal delta {s:?}")));
            }
            let int: i64 = if int.is_empty() {
                0
            } else {
                int.parse()
                    .map_err(|_| Error::Parameter(format!("bad decimal delta {s:?}")))?
            };
            let frac_val: i64 = frac.parse().unwrap();
            let scale = 10i64.pow(frac.len() as u32);
            return Delta::new(int * scale + frac_val, scale);
        }
        let p: i64 = s
            .parse()
            .map_err(|_| Error::Parameter(format!("bad delta {s:?}")))?;
        Delta::new(p, 1)
    }
}

impl Serialize for Delta {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Delta {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!("1".parse::<Delta>().unwrap(), Delta::new(1, 1).unwrap());
        assert_eq!("3/4".parse::<Delta>().unwrap(), Delta::new(3, 4).unwrap());
        assert_eq!("0.25".parse::<Delta>().unwrap(), Delta::new(1, 4).unwrap());
        assert_eq!("1.5".parse::<Delta>().unwrap(), Delta::new(3, 2).unwrap());
        assert!("0".parse::<Delta>().is_err());
        assert!("-1/2".parse::<Delta>().is_err());
        assert!("1/0".parse::<Delta>().is_err());
    }

    #[test]
    fn ceilings_are_exact() {
        let d = Delta::new(1, 3).unwrap();
        // (1 + 1/3) * 9 = 12 exactly
        assert_eq!(d.ceil_one_plus_times(9), 12);
        // (1 + 1/3) * 10 = 13.33..
        assert_eq!(d.ceil_one_plus_times(10), 14);
        assert_eq!(d.ceil_times(10), 4);
        assert_eq!(d.ceil_sixth_times(36), 2);
        assert_eq!(d.floor_complement_sixth(36), 34);
    }

    #[test]
    fn n_zero_matches_formula() {
        assert_eq!(Delta::one().n_zero(), 144);
        assert_eq!(Delta::new(1, 2).unwrap().n_zero(), 576);
        assert_eq!(Delta::new(3, 1).unwrap().n_zero(), 16);
    }

    #[test]
    fn reduced_slack_sign() {
        let d = Delta::one();
        assert_eq!(d.reduced(30, 23), Some(Delta::new(18, 23).unwrap()));
        // ceil(delta * n) = 12 gives a zero numerator: no reduced slack.
        assert_eq!(d.reduced(12, 9), None);
    }

    #[test]
    fn sqrt_threshold() {
        assert!(Delta::one().sqrt_threshold_holds(144));
        assert!(!Delta::one().sqrt_threshold_holds(143));
        assert!(Delta::new(1, 2).unwrap().sqrt_threshold_holds(576));
    }
}
