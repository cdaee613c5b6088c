//! Exact edge-cost arithmetic.
//!
//! Costs are fixed-point decimals with six fractional digits, stored as u64
//! micro-units. Every derived quantity in this crate (distances, recovery
//! weights, path sums) is a sum or difference of input costs, so keeping the
//! representation exact makes equality comparisons between independently
//! computed routes sound with no epsilon. Floating point would drift in the
//! last ulp depending on summation order.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

/// Micro-units per whole cost unit.
const SCALE: u64 = 1_000_000;

/// Largest accepted integer part when parsing, to leave headroom for sums.
const MAX_UNITS: u64 = 1_000_000_000_000;

/// A non-negative edge cost or path length with exact decimal arithmetic.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Deserialize)]
#[serde(try_from = "String")]
pub struct Cost(u64);

impl Cost {
    pub const ZERO: Cost = Cost(0);

    /// A cost of `units` whole units.
    pub fn from_units(units: u64) -> Cost {
        Cost(units * SCALE)
    }

    pub fn from_micros(micros: u64) -> Cost {
        Cost(micros)
    }

    pub fn micros(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Exact subtraction; `None` when the result would be negative.
    pub fn checked_sub(self, other: Cost) -> Option<Cost> {
        self.0.checked_sub(other.0).map(Cost)
    }

    /// Lossy view for ratio reporting only; never used in comparisons.
    pub fn as_f64(self) -> f64 {
        self.0 as f64 / SCALE as f64
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0.checked_add(rhs.0).expect("cost overflow"))
    }
}

impl AddAssign for Cost {
    fn add_assign(&mut self, rhs: Cost) {
        *self = *self + rhs;
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::ZERO, Add::add)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let units = self.0 / SCALE;
        let frac = self.0 % SCALE;
        if frac == 0 {
            return write!(f, "{units}");
        }
        let digits = format!("{frac:06}");
        write!(f, "{units}.{}", digits.trim_end_matches('0'))
    }
}

impl fmt::Debug for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cost({self})")
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl TryFrom<String> for Cost {
    type Error = String;
    fn try_from(value: String) -> std::result::Result<Cost, String> {
        value.parse().map_err(|_| format!("invalid cost `{value}`"))
    }
}

impl FromStr for Cost {
    type Err = ParseCostError;

    fn from_str(s: &str) -> std::result::Result<Cost, ParseCostError> {
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(ParseCostError("empty cost"));
        }
        if !int_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(ParseCostError("cost must be a non-negative decimal"));
        }
        if frac_part.len() > 6 || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(ParseCostError("at most six fractional digits supported"));
        }
        let units: u64 = if int_part.is_empty() {
            0
        } else {
            int_part
                .parse()
                .map_err(|_| ParseCostError("integer part out of range"))?
        };
        if units > MAX_UNITS {
            return Err(ParseCostError("cost too large"));
        }
        let mut micros = 0u64;
        for (i, c) in frac_part.chars().enumerate() {
            micros += (c as u64 - '0' as u64) * 10u64.pow(5 - i as u32);
        }
        Ok(Cost(units * SCALE + micros))
    }
}

/// Error from parsing a decimal cost literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseCostError(pub &'static str);

impl fmt::Display for ParseCostError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl std::error::Error for ParseCostError {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_formats_decimals() {
        for (text, micros, canon) in [
            ("0", 0, "0"),
            ("7", 7_000_000, "7"),
            ("2.5", 2_500_000, "2.5"),
            ("0.000001", 1, "0.000001"),
            ("100.25", 100_250_000, "100.25"),
            (".5", 500_000, "0.5"),
        ] {
            let cost: Cost = text.parse().unwrap();
            assert_eq!(cost.micros(), micros, "parsing {text}");
            assert_eq!(cost.to_string(), canon, "formatting {text}");
        }
    }

    #[test]
    fn rejects_bad_literals() {
        for text in ["", "-1", "1.2345678", "1e3", "abc", "2000000000000"] {
            assert!(text.parse::<Cost>().is_err(), "{text} should not parse");
        }
    }

    #[test]
    fn exact_sums_and_subtraction() {
        let a: Cost = "0.1".parse().unwrap();
        let sum: Cost = std::iter::repeat_n(a, 10).sum();
        assert_eq!(sum, Cost::from_units(1));
        assert_eq!(sum.checked_sub(a).unwrap().to_string(), "0.9");
        assert_eq!(a.checked_sub(sum), None);
    }
}
