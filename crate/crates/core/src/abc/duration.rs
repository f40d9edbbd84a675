use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// Exact rational note length.
///
/// Inside a [`Tune`](super::Tune) event durations are counted in multiples of
/// the tune's unit note length (`L:`); header values such as `L:1/8` are
/// fractions of a whole note. Both use this type.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Duration(Ratio<u64>);

impl Duration {
    pub const ZERO: Duration = Duration(Ratio::new_raw(0, 1));
    pub const ONE: Duration = Duration(Ratio::new_raw(1, 1));
    pub const ONE_EIGHTH: Duration = Duration(Ratio::new_raw(1, 8));

    /// Returns `None` when the denominator is zero.
    pub fn new(numer: u64, denom: u64) -> Option<Self> {
        if denom == 0 {
            return None;
        }
        Some(Duration(Ratio::new(numer, denom)))
    }

    pub fn from_integer(n: u64) -> Self {
        Duration(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn is_integer(&self) -> bool {
        self.denom() == 1
    }

    /// Denominator of the form 2^a or 2^a * 3 (plain, dotted and triplet values).
    pub fn has_supported_denominator(&self) -> bool {
        let mut d = self.denom();
        if d.is_multiple_of(3) {
            d /= 3;
        }
        d.is_power_of_two()
    }

    /// Lossy conversion for reporting only.
    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// ABC length suffix relative to a unit of one: "" for 1, "3" for 3,
    /// "/2" for 1/2, "3/2" for 3/2.
    pub fn abc_suffix(&self) -> String {
        match (self.numer(), self.denom()) {
            (1, 1) => String::new(),
            (n, 1) => n.to_string(),
            (1, d) => format!("/{d}"),
            (n, d) => format!("{n}/{d}"),
        }
    }

    /// Subtraction that returns `None` instead of underflowing.
    pub fn checked_sub(self, rhs: Duration) -> Option<Duration> {
        if rhs > self {
            None
        } else {
            Some(Duration(self.0 - rhs.0))
        }
    }
}

impl fmt::Debug for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Duration({}/{})", self.numer(), self.denom())
    }
}

impl fmt::Display for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid duration {0:?}")]
pub struct ParseDurationError(pub String);

impl FromStr for Duration {
    type Err = ParseDurationError;

    /// Parses "n", "n/d" (header style, e.g. `1/8`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseDurationError(s.to_string());
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: u64 = n.parse().map_err(|_| err())?;
        let d: u64 = d.parse().map_err(|_| err())?;
        match Duration::new(n, d) {
            Some(v) if !v.is_zero() => Ok(v),
            _ => Err(err()),
        }
    }
}

impl TryFrom<String> for Duration {
    type Error = ParseDurationError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Duration> for String {
    fn from(d: Duration) -> String {
        d.to_string()
    }
}

impl Add for Duration {
    type Output = Duration;
    fn add(self, rhs: Duration) -> Duration {
        Duration(self.0 + rhs.0)
    }
}

impl AddAssign for Duration {
    fn add_assign(&mut self, rhs: Duration) {
        self.0 = self.0 + rhs.0;
    }
}

/// Panics on underflow, like unsigned integer subtraction.
impl Sub for Duration {
    type Output = Duration;
    fn sub(self, rhs: Duration) -> Duration {
        self.checked_sub(rhs).expect("duration underflow")
    }
}

impl Mul for Duration {
    type Output = Duration;
    fn mul(self, rhs: Duration) -> Duration {
        Duration(self.0 * rhs.0)
    }
}

/// Panics when dividing by zero.
impl Div for Duration {
    type Output = Duration;
    fn div(self, rhs: Duration) -> Duration {
        assert!(!rhs.is_zero(), "division by zero duration");
        Duration(self.0 / rhs.0)
    }
}

impl Sum for Duration {
    fn sum<I: Iterator<Item = Duration>>(iter: I) -> Duration {
        iter.fold(Duration::ZERO, Add::add)
    }
}

impl<'a> Sum<&'a Duration> for Duration {
    fn sum<I: Iterator<Item = &'a Duration>>(iter: I) -> Duration {
        iter.copied().sum()
    }
}
