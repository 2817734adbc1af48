//! Norm selectors and lengths that may carry an exact rational value.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The `ℓ_p` norms used throughout the crate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Norm {
    #[serde(rename = "1")]
    L1,
    #[serde(rename = "2")]
    L2,
    #[serde(rename = "inf")]
    Linf,
}

impl Norm {
    pub const ALL: [Norm; 3] = [Norm::L1, Norm::L2, Norm::Linf];

    /// Evaluates the norm of a float vector.
    pub fn of(self, v: &[f64]) -> f64 {
        match self {
            Norm::L1 => v.iter().map(|x| x.abs()).sum(),
            Norm::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Norm::Linf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        }
    }

    /// Norm of `a - b` without allocating.
    pub fn dist(self, a: &[f64], b: &[f64]) -> f64 {
        let it = a.iter().zip(b).map(|(x, y)| (x - y).abs());
        match self {
            Norm::L1 => it.sum(),
            Norm::L2 => it.map(|t| t * t).sum::<f64>().sqrt(),
            Norm::Linf => it.fold(0.0, f64::max),
        }
    }

    /// Integer comparison key of an integer vector: the norm itself for
    /// `ℓ1`/`ℓ∞`, the squared norm for `ℓ2`.
    pub fn key(self, v: &[i64]) -> u128 {
        let it = v.iter().map(|x| x.unsigned_abs() as u128);
        match self {
            Norm::L1 => it.sum(),
            Norm::L2 => it.map(|t| t * t).sum(),
            Norm::Linf => it.max().unwrap_or(0),
        }
    }

    /// Inverts [`Norm::key`] back to a length.
    pub fn key_to_f64(self, key: u128) -> f64 {
        match self {
            Norm::L2 => (key as f64).sqrt(),
            _ => key as f64,
        }
    }

    /// `ℓ_p` diameter of half a grid cell of side `1/m` in dimension `d`.
    pub fn half_cell_diameter(self, d: usize, m: usize) -> f64 {
        let h = 1.0 / (2.0 * m as f64);
        match self {
            Norm::L1 => d as f64 * h,
            Norm::L2 => (d as f64).sqrt() * h,
            Norm::Linf => h,
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::L1 => "1",
            Norm::L2 => "2",
            Norm::Linf => "inf",
        })
    }
}

impl FromStr for Norm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "l1" => Ok(Norm::L1),
            "2" | "l2" => Ok(Norm::L2),
            "inf" | "linf" | "infinity" | "max" => Ok(Norm::Linf),
            other => Err(Error::domain(format!("unknown norm '{other}' (expected 1, 2 or inf)"))),
        }
    }
}

/// An exact length `root(key) / den`, where `root` is the identity for
/// `ℓ1`/`ℓ∞` and the square root for `ℓ2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExactLength {
    pub norm: Norm,
    pub key: u128,
    pub den: u128,
}

impl ExactLength {
    pub fn new(norm: Norm, key: u128, den: u128) -> Self {
        assert!(den > 0, "exact length with zero denominator");
        ExactLength { norm, key, den }
    }

    pub fn to_f64(self) -> f64 {
        self.norm.key_to_f64(self.key) / self.den as f64
    }

    /// The rational value for `ℓ1`/`ℓ∞`; `None` for `ℓ2`.
    pub fn ratio(self) -> Option<Ratio<u128>> {
        match self.norm {
            Norm::L2 => None,
            _ => Some(Ratio::new(self.key, self.den)),
        }
    }

    /// The squared length as a rational (valid for every norm).
    pub fn squared(self) -> Ratio<u128> {
        match self.norm {
            Norm::L2 => Ratio::new(self.key, self.den * self.den),
            _ => Ratio::new(self.key * self.key, self.den * self.den),
        }
    }

    /// Halves the length exactly.
    pub fn half(self) -> Self {
        ExactLength { den: self.den * 2, ..self }
    }

    /// Compares two exact lengths of the same norm.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.norm, other.norm);
        match self.norm {
            Norm::L2 => (self.key * other.den * other.den).cmp(&(other.key * self.den * self.den)),
            _ => (self.key * other.den).cmp(&(other.key * self.den)),
        }
    }
}

/// A length as a float, optionally backed by an exact value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Length {
    pub value: f64,
    pub exact: Option<ExactLength>,
}

impl Length {
    pub fn float(value: f64) -> Self {
        Length { value, exact: None }
    }

    pub fn exact(e: ExactLength) -> Self {
        Length { value: e.to_f64(), exact: Some(e) }
    }

    pub fn half(self) -> Self {
        match self.exact {
            Some(e) => Length::exact(e.half()),
            None => Length::float(self.value / 2.0),
        }
    }

    /// Exact comparison when both sides are exact, float otherwise.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self.exact, other.exact) {
            (Some(a), Some(b)) if a.norm == b.norm => a.cmp_exact(&b),
            _ => self.value.total_cmp(&other.value),
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some(ExactLength { norm: Norm::L2, key, den }) => write!(f, "sqrt({key})/{den}"),
            Some(ExactLength { key, den, .. }) => {
                let r = Ratio::new(key, den);
                write!(f, "{}/{}", r.numer(), r.denom())
            }
            None => write!(f, "{}", self.value),
        }
    }
}
