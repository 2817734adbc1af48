//! Finite point sets in `[0,1)^d` with exact-rational or binary64 coordinates.

use std::collections::HashSet;

use num_integer::Integer;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// Coordinate storage, row-major.
#[derive(Clone, Debug, PartialEq)]
pub enum Coords {
    /// Coordinate `nums[i] / den` with `0 ≤ nums[i] < den`.
    Rational { den: u64, nums: Vec<u64> },
    Float(Vec<f64>),
}

/// Which family produced a point set, with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub family: String,
    pub params: Map<String, Value>,
}

impl Provenance {
    pub fn new(family: impl Into<String>) -> Self {
        Provenance { family: family.into(), params: Map::new() }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Rank-1 generating vector and modulus, when the family carries them.
    pub fn rank1(&self) -> Option<(Vec<u64>, u64)> {
        let g = self.params.get("g")?.as_array()?.iter().map(Value::as_u64).collect::<Option<Vec<_>>>()?;
        let n = self.params.get("n")?.as_u64()?;
        Some((g, n))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Coords,
    provenance: Provenance,
}

impl PointSet {
    pub fn from_rational(dim: usize, den: u64, nums: Vec<u64>, provenance: Provenance) -> Result<Self> {
        check_shape(dim, nums.len())?;
        if den == 0 {
            return Err(Error::domain("zero denominator"));
        }
        if let Some(bad) = nums.iter().find(|&&n| n >= den) {
            return Err(Error::domain(format!("coordinate {bad}/{den} outside [0,1)")));
        }
        Ok(PointSet { dim, coords: Coords::Rational { den, nums }, provenance })
    }

    pub fn from_float(dim: usize, coords: Vec<f64>, provenance: Provenance) -> Result<Self> {
        check_shape(dim, coords.len())?;
        if let Some(bad) = coords.iter().find(|x| !(0.0..1.0).contains(*x)) {
            return Err(Error::domain(format!("coordinate {bad} outside [0,1)")));
        }
        Ok(PointSet { dim, coords: Coords::Float(coords), provenance })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        match &self.coords {
            Coords::Rational { nums, .. } => nums.len() / self.dim,
            Coords::Float(c) => c.len() / self.dim,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn set_provenance(&mut self, provenance: Provenance) {
        self.provenance = provenance;
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.coords, Coords::Rational { .. })
    }

    /// Common denominator in rational mode.
    pub fn denominator(&self) -> Option<u64> {
        match self.coords {
            Coords::Rational { den, .. } => Some(den),
            Coords::Float(_) => None,
        }
    }

    /// Numerators of point `i` in rational mode.
    pub fn numerators(&self, i: usize) -> Option<&[u64]> {
        match &self.coords {
            Coords::Rational { nums, .. } => Some(&nums[i * self.dim..(i + 1) * self.dim]),
            Coords::Float(_) => None,
        }
    }

    pub fn point(&self, i: usize) -> Vec<f64> {
        match &self.coords {
            Coords::Rational { den, nums } => {
                nums[i * self.dim..(i + 1) * self.dim].iter().map(|&n| n as f64 / *den as f64).collect()
            }
            Coords::Float(c) => c[i * self.dim..(i + 1) * self.dim].to_vec(),
        }
    }

    /// All coordinates as binary64, row-major.
    pub fn to_f64(&self) -> Vec<f64> {
        match &self.coords {
            Coords::Rational { den, nums } => nums.iter().map(|&n| n as f64 / *den as f64).collect(),
            Coords::Float(c) => c.clone(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(move |i| self.point(i))
    }

    /// The first `n` points.
    pub fn prefix(&self, n: usize) -> Result<PointSet> {
        if n == 0 || n > self.len() {
            return Err(Error::domain(format!("prefix length {n} outside 1..={}", self.len())));
        }
        let cut = n * self.dim;
        let coords = match &self.coords {
            Coords::Rational { den, nums } => Coords::Rational { den: *den, nums: nums[..cut].to_vec() },
            Coords::Float(c) => Coords::Float(c[..cut].to_vec()),
        };
        Ok(PointSet { dim: self.dim, coords, provenance: self.provenance.clone() })
    }

    /// Restricts to the coordinates in `u` (0-based), keeping duplicates.
    pub fn project(&self, u: &[usize]) -> Result<PointSet> {
        if u.is_empty() {
            return Err(Error::domain("projection onto an empty coordinate set"));
        }
        if let Some(&j) = u.iter().find(|&&j| j >= self.dim) {
            return Err(Error::domain(format!("coordinate index {j} outside 0..{}", self.dim)));
        }
        let mut seen = HashSet::new();
        if !u.iter().all(|j| seen.insert(*j)) {
            return Err(Error::domain("projection indices must be distinct"));
        }
        let n = self.len();
        let coords = match &self.coords {
            Coords::Rational { den, nums } => Coords::Rational {
                den: *den,
                nums: (0..n).flat_map(|i| u.iter().map(move |&j| nums[i * self.dim + j])).collect(),
            },
            Coords::Float(c) => Coords::Float((0..n).flat_map(|i| u.iter().map(move |&j| c[i * self.dim + j])).collect()),
        };
        let provenance = Provenance::new("projection")
            .with("source", self.provenance.family.clone())
            .with("coordinates", u.iter().map(|&j| j + 1).collect::<Vec<_>>());
        Ok(PointSet { dim: u.len(), coords, provenance })
    }

    /// Removes repeated points, keeping first occurrences in order.
    pub fn dedup(&self) -> PointSet {
        let d = self.dim;
        let coords = match &self.coords {
            Coords::Rational { den, nums } => {
                let mut seen = HashSet::new();
                let mut out = Vec::with_capacity(nums.len());
                for row in nums.chunks(d) {
                    if seen.insert(row) {
                        out.extend_from_slice(row);
                    }
                }
                Coords::Rational { den: *den, nums: out }
            }
            Coords::Float(c) => {
                let mut seen = HashSet::new();
                let mut out = Vec::with_capacity(c.len());
                for row in c.chunks(d) {
                    let key: Vec<u64> = row.iter().map(|x| x.to_bits()).collect();
                    if seen.insert(key) {
                        out.extend_from_slice(row);
                    }
                }
                Coords::Float(out)
            }
        };
        PointSet { dim: d, coords, provenance: self.provenance.clone() }
    }

    /// Rewrites a rational set over the smallest common denominator.
    pub fn reduce_denominator(&self) -> PointSet {
        match &self.coords {
            Coords::Rational { den, nums } => {
                let g = nums.iter().fold(*den, |g, n| g.gcd(n));
                PointSet {
                    dim: self.dim,
                    coords: Coords::Rational { den: den / g, nums: nums.iter().map(|n| n / g).collect() },
                    provenance: self.provenance.clone(),
                }
            }
            Coords::Float(_) => self.clone(),
        }
    }
}

fn check_shape(dim: usize, len: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    if len == 0 {
        return Err(Error::domain("point set must contain at least one point"));
    }
    if len % dim != 0 {
        return Err(Error::domain("coordinate count is not a multiple of the dimension"));
    }
    Ok(())
}
