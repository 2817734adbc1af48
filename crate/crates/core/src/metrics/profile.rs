use std::fmt::Write;

use serde::Serialize;

use super::{covering_radius_enclosure, default_grid, nestedness_check, separation_radius};
use crate::error::{Error, Result};
use crate::generators::{gen_frolov_points, gen_kronecker};
use crate::norm::Norm;
use crate::pointset::{PointSet, Provenance};

/// A growing family of point sets indexed by a positive integer.
#[derive(Clone, Debug, PartialEq)]
pub enum SequenceFamily {
    /// Index = prefix length of `({n α})_n`.
    Kronecker { alpha: Vec<f64>, include_zero: bool },
    /// Index = scale `a` of `a⁻¹(T ℤ^d − δ) ∩ [0,1)^d`.
    Frolov { d: usize, shift: Vec<f64> },
}

impl SequenceFamily {
    pub fn dim(&self) -> usize {
        match self {
            SequenceFamily::Kronecker { alpha, .. } => alpha.len(),
            SequenceFamily::Frolov { d, .. } => *d,
        }
    }

    pub fn provenance(&self) -> Provenance {
        match self {
            SequenceFamily::Kronecker { alpha, include_zero } => {
                Provenance::new("kronecker").with("alpha", alpha.clone()).with("include_zero", *include_zero)
            }
            SequenceFamily::Frolov { d, shift } => Provenance::new("frolov").with("d", *d).with("shift", shift.clone()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridPolicy {
    /// [`default_grid`] for each point count.
    Adaptive,
    Fixed(usize),
}

impl GridPolicy {
    pub fn resolve(self, n: usize, d: usize) -> usize {
        match self {
            GridPolicy::Adaptive => default_grid(n, d),
            GridPolicy::Fixed(m) => m,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfileRow {
    pub index: u64,
    pub n: usize,
    pub grid: usize,
    pub q: f64,
    pub h_lo: f64,
    pub h_hi: f64,
    pub rho_lo: f64,
    pub rho_hi: f64,
    /// `q · n^{1/d}`.
    pub q_scaled: f64,
    /// `n_k / n_{k−1}`.
    pub growth: Option<f64>,
    /// Previous set contained in this one.
    pub nested: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrefixProfile {
    pub family: Provenance,
    pub norm: Norm,
    pub rows: Vec<ProfileRow>,
    pub max_growth: Option<f64>,
}

impl PrefixProfile {
    pub const CSV_HEADER: &'static str = "index,n,grid,q,h_lo,h_hi,rho_lo,rho_hi,q_scaled,growth,nested";

    pub fn to_csv(&self) -> String {
        let mut s = String::from(Self::CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let growth = r.growth.map(|g| g.to_string()).unwrap_or_default();
            let nested = r.nested.map(|b| b.to_string()).unwrap_or_default();
            writeln!(
                s,
                "{},{},{},{},{},{},{},{},{},{},{}",
                r.index, r.n, r.grid, r.q, r.h_lo, r.h_hi, r.rho_lo, r.rho_hi, r.q_scaled, growth, nested
            )
            .unwrap();
        }
        s
    }

    pub fn max_rho_hi(&self) -> f64 {
        self.rows.iter().map(|r| r.rho_hi).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Separation, covering and mesh-ratio figures at each index.
pub fn profile_prefixes(family: &SequenceFamily, indices: &[u64], norm: Norm, grid: GridPolicy) -> Result<PrefixProfile> {
    if indices.is_empty() {
        return Err(Error::domain("profile needs at least one index"));
    }
    if indices[0] == 0 || indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("profile indices must be positive and strictly increasing"));
    }
    let full = match family {
        SequenceFamily::Kronecker { alpha, include_zero } => {
            Some(gen_kronecker(alpha, *indices.last().unwrap(), *include_zero)?)
        }
        SequenceFamily::Frolov { .. } => None,
    };
    let mut rows: Vec<ProfileRow> = Vec::with_capacity(indices.len());
    let mut prev: Option<PointSet> = None;
    for &index in indices {
        let p = match (family, &full) {
            (_, Some(full)) => full.prefix(index as usize)?,
            (SequenceFamily::Frolov { d, shift }, None) => gen_frolov_points(*d, index as f64, shift)?,
            _ => unreachable!(),
        };
        let (n, d) = (p.len(), p.dim());
        let m = grid.resolve(n, d);
        let q = separation_radius(&p, norm)?.radius.value;
        let c = covering_radius_enclosure(&p, norm, m)?;
        let growth = rows.last().map(|r| n as f64 / r.n as f64);
        let nested = prev.as_ref().map(|s| nestedness_check(s, &p, 1e-12));
        rows.push(ProfileRow {
            index,
            n,
            grid: m,
            q,
            h_lo: c.lower,
            h_hi: c.upper,
            rho_lo: c.lower / q,
            rho_hi: c.upper / q,
            q_scaled: q * (n as f64).powf(1.0 / d as f64),
            growth,
            nested,
        });
        prev = Some(p);
    }
    let max_growth = rows.iter().filter_map(|r| r.growth).reduce(f64::max);
    Ok(PrefixProfile { family: family.provenance(), norm, rows, max_growth })
}
