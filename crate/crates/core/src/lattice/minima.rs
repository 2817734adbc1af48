use std::cmp::Ordering;

use super::{rank1_lattice, LatticeSpec};
use crate::error::{Error, Result};
use crate::linalg::IndependenceTracker;
use crate::norm::{ExactLength, Length, Norm};
use crate::numtheory::cf_expand_rational;

/// A lattice vector `T k` with its coefficients and length.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeVector {
    pub coeffs: Vec<i64>,
    pub coords: Vec<f64>,
    pub length: Length,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuccessiveMinima {
    pub norm: Norm,
    /// Independent witnesses, `vectors[i].length = λ_{i+1}`.
    pub vectors: Vec<LatticeVector>,
}

impl SuccessiveMinima {
    pub fn values(&self) -> Vec<f64> {
        self.vectors.iter().map(|v| v.length.value).collect()
    }

    pub fn lengths(&self) -> Vec<Length> {
        self.vectors.iter().map(|v| v.length).collect()
    }
}

/// Every nonzero lattice vector with `‖T k‖_p ≤ radius`, one of each `±` pair
/// (first nonzero coefficient positive), sorted by length then coefficients.
fn ball(lattice: &LatticeSpec, norm: Norm, radius: f64, budget: u64) -> Result<Vec<LatticeVector>> {
    let limit = radius * (1.0 + 1e-9);
    let mut out = Vec::new();
    let mut err = None;
    lattice.for_each_short(radius, budget, |k| {
        match k.iter().find(|&&x| x != 0) {
            Some(&x) if x > 0 => {}
            _ => return,
        }
        let coords = lattice.vector(k);
        if norm.of(&coords) > limit {
            return;
        }
        match lattice.length(k, norm) {
            Ok(length) => out.push(LatticeVector { coeffs: k.to_vec(), coords, length }),
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    out.sort_by(|a, b| a.length.total_cmp(&b.length).then_with(|| a.coeffs.cmp(&b.coeffs)));
    Ok(out)
}

fn start_radius(lattice: &LatticeSpec) -> f64 {
    lattice.det_abs().powf(1.0 / lattice.dim() as f64)
}

/// Shortest nonzero vector in `ℓ_p`, by enumeration over a doubling radius.
///
/// Ties go to the lexicographically smallest coefficient vector whose first
/// nonzero entry is positive; float lengths within a relative `1e-12` count
/// as ties.
pub fn shortest_vector(lattice: &LatticeSpec, norm: Norm, budget: u64) -> Result<LatticeVector> {
    let mut radius = start_radius(lattice);
    loop {
        let vs = ball(lattice, norm, radius, budget)?;
        if let Some(first) = vs.first() {
            if first.length.exact.is_some() {
                return Ok(first.clone());
            }
            let cut = first.length.value * (1.0 + 1e-12);
            let best = vs.iter().take_while(|v| v.length.value <= cut).min_by(|a, b| a.coeffs.cmp(&b.coeffs)).unwrap();
            return Ok(best.clone());
        }
        radius *= 2.0;
    }
}

/// `λ_1 ≤ … ≤ λ_d` with independent witnesses, for `d ≤ 4`.
pub fn successive_minima(lattice: &LatticeSpec, norm: Norm, budget: u64) -> Result<SuccessiveMinima> {
    let d = lattice.dim();
    if d > 4 {
        return Err(Error::domain(format!("successive minima are enumerated only for d ≤ 4, got d = {d}")));
    }
    let mut radius = start_radius(lattice);
    loop {
        let vs = ball(lattice, norm, radius, budget)?;
        let mut tracker = IndependenceTracker::default();
        let mut chosen = Vec::with_capacity(d);
        for v in vs {
            if tracker.try_insert(&v.coeffs) {
                chosen.push(v);
                if chosen.len() == d {
                    return Ok(SuccessiveMinima { norm, vectors: chosen });
                }
            }
        }
        radius *= 2.0;
    }
}

/// `½ Σ_j λ_j`, an upper bound for the covering radius of the lattice in `ℝ^d`.
pub fn lattice_covering_upper(lattice: &LatticeSpec, norm: Norm, budget: u64) -> Result<f64> {
    let m = successive_minima(lattice, norm, budget)?;
    Ok(0.5 * m.values().iter().sum::<f64>())
}

/// `Σ_j λ_j / λ_1`, an upper bound for the mesh ratio of the lattice in `ℝ^d`.
pub fn lattice_mesh_ratio_upper(lattice: &LatticeSpec, norm: Norm, budget: u64) -> Result<f64> {
    let v = successive_minima(lattice, norm, budget)?.values();
    Ok(v.iter().sum::<f64>() / v[0])
}

/// `λ_1^{(∞)}` of `𝕏((1, g), N)` from the convergents of `g/N`.
pub fn shortest_vector_2d_cf(g: u64, n: u64) -> Result<LatticeVector> {
    let lattice = rank1_lattice(&[1, g], n)?;
    let g = g % n;
    let cf = cf_expand_rational(g, n)?;
    let mut best: Option<(u128, Vec<i64>)> = None;
    let mut consider = |key: u128, k: Vec<i64>| {
        let better = match &best {
            None => true,
            Some((bk, bc)) => match key.cmp(bk) {
                Ordering::Less => true,
                Ordering::Equal => k < *bc,
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((key, k));
        }
    };
    for c in cf.convergents() {
        let q = c.q as i128;
        let prod = q * g as i128;
        let b = (prod + n as i128 / 2).div_euclid(n as i128);
        let r = prod - b * n as i128;
        consider(q.unsigned_abs().max(r.unsigned_abs()), vec![q as i64, -(b as i64)]);
    }
    consider(n as u128, vec![0, 1]);
    let (key, coeffs) = best.unwrap();
    let coords = lattice.vector(&coeffs);
    Ok(LatticeVector { coeffs, coords, length: Length::exact(ExactLength::new(Norm::Linf, key, n as u128)) })
}
