//! Full-rank lattices `T ℤ^d`: construction, enumeration in the unit cube,
//! shortest vectors and successive minima, rank-1 duals, Frolov matrices.

mod dual;
mod frolov;
mod minima;

pub use dual::{dual_shortest, spectral_test, trig_degree, DualRank1Spec, DualVector};
#[allow(unused_imports)]
pub(crate) use dual::dual_shortest_unchecked;
pub use frolov::{admissibility_min_normform, frolov_matrix, frolov_polynomial, frolov_roots, NormFormMin};
pub use minima::{
    lattice_covering_upper, lattice_mesh_ratio_upper, shortest_vector, shortest_vector_2d_cf, successive_minima,
    LatticeVector, SuccessiveMinima,
};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::linalg;
use crate::norm::{ExactLength, Length, Norm};
use crate::numtheory::mod_inverse;
use crate::pointset::{PointSet, Provenance};

/// Default cap on the number of coefficient vectors visited by one
/// enumeration.
pub const DEFAULT_BUDGET: u64 = 50_000_000;

/// Generator matrix entries, row-major.
#[derive(Clone, Debug, PartialEq)]
pub enum Basis {
    /// Entry `(i, j)` is `num[i * d + j] / den`.
    Exact { den: u64, num: Vec<i64> },
    Float(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum LatticeTag {
    Generic,
    Rank1 { g: Vec<u64>, n: u64 },
    Frolov { roots: Vec<f64> },
}

/// The lattice `{T k : k ∈ ℤ^d}` for an invertible `T`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSpec {
    dim: usize,
    basis: Basis,
    det_abs: f64,
    tag: LatticeTag,
    inverse: Vec<f64>,
}

impl LatticeSpec {
    pub fn from_exact(dim: usize, den: u64, num: Vec<i64>, tag: LatticeTag) -> Result<Self> {
        check_square(dim, num.len())?;
        if den == 0 {
            return Err(Error::domain("zero denominator in generator matrix"));
        }
        let det_num = bareiss_det(dim, &num)?;
        if det_num == 0 {
            return Err(Error::domain("generator matrix is singular"));
        }
        let det_abs = det_num.unsigned_abs() as f64 / (den as f64).powi(dim as i32);
        let float: Vec<f64> = num.iter().map(|&x| x as f64 / den as f64).collect();
        let inverse = linalg::invert(dim, &float).ok_or_else(|| Error::domain("generator matrix is singular"))?;
        Ok(LatticeSpec { dim, basis: Basis::Exact { den, num }, det_abs, tag, inverse })
    }

    pub fn from_float(dim: usize, entries: Vec<f64>, tag: LatticeTag) -> Result<Self> {
        check_square(dim, entries.len())?;
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("non-finite generator matrix entry"));
        }
        let det_abs = linalg::determinant(dim, &entries).abs();
        Self::with_det(dim, entries, det_abs, tag)
    }

    pub(crate) fn with_det(dim: usize, entries: Vec<f64>, det_abs: f64, tag: LatticeTag) -> Result<Self> {
        if det_abs.is_nan() || det_abs <= 1e-12 {
            return Err(Error::domain(format!("generator matrix is singular (|det| = {det_abs:e})")));
        }
        let inverse = linalg::invert(dim, &entries).ok_or_else(|| Error::domain("generator matrix is singular"))?;
        Ok(LatticeSpec { dim, basis: Basis::Float(entries), det_abs, tag, inverse })
    }

    /// `ℤ^d`.
    pub fn integer(dim: usize) -> Result<Self> {
        let mut num = vec![0i64; dim * dim];
        for i in 0..dim {
            num[i * dim + i] = 1;
        }
        Self::from_exact(dim, 1, num, LatticeTag::Generic)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn det_abs(&self) -> f64 {
        self.det_abs
    }

    pub fn tag(&self) -> &LatticeTag {
        &self.tag
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.basis, Basis::Exact { .. })
    }

    /// `T` as binary64, row-major.
    pub fn matrix(&self) -> Vec<f64> {
        match &self.basis {
            Basis::Exact { den, num } => num.iter().map(|&x| x as f64 / *den as f64).collect(),
            Basis::Float(m) => m.clone(),
        }
    }

    /// `T^{-1}` as binary64, row-major.
    pub fn inverse(&self) -> &[f64] {
        &self.inverse
    }

    /// The lattice `(num/den) · 𝕏`; exact bases stay exact.
    pub fn scaled(&self, num: u64, den: u64) -> Result<LatticeSpec> {
        if num == 0 || den == 0 {
            return Err(Error::domain("scale factor must be a positive rational"));
        }
        match &self.basis {
            Basis::Exact { den: d0, num: m } => {
                let g = num.gcd(d0);
                let (num, d0) = (num / g, d0 / g);
                let new_den = d0.checked_mul(den).ok_or_else(|| Error::overflow("scaled denominator"))?;
                let factor = i64::try_from(num).map_err(|_| Error::overflow("scale factor"))?;
                let m = m
                    .iter()
                    .map(|&x| x.checked_mul(factor).ok_or_else(|| Error::overflow("scaled numerator")))
                    .collect::<Result<Vec<_>>>()?;
                Self::from_exact(self.dim, new_den, m, LatticeTag::Generic)
            }
            Basis::Float(m) => {
                let f = num as f64 / den as f64;
                let det = self.det_abs * f.powi(self.dim as i32);
                Self::with_det(self.dim, m.iter().map(|x| x * f).collect(), det, LatticeTag::Generic)
            }
        }
    }

    /// `T k` as binary64.
    pub fn vector(&self, k: &[i64]) -> Vec<f64> {
        let d = self.dim;
        match &self.basis {
            Basis::Exact { den, num } => (0..d)
                .map(|i| {
                    let s: i128 = (0..d).map(|j| num[i * d + j] as i128 * k[j] as i128).sum();
                    s as f64 / *den as f64
                })
                .collect(),
            Basis::Float(m) => (0..d).map(|i| (0..d).map(|j| m[i * d + j] * k[j] as f64).sum()).collect(),
        }
    }

    /// Numerators of `T k` over the basis denominator (exact bases only).
    pub fn exact_vector(&self, k: &[i64]) -> Option<Result<Vec<i64>>> {
        let Basis::Exact { num, .. } = &self.basis else {
            return None;
        };
        let d = self.dim;
        Some(
            (0..d)
                .map(|i| {
                    let s: i128 = (0..d).map(|j| num[i * d + j] as i128 * k[j] as i128).sum();
                    i64::try_from(s).map_err(|_| Error::overflow("lattice vector numerator"))
                })
                .collect(),
        )
    }

    /// `‖T k‖_p`, exact when the basis is.
    pub fn length(&self, k: &[i64], norm: Norm) -> Result<Length> {
        match (&self.basis, self.exact_vector(k)) {
            (Basis::Exact { den, .. }, Some(v)) => Ok(Length::exact(ExactLength::new(norm, norm.key(&v?), *den as u128))),
            _ => Ok(Length::float(norm.of(&self.vector(k)))),
        }
    }

    /// Calls `f(k)` for a superset of the coefficient vectors with
    /// `‖T k‖_∞ ≤ radius`: the box is taken in an LLL-reduced basis `T U`
    /// and mapped back through `U`, so ill-conditioned bases stay cheap.
    pub(crate) fn for_each_short(&self, radius: f64, budget: u64, mut f: impl FnMut(&[i64])) -> Result<()> {
        let d = self.dim;
        let t = self.matrix();
        let u = linalg::lll(d, &t);
        let tu: Vec<f64> = (0..d * d)
            .map(|ij| {
                let (i, j) = (ij / d, ij % d);
                (0..d).map(|l| t[i * d + l] * u[l * d + j] as f64).sum()
            })
            .collect();
        let (u, inv) = match linalg::invert(d, &tu) {
            Some(inv) => (u, inv),
            None => ((0..d * d).map(|ij| (ij / d == ij % d) as i64).collect(), self.inverse.clone()),
        };
        let hi: Vec<i64> = (0..d)
            .map(|i| {
                let row: f64 = inv[i * d..(i + 1) * d].iter().map(|x| x.abs()).sum();
                let b = radius * row * (1.0 + 1e-9) + 1e-9;
                b.floor().min(i64::MAX as f64 / 4.0) as i64
            })
            .collect();
        let lo: Vec<i64> = hi.iter().map(|x| -x).collect();
        check_box(&lo, &hi, budget)?;
        let mut k = vec![0i64; d];
        for_each_in_box(&lo, &hi, |kr| {
            for i in 0..d {
                let s: i128 = (0..d).map(|j| u[i * d + j] as i128 * kr[j] as i128).sum();
                k[i] = s as i64;
            }
            f(&k);
        });
        Ok(())
    }
}

/// The rank-1 lattice `𝕏(g, N) = {k g / N : k ∈ ℤ} + ℤ^d`.
pub fn rank1_lattice(g: &[u64], n: u64) -> Result<LatticeSpec> {
    let g = reduce_generator(g, n)?;
    let d = g.len();
    let mut num = vec![0i64; d * d];
    let den;
    if g[0] != 0 {
        let inv = mod_inverse(g[0], n)?;
        den = n;
        num[0] = 1;
        for j in 1..d {
            num[j * d] = ((g[j] as u128 * inv as u128) % n as u128) as i64;
            num[j * d + j] = n as i64;
        }
    } else {
        // only reachable for N = 1: the lattice is ℤ^d
        den = 1;
        for j in 0..d {
            num[j * d + j] = 1;
        }
    }
    LatticeSpec::from_exact(d, den, num, LatticeTag::Rank1 { g, n })
}

/// Reduces `g` modulo `N` and checks `gcd(g_i, N) = 1`.
pub(crate) fn reduce_generator(g: &[u64], n: u64) -> Result<Vec<u64>> {
    if g.is_empty() {
        return Err(Error::domain("generating vector must be non-empty"));
    }
    if n == 0 {
        return Err(Error::domain("modulus N must be positive"));
    }
    if n > i64::MAX as u64 {
        return Err(Error::overflow("modulus N exceeds 2^63"));
    }
    let g: Vec<u64> = g.iter().map(|x| x % n).collect();
    if let Some((i, x)) = g.iter().enumerate().find(|(_, x)| x.gcd(&n) != 1) {
        return Err(Error::domain(format!("gcd(g_{}, N) = gcd({x}, {n}) ≠ 1", i + 1)));
    }
    Ok(g)
}

/// The shrunk, shifted lattice points `a⁻¹(T k − δ)` lying in `[0,1)^d`.
pub fn enumerate_in_cube(lattice: &LatticeSpec, scale: f64, shift: &[f64], budget: u64) -> Result<PointSet> {
    let d = lattice.dim;
    if !scale.is_finite() || scale <= 0.0 {
        return Err(Error::domain(format!("scale must be positive, got {scale}")));
    }
    if shift.len() != d {
        return Err(Error::domain(format!("shift has length {}, expected {d}", shift.len())));
    }
    if shift.iter().any(|x| !x.is_finite()) {
        return Err(Error::domain("non-finite shift"));
    }
    let inv = &lattice.inverse;
    let mut lo = Vec::with_capacity(d);
    let mut hi = Vec::with_capacity(d);
    for i in 0..d {
        let row = &inv[i * d..(i + 1) * d];
        let c: f64 = row.iter().zip(shift).map(|(t, s)| t * s).sum();
        let neg: f64 = row.iter().map(|t| t.min(0.0)).sum::<f64>() * scale;
        let pos: f64 = row.iter().map(|t| t.max(0.0)).sum::<f64>() * scale;
        let (a, b) = (c + neg, c + pos);
        let eps = 1e-9 * (1.0 + a.abs().max(b.abs()));
        lo.push((a - eps).ceil() as i64);
        hi.push((b + eps).floor() as i64);
    }
    check_box(&lo, &hi, budget)?;

    let exact_scale = scale.fract() == 0.0 && scale <= (1u64 << 31) as f64 && shift.iter().all(|&s| s == 0.0);
    let provenance = Provenance::new("lattice").with("scale", scale).with("shift", shift.to_vec());
    match &lattice.basis {
        Basis::Exact { den, .. } if exact_scale => {
            let big = *den as i128 * scale as i128;
            let big_den = u64::try_from(big).map_err(|_| Error::overflow("scaled denominator"))?;
            let mut nums = Vec::new();
            let mut err = None;
            for_each_in_box(&lo, &hi, |k| match lattice.exact_vector(k).unwrap() {
                Ok(v) => {
                    if v.iter().all(|&x| x >= 0 && (x as i128) < big) {
                        nums.extend(v.iter().map(|&x| x as u64));
                    }
                }
                Err(e) => err = Some(e),
            });
            if let Some(e) = err {
                return Err(e);
            }
            if nums.is_empty() {
                return Err(Error::domain("no lattice point falls inside [0,1)^d"));
            }
            Ok(PointSet::from_rational(d, big_den, nums, provenance)?.reduce_denominator())
        }
        _ => {
            const TOL: f64 = 1e-12;
            let mut coords = Vec::new();
            let mut x = vec![0.0; d];
            for_each_in_box(&lo, &hi, |k| {
                let v = lattice.vector(k);
                for i in 0..d {
                    x[i] = (v[i] - shift[i]) / scale;
                }
                if x.iter().all(|t| (-TOL..1.0 - TOL).contains(t)) {
                    coords.extend(x.iter().map(|&t| t.max(0.0)));
                }
            });
            if coords.is_empty() {
                return Err(Error::domain("no lattice point falls inside [0,1)^d"));
            }
            PointSet::from_float(d, coords, provenance)
        }
    }
}

/// Visits every integer vector in the box `lo ≤ k ≤ hi` in lexicographic order.
pub(crate) fn for_each_in_box(lo: &[i64], hi: &[i64], mut f: impl FnMut(&[i64])) {
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let d = lo.len();
    let mut k = lo.to_vec();
    loop {
        f(&k);
        let mut i = d;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if k[i] < hi[i] {
                k[i] += 1;
                break;
            }
            k[i] = lo[i];
        }
    }
}

pub(crate) fn check_box(lo: &[i64], hi: &[i64], budget: u64) -> Result<u64> {
    let mut count: u128 = 1;
    for (a, b) in lo.iter().zip(hi) {
        let w = if b >= a { (*b as i128 - *a as i128 + 1) as u128 } else { 0 };
        count = count.saturating_mul(w);
    }
    if count > budget as u128 {
        return Err(Error::resource(format!("enumeration box of {count} vectors exceeds budget {budget}")));
    }
    Ok(count as u64)
}

fn check_square(dim: usize, len: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    if len != dim * dim {
        return Err(Error::domain(format!("generator matrix has {len} entries, expected {}", dim * dim)));
    }
    Ok(())
}

/// Fraction-free determinant of an integer matrix.
fn bareiss_det(d: usize, m: &[i64]) -> Result<i128> {
    let mut a: Vec<i128> = m.iter().map(|&x| x as i128).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..d {
        if a[k * d + k] == 0 {
            match (k + 1..d).find(|&r| a[r * d + k] != 0) {
                Some(r) => {
                    for j in 0..d {
                        a.swap(k * d + j, r * d + j);
                    }
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..d {
            for j in k + 1..d {
                let t = a[i * d + j]
                    .checked_mul(a[k * d + k])
                    .zip(a[i * d + k].checked_mul(a[k * d + j]))
                    .and_then(|(x, y)| x.checked_sub(y))
                    .ok_or_else(|| Error::overflow("determinant"))?;
                a[i * d + j] = t / prev;
            }
        }
        prev = a[k * d + k];
    }
    Ok(sign * a[d * d - 1])
}
