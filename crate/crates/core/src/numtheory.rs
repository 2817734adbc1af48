//! Continued fractions, nearest-integer distances and modular arithmetic.

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Normalized finite continued fraction `[a_0; a_1, …, a_ℓ]` of a
/// non-negative rational, with `a_ℓ = 1` whenever `ℓ ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CfExpansion {
    quotients: Vec<u64>,
    numerator: u64,
    denominator: u64,
}

/// The `n`-th convergent `p_n / q_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub index: usize,
    pub p: u64,
    pub q: u64,
}

impl CfExpansion {
    /// Builds the expansion from partial quotients, normalizing a trailing
    /// quotient `t ≥ 2` into `(t − 1, 1)`.
    pub fn from_quotients(quotients: &[u64]) -> Result<Self> {
        if quotients.is_empty() {
            return Err(Error::domain("continued fraction needs at least one quotient"));
        }
        if quotients[1..].contains(&0) {
            return Err(Error::domain("partial quotients a_1.. must be positive"));
        }
        let mut quotients = quotients.to_vec();
        let last = quotients.len() - 1;
        if last >= 1 && quotients[last] >= 2 {
            quotients[last] -= 1;
            quotients.push(1);
        }
        let (p, q) = evaluate(&quotients)?;
        Ok(CfExpansion { quotients, numerator: p, denominator: q })
    }

    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    /// Length `ℓ` (index of the last quotient).
    pub fn len(&self) -> usize {
        self.quotients.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All convergents `r_0 … r_ℓ`.
    pub fn convergents(&self) -> Vec<Convergent> {
        // p, q are bounded by the (already representable) final convergent.
        let (mut p2, mut p1, mut q2, mut q1) = (0u64, 1u64, 1u64, 0u64);
        self.quotients
            .iter()
            .enumerate()
            .map(|(index, &a)| {
                let p = a * p1 + p2;
                let q = a * q1 + q2;
                (p2, p1, q2, q1) = (p1, p, q1, q);
                Convergent { index, p, q }
            })
            .collect()
    }

    /// `K = max(a_1, …, a_ℓ)`.
    pub fn max_partial_quotient(&self) -> Result<u64> {
        self.quotients[1..]
            .iter()
            .copied()
            .max()
            .ok_or_else(|| Error::domain("integer input has no partial quotients beyond a_0"))
    }
}

/// Evaluates `[a_0; …, a_ℓ]` through the convergent recursion with checked
/// 128-bit intermediates.
fn evaluate(quotients: &[u64]) -> Result<(u64, u64)> {
    let (mut p2, mut p1, mut q2, mut q1) = (0u128, 1u128, 1u128, 0u128);
    for &a in quotients {
        let p = (a as u128)
            .checked_mul(p1)
            .and_then(|t| t.checked_add(p2))
            .ok_or_else(|| Error::overflow("convergent numerator"))?;
        let q = (a as u128)
            .checked_mul(q1)
            .and_then(|t| t.checked_add(q2))
            .ok_or_else(|| Error::overflow("convergent denominator"))?;
        (p2, p1, q2, q1) = (p1, p, q1, q);
    }
    let p = u64::try_from(p1).map_err(|_| Error::overflow("convergent numerator exceeds u64"))?;
    let q = u64::try_from(q1).map_err(|_| Error::overflow("convergent denominator exceeds u64"))?;
    Ok((p, q))
}

/// Normalized continued fraction of `num / den`.
pub fn cf_expand_rational(num: u64, den: u64) -> Result<CfExpansion> {
    if den == 0 {
        return Err(Error::domain("continued fraction of x/0"));
    }
    let g = num.gcd(&den);
    let (mut a, mut b) = (num / g, den / g);
    let mut quotients = Vec::new();
    while b != 0 {
        quotients.push(a / b);
        (a, b) = (b, a % b);
    }
    CfExpansion::from_quotients(&quotients)
}

/// Convenience wrapper over [`CfExpansion::convergents`].
pub fn convergents(cf: &CfExpansion) -> Vec<Convergent> {
    cf.convergents()
}

/// Convenience wrapper over [`CfExpansion::max_partial_quotient`].
pub fn max_partial_quotient(cf: &CfExpansion) -> Result<u64> {
    cf.max_partial_quotient()
}

/// Distance `⟨x⟩` of `x` to the nearest integer.
pub fn nearest_int_dist(x: f64) -> f64 {
    (x - x.round()).abs()
}

/// `⟨x⟩ = max_j ⟨x_j⟩`.
pub fn vector_nearest_int_dist(x: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::domain("nearest-integer distance of an empty vector"));
    }
    Ok(x.iter().map(|&t| nearest_int_dist(t)).fold(0.0, f64::max))
}

/// Minimum of `n^{1/d} ⟨nα⟩` over `1 ≤ n ≤ n_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ApproxProfile {
    pub argmin: u64,
    pub min_value: f64,
}

/// Scans `n^{1/d}·⟨nα⟩` for `n = 1..=n_max`, keeping the first minimiser.
///
/// `⟨nα⟩` is evaluated in binary64 from the fractional parts of `α`; the
/// rounding error is about `n·ulp(α)`, far below `c/n^{1/d}` for `n ≤ 10⁶`.
pub fn badly_approximable_profile(alpha: &[f64], n_max: u64) -> Result<ApproxProfile> {
    if alpha.is_empty() {
        return Err(Error::domain("empty alpha vector"));
    }
    if n_max == 0 {
        return Err(Error::domain("n_max must be at least 1"));
    }
    if alpha.iter().any(|a| !a.is_finite()) {
        return Err(Error::domain("alpha entries must be finite"));
    }
    let frac: Vec<f64> = alpha.iter().map(|a| a - a.floor()).collect();
    let exponent = 1.0 / alpha.len() as f64;
    let mut best = ApproxProfile { argmin: 0, min_value: f64::INFINITY };
    for n in 1..=n_max {
        let nf = n as f64;
        let dist = frac.iter().map(|&a| nearest_int_dist(nf * a)).fold(0.0, f64::max);
        let value = nf.powf(exponent) * dist;
        if value < best.min_value {
            best = ApproxProfile { argmin: n, min_value: value };
        }
    }
    Ok(best)
}

/// Inverse of `a` modulo `n`, in `{1, …, n−1}` (`0` when `n = 1`).
pub fn mod_inverse(a: u64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::domain("modulus must be positive"));
    }
    let egcd = (a as i128).extended_gcd(&(n as i128));
    if egcd.gcd != 1 {
        return Err(Error::domain(format!("gcd({a}, {n}) = {} != 1, no inverse", egcd.gcd)));
    }
    Ok(egcd.x.rem_euclid(n as i128) as u64)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for all `n < 2⁶⁴`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Fibonacci number `F_m` with `F_1 = F_2 = 1`.
pub fn fibonacci(m: u32) -> Result<u64> {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..m {
        let next = a.checked_add(b).ok_or_else(|| Error::overflow(format!("F_{m} exceeds u64")))?;
        (a, b) = (b, next);
    }
    Ok(a)
}
