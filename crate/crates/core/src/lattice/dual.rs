use std::cmp::Ordering;

use super::reduce_generator;
use crate::error::{Error, Result};
use crate::norm::{ExactLength, Length, Norm};

/// `𝕏^⊥(g, N) = {h ∈ ℤ^d : g·h ≡ 0 (mod N)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualRank1Spec {
    pub g: Vec<u64>,
    pub n: u64,
}

impl DualRank1Spec {
    pub fn new(g: &[u64], n: u64) -> Result<Self> {
        Ok(DualRank1Spec { g: reduce_generator(g, n)?, n })
    }

    pub fn contains(&self, h: &[i64]) -> bool {
        h.len() == self.g.len() && dot_mod(&self.g, h, self.n) == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DualVector {
    pub h: Vec<i64>,
    pub length: Length,
}

fn dot_mod(g: &[u64], h: &[i64], n: u64) -> u64 {
    let n = n as i128;
    let s = g.iter().zip(h).fold(0i128, |acc, (&a, &b)| (acc + (a as i128 % n) * (b as i128 % n)) % n);
    s.rem_euclid(n) as u64
}

/// Shortest nonzero dual vector in `ℓ1` or `ℓ2`, by `ℓ1` shells.
///
/// The witness is the lexicographically smallest minimiser whose first
/// nonzero entry is positive.
pub fn dual_shortest(g: &[u64], n: u64, norm: Norm, budget: u64) -> Result<DualVector> {
    let g = reduce_generator(g, n)?;
    dual_shortest_unchecked(&g, n, norm, budget)
}

/// As [`dual_shortest`] without the `gcd(g_i, N) = 1` requirement.
pub(crate) fn dual_shortest_unchecked(g: &[u64], n: u64, norm: Norm, budget: u64) -> Result<DualVector> {
    if norm == Norm::Linf {
        return Err(Error::domain("dual figures are defined for the l1 and l2 norms only"));
    }
    if g.is_empty() || n == 0 {
        return Err(Error::domain("dual lattice needs d ≥ 1 and N ≥ 1"));
    }
    let d = g.len() as u128;
    let mut visited = 0u64;
    let mut best: Option<(u128, Vec<i64>)> = None;
    let mut h = vec![0i64; g.len()];
    for r in 1u64.. {
        if let Some((key, _)) = &best {
            let stop = match norm {
                Norm::L1 => true,
                _ => (r as u128) * (r as u128) > d * key,
            };
            if stop {
                break;
            }
        }
        let mut over = false;
        shell(g, n, r, 0, 0, false, &mut h, &mut |h| {
            visited += 1;
            if visited > budget {
                over = true;
            }
            let key = norm.key(h);
            let better = match &best {
                None => true,
                Some((bk, bh)) => match key.cmp(bk) {
                    Ordering::Less => true,
                    Ordering::Equal => h < &bh[..],
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((key, h.to_vec()));
            }
        });
        if over {
            return Err(Error::resource(format!("dual enumeration exceeded budget {budget}")));
        }
    }
    let (key, h) = best.expect("N e_1 is always a dual vector");
    Ok(DualVector { h, length: Length::exact(ExactLength::new(norm, key, 1)) })
}

/// Visits the dual vectors with `‖h‖₁ = r` and first nonzero entry positive.
#[allow(clippy::too_many_arguments)]
fn shell(g: &[u64], n: u64, r: u64, i: usize, acc: u64, signed: bool, h: &mut [i64], f: &mut impl FnMut(&[i64])) {
    let d = g.len();
    if i == d - 1 {
        let step = ((g[i] % n) as u128 * r as u128 % n as u128) as u64;
        h[i] = r as i64;
        if (acc + step) % n == 0 {
            f(h);
        }
        if signed && r > 0 {
            h[i] = -(r as i64);
            if (acc + n - step) % n == 0 {
                f(h);
            }
        }
        h[i] = 0;
        return;
    }
    for a in 0..=r {
        let step = ((g[i] % n) as u128 * a as u128 % n as u128) as u64;
        if a == 0 {
            h[i] = 0;
            shell(g, n, r, i + 1, acc, signed, h, f);
            continue;
        }
        h[i] = a as i64;
        shell(g, n, r - a, i + 1, (acc + step) % n, true, h, f);
        if signed {
            h[i] = -(a as i64);
            shell(g, n, r - a, i + 1, (acc + n - step) % n, true, h, f);
        }
    }
    h[i] = 0;
}

/// Enhanced trigonometric degree `κ_N`: the `ℓ1` length of the shortest dual vector.
pub fn trig_degree(g: &[u64], n: u64, budget: u64) -> Result<u64> {
    Ok(dual_shortest(g, n, Norm::L1, budget)?.length.exact.unwrap().key as u64)
}

/// Spectral test `σ_N`: the reciprocal `ℓ2` length of the shortest dual vector.
pub fn spectral_test(g: &[u64], n: u64, budget: u64) -> Result<f64> {
    Ok(1.0 / dual_shortest(g, n, Norm::L2, budget)?.length.value)
}

#[cfg(test)]
mod tests {
    use super::super::DEFAULT_BUDGET;
    use super::*;
    use proptest::prelude::*;

    fn brute(g: &[u64], n: u64, norm: Norm, reach: i64) -> u128 {
        let d = g.len();
        let mut best = u128::MAX;
        let mut h = vec![-reach; d];
        loop {
            if h.iter().any(|&x| x != 0) && dot_mod(g, &h, n) == 0 {
                best = best.min(norm.key(&h));
            }
            let mut i = 0;
            while i < d && h[i] == reach {
                h[i] = -reach;
                i += 1;
            }
            if i == d {
                return best;
            }
            h[i] += 1;
        }
    }

    #[test]
    fn spec_examples() {
        let l1 = dual_shortest(&[1, 5], 8, Norm::L1, DEFAULT_BUDGET).unwrap();
        assert_eq!(l1.length.exact.unwrap().key, 4);
        assert_eq!(l1.h, vec![1, 3]);
        let l2 = dual_shortest(&[1, 5], 8, Norm::L2, DEFAULT_BUDGET).unwrap();
        assert_eq!(l2.length.exact.unwrap().key, 8);
        assert_eq!(l2.h, vec![2, -2]);
        assert!((spectral_test(&[1, 5], 8, DEFAULT_BUDGET).unwrap() - 1.0 / 8f64.sqrt()).abs() < 1e-15);
        assert_eq!(trig_degree(&[1, 1], 2, DEFAULT_BUDGET).unwrap(), 2);
        assert!(dual_shortest(&[2, 1], 4, Norm::L1, DEFAULT_BUDGET).is_err());
        assert!(dual_shortest(&[1, 5], 8, Norm::Linf, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn membership() {
        let s = DualRank1Spec::new(&[1, 5], 8).unwrap();
        assert!(s.contains(&[8, 0]) && s.contains(&[0, 8]));
        assert!(s.contains(&[1, 3]) && s.contains(&[-1, -3]) && s.contains(&[3, 1]));
        assert!(!s.contains(&[1, 1]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn shells_match_brute_force(n in 2u64..40, g2 in 0u64..40, g3 in 0u64..40) {
            let g = [1, g2 % n, g3 % n];
            for norm in [Norm::L1, Norm::L2] {
                let got = dual_shortest_unchecked(&g, n, norm, DEFAULT_BUDGET).unwrap();
                let spec = DualRank1Spec { g: g.to_vec(), n };
                prop_assert!(spec.contains(&got.h));
                prop_assert_eq!(got.length.exact.unwrap().key, norm.key(&got.h));
                let reach = n.min(8) as i64;
                let b = brute(&g, n, norm, reach);
                prop_assert_eq!(got.length.exact.unwrap().key, b);
            }
        }
    }
}
