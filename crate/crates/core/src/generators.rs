//! Constructors for the point-set families: rank-1 lattices (Fibonacci,
//! hexagonal), Kronecker sequences, Frolov lattices and grids.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::{enumerate_in_cube, frolov_matrix, reduce_generator, DEFAULT_BUDGET};
use crate::numtheory::{fibonacci, CfExpansion};
use crate::pointset::{PointSet, Provenance};

/// Largest number of coordinates a generator will materialise.
pub const MAX_COORDS: u64 = 200_000_000;

fn check_size(n: u64, d: usize) -> Result<()> {
    match n.checked_mul(d as u64) {
        Some(c) if c <= MAX_COORDS => Ok(()),
        _ => Err(Error::resource(format!("{n} points in dimension {d} exceed the generator budget"))),
    }
}

/// `P(g, N) = {{k g / N} : k = 0..N−1}` with denominator `N`.
pub fn gen_rank1(g: &[u64], n: u64) -> Result<PointSet> {
    let g = reduce_generator(g, n)?;
    let mut p = rank1_points(&g, n)?;
    p.set_provenance(Provenance::new("rank1").with("g", g).with("n", n));
    Ok(p)
}

/// As [`gen_rank1`] for any `g`; points repeat when some `gcd(g_j, N) > 1`.
pub(crate) fn rank1_points(g: &[u64], n: u64) -> Result<PointSet> {
    if n == 0 || g.is_empty() {
        return Err(Error::domain("rank-1 point set needs N ≥ 1 and d ≥ 1"));
    }
    check_size(n, g.len())?;
    let mut nums = Vec::with_capacity(n as usize * g.len());
    for k in 0..n {
        nums.extend(g.iter().map(|&gj| ((k as u128 * gj as u128) % n as u128) as u64));
    }
    let prov = Provenance::new("rank1").with("g", g.iter().map(|x| x % n).collect::<Vec<_>>()).with("n", n);
    PointSet::from_rational(g.len(), n, nums, prov)
}

/// The Fibonacci lattice `P((1, F_{m−1}), F_m)`.
pub fn gen_fibonacci(m: u32) -> Result<PointSet> {
    if m < 3 {
        return Err(Error::domain(format!("Fibonacci index must be at least 3, got {m}")));
    }
    let (g, n) = (fibonacci(m - 1)?, fibonacci(m)?);
    let mut p = gen_rank1(&[1, g], n)?;
    p.set_provenance(Provenance::new("fibonacci").with("m", m).with("g", vec![1, g]).with("n", n));
    Ok(p)
}

/// `(g_k, N_k)` with `g_k / N_k = [0; 2, 1, 2, …, 1, 2]` (`2k+1` quotients after `a_0`).
pub fn hexagonal_cf_pair(k: u32) -> Result<(u64, u64)> {
    if k == 0 {
        return Err(Error::domain("hexagonal index must be at least 1"));
    }
    let mut q = vec![0u64];
    q.extend((1..=2 * k as u64 + 1).map(|i| if i % 2 == 1 { 2 } else { 1 }));
    let cf = CfExpansion::from_quotients(&q).map_err(|e| match e {
        Error::Overflow(m) => Error::resource(format!("hexagonal convergent for k = {k} overflows: {m}")),
        other => other,
    })?;
    Ok((cf.numerator(), cf.denominator()))
}

/// Rank-1 lattice whose `g/N` has the hexagonal partial quotients.
pub fn gen_hexagonal_cf(k: u32) -> Result<PointSet> {
    let (g, n) = hexagonal_cf_pair(k)?;
    let mut p = gen_rank1(&[1, g], n)?;
    p.set_provenance(Provenance::new("hexcf").with("k", k).with("g", vec![1, g]).with("n", n));
    Ok(p)
}

/// `{x}` computed as `x − floor(x)`, kept strictly below 1.
pub fn frac01(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 - 1e-15 {
        1.0 - 1e-15
    } else {
        f
    }
}

/// Points `{n α}` for `n = 1..=N` (or `0..N` with `include_zero`).
pub fn gen_kronecker(alpha: &[f64], n: u64, include_zero: bool) -> Result<PointSet> {
    if alpha.is_empty() {
        return Err(Error::domain("alpha must be non-empty"));
    }
    if alpha.iter().any(|a| !a.is_finite()) {
        return Err(Error::domain("alpha entries must be finite"));
    }
    if n == 0 {
        return Err(Error::domain("point count must be at least 1"));
    }
    check_size(n, alpha.len())?;
    let a: Vec<f64> = alpha.iter().map(|x| x - x.floor()).collect();
    let start = if include_zero { 0 } else { 1 };
    let mut coords = Vec::with_capacity(n as usize * a.len());
    for i in start..start + n {
        coords.extend(a.iter().map(|&aj| frac01(i as f64 * aj)));
    }
    let prov = Provenance::new("kronecker").with("alpha", alpha.to_vec()).with("include_zero", include_zero);
    PointSet::from_float(alpha.len(), coords, prov)
}

/// `α = (2^{1/(d+1)}, …, 2^{d/(d+1)})`.
pub fn alpha_power2(d: usize) -> Vec<f64> {
    (1..=d).map(|j| 2f64.powf(j as f64 / (d + 1) as f64)).collect()
}

pub const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// `Σ_{k≥1} 10^{−k!}`.
pub const LIOUVILLE: f64 = 0.1 + 0.01 + 1e-6 + 1e-24;

/// Named Kronecker directions.
#[derive(Clone, Debug, PartialEq)]
pub enum AlphaSpec {
    /// `(√5 − 1)/2`, one-dimensional.
    Golden,
    Pow2,
    /// The Liouville number repeated in every coordinate.
    Liouville,
    List(Vec<f64>),
}

impl AlphaSpec {
    pub fn resolve(&self, d: usize) -> Result<Vec<f64>> {
        if d == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        match self {
            AlphaSpec::Golden if d == 1 => Ok(vec![GOLDEN]),
            AlphaSpec::Golden => Err(Error::domain("the golden-ratio direction is one-dimensional")),
            AlphaSpec::Pow2 => Ok(alpha_power2(d)),
            AlphaSpec::Liouville => Ok(vec![LIOUVILLE; d]),
            AlphaSpec::List(v) if v.len() == d => Ok(v.clone()),
            AlphaSpec::List(v) => Err(Error::domain(format!("alpha has {} entries, expected {d}", v.len()))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            AlphaSpec::Golden => "golden".into(),
            AlphaSpec::Pow2 => "pow2".into(),
            AlphaSpec::Liouville => "liouville".into(),
            AlphaSpec::List(v) => v.iter().map(|x| format!("{x:e}")).collect::<Vec<_>>().join(","),
        }
    }
}

impl FromStr for AlphaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "golden" => Ok(AlphaSpec::Golden),
            "pow2" => Ok(AlphaSpec::Pow2),
            "liouville" => Ok(AlphaSpec::Liouville),
            other => other
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| Error::domain(format!("cannot read alpha entry '{t}'")))
                })
                .collect::<Result<Vec<_>>>()
                .map(AlphaSpec::List),
        }
    }
}

/// `a⁻¹(T k − δ) ∩ [0,1)^d` for the Frolov matrix `T`.
pub fn gen_frolov_points(d: usize, a: f64, shift: &[f64]) -> Result<PointSet> {
    let lattice = frolov_matrix(d)?;
    let mut p = enumerate_in_cube(&lattice, a, shift, DEFAULT_BUDGET)?;
    p.set_provenance(Provenance::new("frolov").with("d", d).with("a", a).with("shift", shift.to_vec()));
    Ok(p)
}

/// `Λ_m = {k/m : 0 ≤ k_j < m}^d`.
pub fn gen_grid_regular(m: u64, d: usize) -> Result<PointSet> {
    if m == 0 || d == 0 {
        return Err(Error::domain("grid needs m ≥ 1 and d ≥ 1"));
    }
    let axes = vec![m; d];
    let n = grid_count(&axes)?;
    let nums = product_grid(&axes, n, |_, k| k);
    PointSet::from_rational(d, m, nums, Provenance::new("grid").with("m", m).with("d", d))
}

/// `Γ_{n(m)}` with `n = (m, …, m, m²)`; the common denominator is `m²`.
pub fn gen_grid_aniso(m: u64, d: usize) -> Result<PointSet> {
    if m < 2 || d < 2 {
        return Err(Error::domain("anisotropic grid needs m ≥ 2 and d ≥ 2"));
    }
    let m2 = m.checked_mul(m).ok_or_else(|| Error::resource("m² overflows"))?;
    let mut axes = vec![m; d];
    axes[d - 1] = m2;
    let n = grid_count(&axes)?;
    let nums = product_grid(&axes, n, |j, k| if j + 1 == d { k } else { k * m });
    PointSet::from_rational(d, m2, nums, Provenance::new("grid-aniso").with("m", m).with("d", d))
}

fn grid_count(axes: &[u64]) -> Result<u64> {
    let n = axes.iter().try_fold(1u64, |acc, &a| acc.checked_mul(a));
    match n {
        Some(n) => check_size(n, axes.len()).map(|_| n),
        None => Err(Error::resource("grid size overflows")),
    }
}

/// Lexicographic product grid, first coordinate slowest.
fn product_grid(axes: &[u64], n: u64, num: impl Fn(usize, u64) -> u64) -> Vec<u64> {
    let d = axes.len();
    let mut out = Vec::with_capacity(n as usize * d);
    let mut k = vec![0u64; d];
    for _ in 0..n {
        out.extend(k.iter().enumerate().map(|(j, &kj)| num(j, kj)));
        for j in (0..d).rev() {
            k[j] += 1;
            if k[j] < axes[j] {
                break;
            }
            k[j] = 0;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn rows(p: &PointSet) -> Vec<Vec<u64>> {
        (0..p.len()).map(|i| p.numerators(i).unwrap().to_vec()).collect()
    }

    #[test]
    fn rank1_examples() {
        let p = gen_rank1(&[1, 5], 8).unwrap();
        assert_eq!(p.len(), 8);
        let r = rows(&p);
        assert!(r.contains(&vec![0, 0]) && r.contains(&vec![1, 5]) && r.contains(&vec![2, 2]));
        assert_eq!(gen_rank1(&[1, 1], 1).unwrap().to_f64(), vec![0.0, 0.0]);
        assert_eq!(rows(&gen_rank1(&[1, 3], 4).unwrap()), vec![vec![0, 0], vec![1, 3], vec![2, 2], vec![3, 1]]);
        assert!(gen_rank1(&[2, 1], 4).is_err());
    }

    #[test]
    fn fibonacci_and_hexagonal() {
        let p = gen_fibonacci(6).unwrap();
        assert_eq!((p.len(), p.provenance().rank1()), (8, Some((vec![1, 5], 8))));
        assert_eq!(rows(&gen_fibonacci(3).unwrap()), vec![vec![0, 0], vec![1, 1]]);
        assert_eq!(gen_fibonacci(10).unwrap().provenance().rank1(), Some((vec![1, 34], 55)));
        assert!(gen_fibonacci(2).is_err());
        assert_eq!(hexagonal_cf_pair(1).unwrap(), (3, 8));
        assert!(matches!(hexagonal_cf_pair(60), Err(Error::Resource(_))));
        let p = gen_hexagonal_cf(2).unwrap();
        assert_eq!(p.len() as u64, hexagonal_cf_pair(2).unwrap().1);
    }

    #[test]
    fn kronecker_points() {
        assert_eq!(gen_kronecker(&[0.5], 2, false).unwrap().to_f64(), vec![0.5, 0.0]);
        let g = gen_kronecker(&[GOLDEN], 3, false).unwrap().to_f64();
        for (x, want) in g.iter().zip([0.6180, 0.2361, 0.8541]) {
            assert!((x - want).abs() < 1e-4);
        }
        let p = gen_kronecker(&alpha_power2(2), 1, false).unwrap().to_f64();
        assert!((p[0] - 0.2599).abs() < 1e-4 && (p[1] - 0.5874).abs() < 1e-4);
        assert_eq!(gen_kronecker(&[0.3], 2, true).unwrap().to_f64()[0], 0.0);
        assert!(gen_kronecker(&[f64::NAN], 2, false).is_err());
    }

    #[test]
    fn alpha_specs() {
        assert_eq!(alpha_power2(1), vec![2f64.sqrt()]);
        assert_eq!("pow2".parse::<AlphaSpec>().unwrap().resolve(3).unwrap(), alpha_power2(3));
        assert!("golden".parse::<AlphaSpec>().unwrap().resolve(2).is_err());
        assert_eq!("0.25, 0.5".parse::<AlphaSpec>().unwrap(), AlphaSpec::List(vec![0.25, 0.5]));
        assert!("x".parse::<AlphaSpec>().is_err());
        assert!((GOLDEN - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn frolov_counts() {
        for (a, n) in [(4.0, 6), (8.0, 24), (10.0, 36), (16.0, 90)] {
            assert_eq!(gen_frolov_points(2, a, &[0.0, 0.0]).unwrap().len(), n, "a = {a}");
        }
        assert!(gen_frolov_points(2, 0.1, &[0.5, 0.5]).is_err());
        assert_eq!(gen_frolov_points(2, 0.1, &[0.0, 0.0]).unwrap().len(), 1);
    }

    #[test]
    fn grids() {
        assert_eq!(gen_grid_regular(2, 2).unwrap().len(), 4);
        assert_eq!(gen_grid_regular(3, 1).unwrap().to_f64(), vec![0.0, 1.0 / 3.0, 2.0 / 3.0]);
        assert_eq!(gen_grid_regular(4, 2).unwrap().len(), 16);
        let g = gen_grid_aniso(2, 2).unwrap();
        assert_eq!((g.len(), g.denominator()), (8, Some(4)));
        assert_eq!(gen_grid_aniso(3, 2).unwrap().len(), 27);
        assert!(gen_grid_aniso(1, 2).is_err() && gen_grid_aniso(2, 1).is_err());
        assert!(matches!(gen_grid_regular(1 << 20, 3), Err(Error::Resource(_))));
    }

    proptest! {
        #[test]
        fn rank1_points_are_distinct(n in 1u64..300, g in 0u64..300) {
            prop_assume!(num_integer::gcd(g % n, n) == 1);
            let p = gen_rank1(&[1, g], n).unwrap();
            let set: HashSet<Vec<u64>> = rows(&p).into_iter().collect();
            prop_assert_eq!(set.len() as u64, n);
        }

        #[test]
        fn kronecker_prefix_stable(a in 0.0f64..10.0, b in 0.0f64..10.0, n in 1u64..200) {
            let small = gen_kronecker(&[a, b], n, false).unwrap();
            let big = gen_kronecker(&[a, b], n + 1, false).unwrap();
            prop_assert_eq!(small.to_f64(), big.prefix(n as usize).unwrap().to_f64());
            prop_assert!(big.to_f64().iter().all(|x| (0.0..1.0).contains(x)));
        }

        #[test]
        fn fibonacci_closed_form(m in 3u32..22) {
            let p = gen_fibonacci(m).unwrap();
            let (f1, f) = (fibonacci(m - 1).unwrap(), fibonacci(m).unwrap());
            let want: Vec<Vec<u64>> = (0..f).map(|i| vec![i, ((i as u128 * f1 as u128) % f as u128) as u64]).collect();
            prop_assert!(rows(&p) == want);
        }
    }
}
