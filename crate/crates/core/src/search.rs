//! Scans generating vectors of rank-1 lattices for prime `N` against the
//! primal/dual `κ` thresholds, reporting the passing fraction.

use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::rank1_points;
use crate::lattice::{dual_shortest_unchecked, reduce_generator, DEFAULT_BUDGET};
use crate::metrics::{mesh_ratio_enclosure, star_discrepancy_exact, DEFAULT_DSTAR_BUDGET};
use crate::norm::Norm;
use crate::numtheory::is_prime;

/// Absolute slack applied to threshold comparisons.
pub const THRESHOLD_SLACK: f64 = 1e-9;

/// `N · κ(𝕏(g, N))`: the smallest `ℓ1` norm of a nonzero vector of `N 𝕏`.
fn kappa_primal_numerator(g: &[u64], n: u64) -> u64 {
    let mut best = n;
    for k in 1..n {
        let mut s = 0u64;
        for &gj in g {
            let r = ((k as u128 * gj as u128) % n as u128) as u64;
            s += r.min(n - r);
            if s >= best {
                break;
            }
        }
        if s > 0 && s < best {
            best = s;
        }
    }
    best
}

/// `κ(𝕏(g, N))`, the shortest nonzero `ℓ1` length in the primal lattice.
pub fn kappa_primal(g: &[u64], n: u64) -> Result<f64> {
    let g = reduce_generator(g, n)?;
    Ok(kappa_primal_numerator(&g, n) as f64 / n as f64)
}

/// `κ(𝕏^⊥(g, N))` for any `g`, including vectors with zero entries.
pub fn kappa_dual(g: &[u64], n: u64) -> Result<u64> {
    if n == 0 || g.is_empty() {
        return Err(Error::domain("kappa needs N ≥ 1 and d ≥ 1"));
    }
    let g: Vec<u64> = g.iter().map(|x| x % n).collect();
    Ok(dual_shortest_unchecked(&g, n, Norm::L1, DEFAULT_BUDGET)?.length.exact.unwrap().key as u64)
}

/// `N^{d−1} 2^d C(κ+d, d)`: bound on the number of `g` with a dual vector of
/// `ℓ1` length at most `κ`.
pub fn counting_bound(n: u64, d: usize, kappa: u64) -> u128 {
    let mut binom: u128 = 1;
    for i in 1..=d as u128 {
        binom = binom * (kappa as u128 + i) / i;
    }
    (n as u128).pow(d as u32 - 1) * (1u128 << d) * binom
}

#[derive(Clone, Debug, Deserialize)]
struct FixtureEntry {
    d: usize,
    b_dual: f64,
    b_primal: f64,
}

#[derive(Clone, Debug, Deserialize)]
struct Fixture {
    entries: Vec<FixtureEntry>,
}

const FIXTURE: &str = include_str!("../fixtures/kappa_quantiles.json");

/// `(κ_dual_min, κ_primal_min) = (B' N^{1/d}, B'' N^{−1/d})` with `B', B''`
/// from the committed median fixture.
pub fn auto_thresholds(n: u64, d: usize) -> Result<(f64, f64)> {
    let fixture: Fixture = serde_json::from_str(FIXTURE).expect("embedded fixture parses");
    let e = fixture
        .entries
        .iter()
        .find(|e| e.d == d)
        .ok_or_else(|| Error::domain(format!("no threshold fixture for d = {d} (available: 1..=4)")))?;
    let root = (n as f64).powf(1.0 / d as f64);
    Ok((e.b_dual * root, e.b_primal / root))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SearchMode {
    /// All `g` in lexicographic order.
    Exhaustive,
    /// `samples` draws with replacement from a seeded generator.
    Random { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    pub n: u64,
    pub d: usize,
    pub mode: SearchMode,
    pub kappa_dual_min: f64,
    pub kappa_primal_min: f64,
    pub dstar_max: Option<f64>,
    /// Restrict to `g ∈ {1..N−1}^d` instead of `{0..N−1}^d`.
    pub exclude_zero: bool,
    /// Largest number of vectors scanned; the rest is reported as truncated.
    pub max_scan: u64,
    /// Also record the mesh-ratio upper bound of passing sets on this grid.
    pub mesh_grid: Option<usize>,
}

impl SearchConfig {
    pub fn new(n: u64, d: usize) -> Self {
        SearchConfig {
            n,
            d,
            mode: SearchMode::Exhaustive,
            kappa_dual_min: 0.0,
            kappa_primal_min: 0.0,
            dstar_max: None,
            exclude_zero: false,
            max_scan: 100_000_000,
            mesh_grid: None,
        }
    }

    pub fn with_auto_thresholds(mut self) -> Result<Self> {
        (self.kappa_dual_min, self.kappa_primal_min) = auto_thresholds(self.n, self.d)?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !is_prime(self.n) {
            return Err(Error::domain(format!("N = {} is not prime; the search requires a prime modulus", self.n)));
        }
        if self.d == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if !ok(self.kappa_dual_min) || !ok(self.kappa_primal_min) || !self.dstar_max.map_or(true, ok) {
            return Err(Error::domain("thresholds must be finite and non-negative"));
        }
        if let SearchMode::Random { samples: 0, .. } = self.mode {
            return Err(Error::domain("sample size must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GRecord {
    pub g: Vec<u64>,
    pub kappa_primal: f64,
    pub kappa_dual: u64,
    pub dstar: Option<f64>,
    pub rho_hi: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchResult {
    pub config: SearchConfig,
    /// Size of the search space (or sample).
    pub candidates: u64,
    pub scanned: u64,
    pub passed: u64,
    pub fraction: f64,
    /// The scan stopped at `max_scan` before covering all candidates.
    pub truncated: bool,
    #[serde(skip)]
    pub passing: Vec<GRecord>,
}

impl SearchResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let gcols: Vec<String> = (1..=self.config.d).map(|j| format!("g{j}")).collect();
        writeln!(s, "{},kappa_primal,kappa_dual,dstar,rho_hi", gcols.join(",")).unwrap();
        for r in &self.passing {
            let g: Vec<String> = r.g.iter().map(u64::to_string).collect();
            let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
            writeln!(s, "{},{},{},{},{}", g.join(","), r.kappa_primal, r.kappa_dual, opt(r.dstar), opt(r.rho_hi)).unwrap();
        }
        s
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("search summary serializes")
    }
}

/// Evaluates every candidate `g` and keeps those meeting all thresholds.
pub fn search_generators(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let (n, d) = (cfg.n, cfg.d);
    let (base, offset) = if cfg.exclude_zero { (n - 1, 1) } else { (n, 0) };
    let candidates = match cfg.mode {
        SearchMode::Exhaustive => base.checked_pow(d as u32).unwrap_or(u64::MAX),
        SearchMode::Random { samples, .. } => samples,
    };
    let scanned = candidates.min(cfg.max_scan);
    let vectors: Vec<Vec<u64>> = match cfg.mode {
        SearchMode::Exhaustive => (0..scanned)
            .map(|mut t| {
                let mut g = vec![0u64; d];
                for j in (0..d).rev() {
                    g[j] = t % base + offset;
                    t /= base;
                }
                g
            })
            .collect(),
        SearchMode::Random { seed, .. } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..scanned).map(|_| (0..d).map(|_| rng.gen_range(0..base) + offset).collect()).collect()
        }
    };
    let evaluated: Vec<Option<GRecord>> = vectors.into_par_iter().map(|g| evaluate(cfg, g)).collect::<Result<_>>()?;
    let passing: Vec<GRecord> = evaluated.into_iter().flatten().collect();
    let passed = passing.len() as u64;
    Ok(SearchResult {
        config: cfg.clone(),
        candidates,
        scanned,
        passed,
        fraction: if scanned == 0 { 0.0 } else { passed as f64 / scanned as f64 },
        truncated: scanned < candidates,
        passing,
    })
}

fn evaluate(cfg: &SearchConfig, g: Vec<u64>) -> Result<Option<GRecord>> {
    let n = cfg.n;
    let kp = kappa_primal_numerator(&g, n) as f64 / n as f64;
    if kp < cfg.kappa_primal_min - THRESHOLD_SLACK {
        return Ok(None);
    }
    let kd = kappa_dual(&g, n)?;
    if (kd as f64) < cfg.kappa_dual_min - THRESHOLD_SLACK {
        return Ok(None);
    }
    let mut rec = GRecord { g, kappa_primal: kp, kappa_dual: kd, dstar: None, rho_hi: None };
    if cfg.dstar_max.is_some() || cfg.mesh_grid.is_some() {
        let p = rank1_points(&rec.g, n)?;
        if let Some(max) = cfg.dstar_max {
            let ds = star_discrepancy_exact(&p, DEFAULT_DSTAR_BUDGET)?.value;
            if ds > max + THRESHOLD_SLACK {
                return Ok(None);
            }
            rec.dstar = Some(ds);
        }
        if let Some(m) = cfg.mesh_grid {
            rec.rho_hi = mesh_ratio_enclosure(&p, Norm::Linf, m).ok().map(|e| e.upper);
        }
    }
    Ok(Some(rec))
}

/// `κ` figures of `𝕏(g, N)` next to its measured mesh-ratio enclosure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KappaMeshRecord {
    pub kappa_primal: f64,
    pub kappa_dual: u64,
    /// `1 / (κ_primal κ_dual)`.
    pub product_reciprocal: f64,
    pub rho_lo: f64,
    pub rho_hi: f64,
}

pub fn verify_mesh_bound_via_kappa(g: &[u64], n: u64, norm: Norm, grid: usize) -> Result<KappaMeshRecord> {
    let g = reduce_generator(g, n)?;
    let kappa_primal = kappa_primal_numerator(&g, n) as f64 / n as f64;
    let kappa_dual = kappa_dual(&g, n)?;
    let p = rank1_points(&g, n)?;
    let mesh = mesh_ratio_enclosure(&p, norm, grid)?;
    Ok(KappaMeshRecord {
        kappa_primal,
        kappa_dual,
        product_reciprocal: 1.0 / (kappa_primal * kappa_dual as f64),
        rho_lo: mesh.lower,
        rho_hi: mesh.upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::fibonacci;

    /// Independent κ oracles: primal via all points, dual via a box scan.
    fn brute_primal(g: &[u64], n: u64) -> u64 {
        let mut best = n;
        for k in 1..n {
            let s: u64 = g.iter().map(|&x| { let r = k * x % n; r.min(n - r) }).sum();
            if s > 0 {
                best = best.min(s);
            }
        }
        best
    }

    fn brute_dual(g: &[u64], n: u64) -> u64 {
        let r = n as i64;
        let mut best = u64::MAX;
        for a in -r..=r {
            for b in -r..=r {
                if (a, b) != (0, 0) && (a * g[0] as i64 + b * g[1] as i64).rem_euclid(n as i64) == 0 {
                    best = best.min(a.unsigned_abs() + b.unsigned_abs());
                }
            }
        }
        best
    }

    #[test]
    fn kappa_examples() {
        assert_eq!(kappa_primal(&[1, 5], 8).unwrap(), 0.5);
        assert_eq!(kappa_primal(&[1, 1], 2).unwrap(), 1.0);
        assert_eq!(kappa_dual(&[1, 5], 8).unwrap(), 4);
        let r = verify_mesh_bound_via_kappa(&[1, 5], 8, Norm::Linf, 256).unwrap();
        assert_eq!((r.kappa_primal, r.kappa_dual, r.product_reciprocal), (0.5, 4, 0.5));
        verify_mesh_bound_via_kappa(&[1, 1], 2, Norm::Linf, 64).unwrap();
        let (g, n) = (fibonacci(9).unwrap(), fibonacci(10).unwrap());
        assert!(verify_mesh_bound_via_kappa(&[1, g], n, Norm::Linf, 256).unwrap().rho_hi <= 12.0);
    }

    #[test]
    fn kappas_match_brute_force() {
        for n in [5u64, 7, 11] {
            for a in 0..n {
                for b in 0..n {
                    assert_eq!(kappa_primal_numerator(&[a, b], n), brute_primal(&[a, b], n));
                    assert_eq!(kappa_dual(&[a, b], n).unwrap(), brute_dual(&[a, b], n));
                }
            }
        }
    }

    #[test]
    fn n5_dual_threshold_excludes_zero_patterns() {
        let mut cfg = SearchConfig::new(5, 2);
        cfg.kappa_dual_min = 2.0;
        let r = search_generators(&cfg).unwrap();
        assert_eq!((r.scanned, r.passed), (25, 16));
        assert!(r.passing.iter().all(|rec| rec.g.iter().all(|&x| x != 0)));
    }

    #[test]
    fn zero_thresholds_pass_everything() {
        let r = search_generators(&SearchConfig::new(7, 2)).unwrap();
        assert_eq!((r.passed, r.fraction), (49, 1.0));
    }

    #[test]
    fn n31_committed_fraction() {
        let cfg = SearchConfig::new(31, 2).with_auto_thresholds().unwrap();
        assert!((cfg.kappa_dual_min - 5.0).abs() < 1e-9 && (cfg.kappa_primal_min - 5.0 / 31.0).abs() < 1e-9);
        let r = search_generators(&cfg).unwrap();
        assert_eq!((r.passed, r.scanned), (600, 961));
        assert_eq!(r.to_csv().lines().count(), 601);
    }

    #[test]
    fn modes_and_errors() {
        assert!(search_generators(&SearchConfig::new(30, 2)).is_err());
        let mut cfg = SearchConfig::new(31, 2);
        cfg.mode = SearchMode::Random { samples: 100, seed: 3 };
        let a = search_generators(&cfg).unwrap();
        assert_eq!(a, search_generators(&cfg).unwrap());
        assert_eq!(a.scanned, 100);
        cfg.mode = SearchMode::Exhaustive;
        cfg.max_scan = 10;
        let t = search_generators(&cfg).unwrap();
        assert!(t.truncated && t.scanned == 10);
        cfg.exclude_zero = true;
        cfg.max_scan = u64::MAX;
        assert_eq!(search_generators(&cfg).unwrap().scanned, 900);
        assert!(auto_thresholds(31, 5).is_err());
    }

    #[test]
    fn counting_bound_holds_at_11() {
        let n = 11;
        let kd: Vec<u64> = (0..n * n).map(|t| kappa_dual(&[t / n, t % n], n).unwrap()).collect();
        for k in 1..=6 {
            let failing = kd.iter().filter(|&&x| x <= k).count() as u128;
            assert!(failing <= counting_bound(n, 2, k));
        }
        assert_eq!(counting_bound(11, 2, 1), 11 * 4 * 3);
    }
}
