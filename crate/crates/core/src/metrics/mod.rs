//! Separation and covering radii, mesh ratio, star discrepancy, sequence
//! profiles and per-set reports.

mod discrepancy;
mod profile;
mod report;

pub use discrepancy::{star_discrepancy_exact, star_discrepancy_lb, Discrepancy, DEFAULT_DSTAR_BUDGET};
pub use profile::{profile_prefixes, GridPolicy, PrefixProfile, ProfileRow, SequenceFamily};
pub use report::{analyze, AnalyzeOptions, DstarKind, Metric, QuReport};

use std::collections::HashSet;

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::norm::{ExactLength, Length, Norm};
use crate::pointset::{Coords, PointSet};
use crate::spatial::{closest_pair, CellIndex};

/// Largest number of grid nodes a covering enclosure will visit.
pub const MAX_GRID_NODES: u64 = 100_000_000;

/// Half the minimum pairwise distance, with the attaining pair.
#[derive(Clone, Debug, PartialEq)]
pub struct Separation {
    pub radius: Length,
    pub pair: (usize, usize),
}

pub fn separation_radius(p: &PointSet, norm: Norm) -> Result<Separation> {
    let n = p.len();
    if n < 2 {
        return Err(Error::domain("separation radius needs at least two points"));
    }
    let d = p.dim();
    let pts = p.to_f64();
    match p.coords() {
        Coords::Rational { den, nums } => {
            let f = |i: usize, j: usize| {
                let diff: Vec<i64> = (0..d).map(|t| nums[i * d + t] as i64 - nums[j * d + t] as i64).collect();
                let key = norm.key(&diff);
                (key, norm.key_to_f64(key) / *den as f64)
            };
            let (key, i, j) = closest_pair(&pts, d, f);
            Ok(Separation { radius: Length::exact(ExactLength::new(norm, key, *den as u128)).half(), pair: (i, j) })
        }
        Coords::Float(_) => {
            let f = |i: usize, j: usize| {
                let v = norm.dist(&pts[i * d..(i + 1) * d], &pts[j * d..(j + 1) * d]);
                (v, v)
            };
            let (v, i, j) = closest_pair(&pts, d, f);
            Ok(Separation { radius: Length::float(v / 2.0), pair: (i, j) })
        }
    }
}

/// Certified enclosure `lower ≤ h_p(P; [0,1]^d) ≤ upper` from a node grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CoveringEnclosure {
    pub lower: f64,
    pub upper: f64,
    pub grid: usize,
    /// Grid node attaining `lower`.
    pub witness: Vec<f64>,
}

/// Evaluates the nearest-point distance at the `(m+1)^d` nodes `k/m` of the
/// closed cube; `upper` adds the half-cell diameter.
pub fn covering_radius_enclosure(p: &PointSet, norm: Norm, grid: usize) -> Result<CoveringEnclosure> {
    if grid < 2 {
        return Err(Error::domain(format!("grid resolution must be at least 2, got {grid}")));
    }
    let d = p.dim();
    let nodes = (grid as u64 + 1).checked_pow(d as u32).filter(|&c| c <= MAX_GRID_NODES);
    let Some(nodes) = nodes else {
        return Err(Error::resource(format!("{}^{d} grid nodes exceed the budget {MAX_GRID_NODES}", grid + 1)));
    };
    let pts = p.to_f64();
    let index = CellIndex::new(&pts, d);
    let node = |mut t: u64| -> Vec<f64> {
        let mut y = vec![0.0; d];
        for j in (0..d).rev() {
            y[j] = (t % (grid as u64 + 1)) as f64 / grid as f64;
            t /= grid as u64 + 1;
        }
        y
    };
    let (lower, at) = (0..nodes as usize)
        .into_par_iter()
        .with_min_len(256)
        .map(|t| (index.nearest(&node(t as u64), norm).0, t as u64))
        .reduce(|| (f64::NEG_INFINITY, u64::MAX), |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
    let upper = (lower + norm.half_cell_diameter(d, grid)) * (1.0 + 1e-12);
    Ok(CoveringEnclosure { lower, upper, grid, witness: node(at) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeshEnclosure {
    pub lower: f64,
    pub upper: f64,
    pub separation: Separation,
    pub covering: CoveringEnclosure,
}

/// Covering enclosure divided by the exact separation radius.
pub fn mesh_ratio_enclosure(p: &PointSet, norm: Norm, grid: usize) -> Result<MeshEnclosure> {
    let separation = separation_radius(p, norm)?;
    let covering = covering_radius_enclosure(p, norm, grid)?;
    let q = separation.radius.value;
    if q == 0.0 {
        return Err(Error::domain("point set has repeated points; mesh ratio is unbounded"));
    }
    Ok(MeshEnclosure { lower: covering.lower / q, upper: covering.upper / q, separation, covering })
}

/// Default covering-grid resolution: a per-dimension floor, refined to
/// keep about eight cells per expected point spacing.
pub fn default_grid(n: usize, d: usize) -> usize {
    let base = match d {
        1 => 4096,
        2 => 256,
        3 => 64,
        _ => 16,
    };
    let adaptive = (8.0 * (n as f64).powf(1.0 / d as f64)).ceil() as usize;
    let mut m = base.max(adaptive);
    while m > 2 && (m as f64 + 1.0).powi(d as i32) > MAX_GRID_NODES as f64 {
        m -= 1;
    }
    m
}

/// Whether every point of `small` appears in `big`: exactly for rational
/// sets, within `tol` in `ℓ∞` otherwise.
pub fn nestedness_check(small: &PointSet, big: &PointSet, tol: f64) -> bool {
    if small.dim() != big.dim() {
        return false;
    }
    let d = small.dim();
    if let (Coords::Rational { den: ds, nums: ns }, Coords::Rational { den: db, nums: nb }) = (small.coords(), big.coords()) {
        let reduce = |x: u64, den: u64| {
            let g = x.gcd(&den);
            (x / g, den / g)
        };
        let set: HashSet<Vec<(u64, u64)>> = nb.chunks(d).map(|r| r.iter().map(|&x| reduce(x, *db)).collect()).collect();
        return ns.chunks(d).all(|r| set.contains(&r.iter().map(|&x| reduce(x, *ds)).collect::<Vec<_>>()));
    }
    let pts = big.to_f64();
    let index = CellIndex::new(&pts, d);
    let small_pts = small.to_f64();
    small_pts.par_chunks(d).all(|x| index.nearest(x, Norm::Linf).0 <= tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_fibonacci, gen_grid_aniso, gen_grid_regular, gen_rank1};
    use crate::pointset::Provenance;
    use num_rational::Ratio;
    use proptest::prelude::*;

    fn exact(l: Length) -> Ratio<u128> {
        l.exact.unwrap().ratio().unwrap()
    }

    #[test]
    fn separation_examples() {
        let s = separation_radius(&gen_rank1(&[1, 5], 8).unwrap(), Norm::Linf).unwrap();
        assert_eq!(exact(s.radius), Ratio::new(1, 8));
        for m in 2..6 {
            let s = separation_radius(&gen_grid_regular(m, 2).unwrap(), Norm::Linf).unwrap();
            assert_eq!(exact(s.radius), Ratio::new(1, 2 * m as u128));
            for norm in Norm::ALL {
                let s = separation_radius(&gen_grid_aniso(m, 2).unwrap(), norm).unwrap();
                assert_eq!(s.radius.value, 1.0 / (2 * m * m) as f64);
            }
        }
        let one = PointSet::from_float(2, vec![0.5, 0.5], Provenance::new("x")).unwrap();
        assert!(separation_radius(&one, Norm::Linf).is_err());
    }

    #[test]
    fn covering_examples() {
        let one = PointSet::from_float(2, vec![0.5, 0.5], Provenance::new("x")).unwrap();
        let c = covering_radius_enclosure(&one, Norm::Linf, 64).unwrap();
        assert!(c.lower <= 0.5 && 0.5 <= c.upper && c.upper - c.lower <= 1.0 / 128.0 + 1e-12);
        let c = covering_radius_enclosure(&gen_grid_regular(2, 2).unwrap(), Norm::Linf, 64).unwrap();
        assert!(c.lower <= 0.5 && 0.5 <= c.upper);
        assert_eq!(c.lower, 0.5);
        let c = covering_radius_enclosure(&gen_fibonacci(6).unwrap(), Norm::Linf, 256).unwrap();
        assert!((c.lower - 0.375).abs() < 1e-12);
        assert!((c.upper - 0.376953125).abs() < 1e-9);
        assert!(covering_radius_enclosure(&one, Norm::Linf, 1).is_err());
    }

    #[test]
    fn mesh_ratio_of_grids() {
        let mut prev = 0.0;
        for m in 2..=5 {
            let e = mesh_ratio_enclosure(&gen_grid_aniso(m, 2).unwrap(), Norm::Linf, 64).unwrap();
            assert!(e.lower >= 1.0 && e.lower > prev);
            prev = e.lower;
        }
    }

    #[test]
    fn nestedness() {
        let g2 = gen_grid_regular(2, 2).unwrap();
        assert!(nestedness_check(&g2, &gen_grid_regular(4, 2).unwrap(), 0.0));
        assert!(!nestedness_check(&g2, &gen_grid_regular(3, 2).unwrap(), 0.0));
        let f = PointSet::from_float(2, vec![0.0, 0.0, 0.25, 0.75], Provenance::new("x")).unwrap();
        assert!(nestedness_check(&f, &gen_grid_regular(4, 2).unwrap(), 1e-12));
        assert!(!nestedness_check(&f, &g2, 1e-12));
    }

    #[test]
    fn grid_policy() {
        assert_eq!(default_grid(8, 2), 256);
        assert_eq!(default_grid(1 << 14, 2), 1024);
        assert_eq!(default_grid(100, 3), 64);
        assert_eq!(default_grid(10, 1), 4096);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn enclosures_nest_under_refinement(pts in prop::collection::vec(0.0f64..1.0, 4..60), m in 2usize..24) {
            let pts = &pts[..pts.len() / 2 * 2];
            let p = PointSet::from_float(2, pts.to_vec(), Provenance::new("x")).unwrap();
            for norm in Norm::ALL {
                let a = covering_radius_enclosure(&p, norm, m).unwrap();
                let b = covering_radius_enclosure(&p, norm, 2 * m).unwrap();
                prop_assert!(a.lower <= a.upper && b.lower <= b.upper);
                prop_assert!(b.lower >= a.lower - 1e-15);
                prop_assert!(b.lower <= a.upper && a.lower <= b.upper);
            }
        }

        #[test]
        fn rational_separation_is_exact(n in 2u64..200, g in 1u64..200) {
            prop_assume!(num_integer::gcd(g % n, n) == 1);
            let p = gen_rank1(&[1, g], n).unwrap();
            let s = separation_radius(&p, Norm::L1).unwrap();
            let mut best = u128::MAX;
            for i in 0..p.len() {
                for j in i + 1..p.len() {
                    let a = p.numerators(i).unwrap();
                    let b = p.numerators(j).unwrap();
                    best = best.min(a.iter().zip(b).map(|(x, y)| x.abs_diff(*y) as u128).sum());
                }
            }
            prop_assert_eq!(s.radius.exact.unwrap().key, best);
        }
    }
}
