use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pointset::{Coords, PointSet};

/// Default cap on the work of the exact sweep (roughly point-corner visits).
pub const DEFAULT_DSTAR_BUDGET: u64 = 2_000_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Discrepancy {
    pub value: f64,
    /// Exact value for rational point sets.
    pub exact: Option<Ratio<i128>>,
    /// Upper corner of the critical box.
    pub corner: Vec<f64>,
    /// `true` when only a lower bound was computed.
    pub lower_bound: bool,
}

/// Coordinates, optional common denominator and numerators, and the
/// per-axis corner candidates `{x_j} ∪ {1}`.
struct Setup<'a> {
    d: usize,
    n: usize,
    x: Vec<f64>,
    nums: Option<(&'a [u64], u64)>,
    cands: Vec<Vec<(f64, u64)>>,
    /// `N · D^d` when it fits comfortably in `i128`.
    scale: Option<i128>,
}

impl<'a> Setup<'a> {
    fn new(p: &'a PointSet) -> Self {
        let (d, n) = (p.dim(), p.len());
        let x = p.to_f64();
        let nums = match p.coords() {
            Coords::Rational { den, nums } => Some((&nums[..], *den)),
            Coords::Float(_) => None,
        };
        let cands = (0..d)
            .map(|j| {
                let mut c: Vec<(f64, u64)> = (0..n)
                    .map(|i| (x[i * d + j], nums.map_or(0, |(v, _)| v[i * d + j])))
                    .collect();
                c.sort_by(|a, b| a.0.total_cmp(&b.0));
                c.dedup_by(|a, b| a.0 == b.0);
                c.push((1.0, nums.map_or(0, |(_, den)| den)));
                c
            })
            .collect();
        let scale = nums.and_then(|(_, den)| {
            let s = (den as f64).powi(d as i32) * n as f64;
            (s < 2f64.powi(100)).then(|| (den as i128).pow(d as u32) * n as i128)
        });
        Setup { d, n, x, nums, cands, scale }
    }

    /// Local discrepancy at a corner: exact numerator over `scale`, or float.
    fn local(&self, q: &[(f64, u64)], open: usize, closed: usize) -> Value {
        match (self.nums, self.scale) {
            (Some((_, den)), Some(_)) => {
                let vol: i128 = q.iter().map(|c| c.1 as i128).product::<i128>() * self.n as i128;
                let dd = (den as i128).pow(self.d as u32);
                let a = vol - open as i128 * dd;
                let b = closed as i128 * dd - vol;
                Value::Exact(a.max(b))
            }
            _ => {
                let vol: f64 = q.iter().map(|c| c.0).product();
                let n = self.n as f64;
                Value::Float((vol - open as f64 / n).max(closed as f64 / n - vol))
            }
        }
    }

    fn finish(&self, best: Best, lower_bound: bool) -> Discrepancy {
        let corner = best.corner.iter().map(|c| c.0).collect();
        match best.value {
            Value::Exact(v) => {
                let r = Ratio::new(v, self.scale.unwrap());
                Discrepancy { value: *r.numer() as f64 / *r.denom() as f64, exact: Some(r), corner, lower_bound }
            }
            Value::Float(v) => Discrepancy { value: v, exact: None, corner, lower_bound },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
enum Value {
    Exact(i128),
    Float(f64),
}

#[derive(Clone, Debug)]
struct Best {
    value: Value,
    corner: Vec<(f64, u64)>,
}

impl Best {
    fn offer(&mut self, v: Value, q: &[(f64, u64)]) {
        if v > self.value {
            self.value = v;
            self.corner = q.to_vec();
        }
    }
}

fn worst(s: &Setup) -> Best {
    let value = if s.scale.is_some() && s.nums.is_some() { Value::Exact(i128::MIN) } else { Value::Float(f64::NEG_INFINITY) };
    Best { value, corner: Vec::new() }
}

/// Exact `D*_N` for `d ≤ 3` by sweeping the critical corners.
pub fn star_discrepancy_exact(p: &PointSet, budget: u64) -> Result<Discrepancy> {
    let d = p.dim();
    if d > 3 {
        return Err(Error::resource(format!("exact star discrepancy is limited to d ≤ 3, got d = {d}")));
    }
    let s = Setup::new(p);
    let outer: f64 = s.cands[..d - 1].iter().map(|c| c.len() as f64).product();
    let cost = outer * (s.n + s.cands[d - 1].len()) as f64;
    if cost > budget as f64 {
        return Err(Error::resource(format!("exact star discrepancy needs ~{cost:.3e} steps, budget {budget}")));
    }
    let mut by_last: Vec<usize> = (0..s.n).collect();
    by_last.sort_by(|&a, &b| s.x[a * d + d - 1].total_cmp(&s.x[b * d + d - 1]));

    let best = if d == 1 {
        let mut best = worst(&s);
        sweep_last(&s, &by_last, &by_last, &mut Vec::new(), &mut best);
        best
    } else {
        s.cands[0]
            .par_iter()
            .map(|&q0| {
                let mut best = worst(&s);
                let open: Vec<usize> = by_last.iter().copied().filter(|&i| s.x[i * d] < q0.0).collect();
                let closed: Vec<usize> = by_last.iter().copied().filter(|&i| s.x[i * d] <= q0.0).collect();
                recurse(&s, 1, &open, &closed, &mut vec![q0], &mut best);
                best
            })
            .reduce_with(|a, b| if b.value > a.value { b } else { a })
            .unwrap()
    };
    Ok(s.finish(best, false))
}

fn recurse(s: &Setup, j: usize, open: &[usize], closed: &[usize], q: &mut Vec<(f64, u64)>, best: &mut Best) {
    if j == s.d - 1 {
        sweep_last(s, open, closed, q, best);
        return;
    }
    let d = s.d;
    for &c in &s.cands[j] {
        let o: Vec<usize> = open.iter().copied().filter(|&i| s.x[i * d + j] < c.0).collect();
        let cl: Vec<usize> = closed.iter().copied().filter(|&i| s.x[i * d + j] <= c.0).collect();
        q.push(c);
        recurse(s, j + 1, &o, &cl, q, best);
        q.pop();
    }
}

/// Both lists are sorted by the last coordinate.
fn sweep_last(s: &Setup, open: &[usize], closed: &[usize], q: &mut Vec<(f64, u64)>, best: &mut Best) {
    let d = s.d;
    let last = |i: usize| s.x[i * d + d - 1];
    let (mut po, mut pc) = (0, 0);
    for &c in &s.cands[d - 1] {
        while po < open.len() && last(open[po]) < c.0 {
            po += 1;
        }
        while pc < closed.len() && last(closed[pc]) <= c.0 {
            pc += 1;
        }
        q.push(c);
        let v = s.local(q, po, pc);
        best.offer(v, q);
        q.pop();
    }
}

/// Lower bound on `D*_N` from `trials` seeded random critical corners; all
/// corners are visited when `trials` covers them.
pub fn star_discrepancy_lb(p: &PointSet, trials: u64, seed: u64) -> Result<Discrepancy> {
    if trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    let s = Setup::new(p);
    let d = s.d;
    let total = s.cands.iter().try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64));
    let exhaustive = matches!(total, Some(t) if t <= trials);
    let corners: Vec<Vec<usize>> = if exhaustive {
        let mut out = Vec::new();
        let mut k = vec![0usize; d];
        'outer: loop {
            out.push(k.clone());
            for j in (0..d).rev() {
                k[j] += 1;
                if k[j] < s.cands[j].len() {
                    continue 'outer;
                }
                k[j] = 0;
            }
            break;
        }
        out
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..trials).map(|_| s.cands.iter().map(|c| rng.gen_range(0..c.len())).collect()).collect()
    };
    let best = corners
        .par_iter()
        .map(|k| {
            let q: Vec<(f64, u64)> = k.iter().enumerate().map(|(j, &t)| s.cands[j][t]).collect();
            let (mut open, mut closed) = (0, 0);
            for row in s.x.chunks(d) {
                if row.iter().zip(&q).all(|(x, c)| *x < c.0) {
                    open += 1;
                }
                if row.iter().zip(&q).all(|(x, c)| *x <= c.0) {
                    closed += 1;
                }
            }
            Best { value: s.local(&q, open, closed), corner: q }
        })
        .reduce_with(|a, b| if b.value > a.value { b } else { a })
        .unwrap();
    Ok(s.finish(best, !exhaustive))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_grid_regular, gen_rank1};
    use crate::pointset::Provenance;
    use proptest::prelude::*;

    /// Direct evaluation over all corners, counting with exact fractions.
    fn oracle(p: &PointSet) -> Ratio<i128> {
        let s = Setup::new(p);
        let d = s.d;
        let (nums, den) = s.nums.unwrap();
        let mut best = Ratio::from_integer(0);
        let mut k = vec![0usize; d];
        loop {
            let q: Vec<u64> = (0..d).map(|j| s.cands[j][k[j]].1).collect();
            let (mut open, mut closed) = (0i128, 0i128);
            for row in nums.chunks(d) {
                open += row.iter().zip(&q).all(|(x, c)| x < c) as i128;
                closed += row.iter().zip(&q).all(|(x, c)| x <= c) as i128;
            }
            let vol = Ratio::new(q.iter().map(|&c| c as i128).product(), (den as i128).pow(d as u32));
            let n = s.n as i128;
            best = best.max(vol - Ratio::new(open, n)).max(Ratio::new(closed, n) - vol);
            let mut j = d;
            loop {
                if j == 0 {
                    return best;
                }
                j -= 1;
                k[j] += 1;
                if k[j] < s.cands[j].len() {
                    break;
                }
                k[j] = 0;
            }
        }
    }

    #[test]
    fn examples() {
        let p = PointSet::from_rational(1, 4, vec![0, 1, 2, 3], Provenance::new("x")).unwrap();
        assert_eq!(star_discrepancy_exact(&p, DEFAULT_DSTAR_BUDGET).unwrap().exact, Some(Ratio::new(1, 4)));
        let l2 = gen_grid_regular(2, 2).unwrap();
        assert_eq!(star_discrepancy_exact(&l2, DEFAULT_DSTAR_BUDGET).unwrap().exact, Some(Ratio::new(3, 4)));
        assert_eq!(star_discrepancy_lb(&l2, 1000, 1).unwrap().exact, Some(Ratio::new(3, 4)));
        for m in 2..20 {
            let g = gen_grid_regular(m, 1).unwrap();
            assert_eq!(star_discrepancy_exact(&g, DEFAULT_DSTAR_BUDGET).unwrap().exact, Some(Ratio::new(1, m as i128)));
        }
        let corner = PointSet::from_float(2, vec![0.0, 0.0], Provenance::new("x")).unwrap();
        assert_eq!(star_discrepancy_lb(&corner, 16, 0).unwrap().value, 1.0);
        let g4 = gen_grid_regular(2, 4).unwrap();
        assert!(matches!(star_discrepancy_exact(&g4, DEFAULT_DSTAR_BUDGET), Err(Error::Resource(_))));
        assert!(matches!(star_discrepancy_exact(&gen_rank1(&[1, 5], 8).unwrap(), 10), Err(Error::Resource(_))));
    }

    #[test]
    fn float_and_rational_agree() {
        let p = gen_rank1(&[1, 3, 7], 17).unwrap();
        let f = PointSet::from_float(3, p.to_f64(), Provenance::new("x")).unwrap();
        let a = star_discrepancy_exact(&p, DEFAULT_DSTAR_BUDGET).unwrap();
        let b = star_discrepancy_exact(&f, DEFAULT_DSTAR_BUDGET).unwrap();
        assert!((a.value - b.value).abs() < 1e-12);
        assert!(b.exact.is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn sweep_matches_oracle(den in 2u64..12, d in 1usize..4, raw in prop::collection::vec(0u64..1000, 3..30)) {
            let nums: Vec<u64> = raw.iter().map(|x| x % den).collect();
            let nums = &nums[..nums.len() / d * d];
            let p = PointSet::from_rational(d, den, nums.to_vec(), Provenance::new("x")).unwrap();
            let exact = star_discrepancy_exact(&p, DEFAULT_DSTAR_BUDGET).unwrap();
            prop_assert_eq!(exact.exact.unwrap(), oracle(&p));
            let lb = star_discrepancy_lb(&p, 50, 7).unwrap();
            prop_assert!(lb.exact.unwrap() <= exact.exact.unwrap());
            prop_assert_eq!(star_discrepancy_lb(&p, 50, 7).unwrap(), lb);
        }
    }
}
