//! Uniform-cell spatial indices over `[0,1]^d`.

use std::cmp::Ordering;
use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::norm::Norm;

const MAX_DIM: usize = 6;

/// Points bucketed into `m^d` equal cells, stored in compressed rows.
pub(crate) struct CellIndex<'a> {
    d: usize,
    pts: &'a [f64],
    m: usize,
    w: f64,
    starts: Vec<u32>,
    order: Vec<u32>,
}

impl<'a> CellIndex<'a> {
    /// About one point per cell, capped so the cell table stays small.
    pub(crate) fn new(pts: &'a [f64], d: usize) -> Self {
        let n = pts.len() / d;
        let mut m = ((n as f64).powf(1.0 / d as f64).floor() as usize).max(1);
        while m > 1 && (m as f64).powi(d as i32) > 4.0 * n as f64 + 16.0 {
            m -= 1;
        }
        Self::with_cells(pts, d, m)
    }

    pub(crate) fn with_cells(pts: &'a [f64], d: usize, m: usize) -> Self {
        let n = pts.len() / d;
        let cells = m.pow(d as u32);
        let w = 1.0 / m as f64;
        let ids: Vec<usize> = (0..n).map(|i| linear(&cell_of(&pts[i * d..(i + 1) * d], m, w), m)).collect();
        let mut starts = vec![0u32; cells + 1];
        for &c in &ids {
            starts[c + 1] += 1;
        }
        for c in 0..cells {
            starts[c + 1] += starts[c];
        }
        let mut fill = starts.clone();
        let mut order = vec![0u32; n];
        for (i, &c) in ids.iter().enumerate() {
            order[fill[c] as usize] = i as u32;
            fill[c] += 1;
        }
        CellIndex { d, pts, m, w, starts, order }
    }

    /// Distance from `y ∈ [0,1]^d` to the nearest indexed point.
    pub(crate) fn nearest(&self, y: &[f64], norm: Norm) -> (f64, usize) {
        let d = self.d;
        let c = cell_of(y, self.m, self.w);
        let mut best = (f64::INFINITY, usize::MAX);
        let mut cell = vec![0usize; d];
        for r in 0..self.m {
            let lo: Vec<usize> = c.iter().map(|&x| x.saturating_sub(r)).collect();
            let hi: Vec<usize> = c.iter().map(|&x| (x + r).min(self.m - 1)).collect();
            cell.copy_from_slice(&lo);
            loop {
                let ring = cell.iter().zip(&c).any(|(&a, &b)| a.abs_diff(b) == r);
                if ring {
                    let id = linear(&cell, self.m);
                    for &i in &self.order[self.starts[id] as usize..self.starts[id + 1] as usize] {
                        let i = i as usize;
                        let dist = norm.dist(y, &self.pts[i * d..(i + 1) * d]);
                        if dist < best.0 || (dist == best.0 && i < best.1) {
                            best = (dist, i);
                        }
                    }
                }
                if !advance(&mut cell, &lo, &hi) {
                    break;
                }
            }
            if best.0 <= r as f64 * self.w {
                break;
            }
        }
        best
    }
}

fn cell_of(x: &[f64], m: usize, w: f64) -> Vec<usize> {
    x.iter().map(|&t| ((t / w).floor().max(0.0) as usize).min(m - 1)).collect()
}

fn linear(c: &[usize], m: usize) -> usize {
    c.iter().fold(0, |acc, &x| acc * m + x)
}

fn advance(cell: &mut [usize], lo: &[usize], hi: &[usize]) -> bool {
    for j in (0..cell.len()).rev() {
        if cell[j] < hi[j] {
            cell[j] += 1;
            return true;
        }
        cell[j] = lo[j];
    }
    false
}

/// Closest pair under an exact comparison key.
///
/// `dist(i, j)` returns the comparison key and the float distance; the key
/// must order pairs like the true distance.
pub(crate) fn closest_pair<K, F>(pts: &[f64], d: usize, dist: F) -> (K, usize, usize)
where
    K: PartialOrd + Copy + Send,
    F: Fn(usize, usize) -> (K, f64) + Sync,
{
    let n = pts.len() / d;
    assert!(n >= 2);
    if d > MAX_DIM || 3usize.pow(d as u32) > n || n <= 64 {
        return brute_force(n, &dist);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));

    let (mut best, f0) = dist(order[0], order[1]);
    let mut pair = (order[0].min(order[1]), order[0].max(order[1]));
    let mut best_f = f0;
    if best_f == 0.0 {
        return (best, pair.0, pair.1);
    }
    let mut cell = best_f * (1.0 + 1e-9);
    let key = |x: &[f64], cell: f64| -> [i64; MAX_DIM] {
        let mut k = [0i64; MAX_DIM];
        for (kj, t) in k.iter_mut().zip(x) {
            *kj = (t / cell).floor() as i64;
        }
        k
    };
    let mut grid: HashMap<[i64; MAX_DIM], Vec<u32>> = HashMap::new();
    for &i in &order[..2] {
        grid.entry(key(&pts[i * d..(i + 1) * d], cell)).or_default().push(i as u32);
    }
    let offsets: Vec<[i64; MAX_DIM]> = (0..3usize.pow(d as u32))
        .map(|mut t| {
            let mut o = [0i64; MAX_DIM];
            for oj in o.iter_mut().take(d) {
                *oj = (t % 3) as i64 - 1;
                t /= 3;
            }
            o
        })
        .collect();
    for step in 2..n {
        let i = order[step];
        let home = key(&pts[i * d..(i + 1) * d], cell);
        let mut improved = false;
        for o in &offsets {
            let mut k = home;
            for j in 0..d {
                k[j] += o[j];
            }
            if let Some(bucket) = grid.get(&k) {
                for &j in bucket {
                    let j = j as usize;
                    let (kv, fv) = dist(i, j);
                    let cand = (i.min(j), i.max(j));
                    let better = match kv.partial_cmp(&best) {
                        Some(Ordering::Less) => true,
                        Some(Ordering::Equal) => cand < pair,
                        _ => false,
                    };
                    if better {
                        best = kv;
                        best_f = fv;
                        pair = cand;
                        improved = true;
                    }
                }
            }
        }
        if best_f == 0.0 {
            return (best, pair.0, pair.1);
        }
        if improved && best_f * 2.0 < cell {
            cell = best_f * (1.0 + 1e-9);
            grid.clear();
            for &p in &order[..=step] {
                grid.entry(key(&pts[p * d..(p + 1) * d], cell)).or_default().push(p as u32);
            }
        } else {
            grid.entry(home).or_default().push(i as u32);
        }
    }
    (best, pair.0, pair.1)
}

fn brute_force<K, F>(n: usize, dist: &F) -> (K, usize, usize)
where
    K: PartialOrd + Copy + Send,
    F: Fn(usize, usize) -> (K, f64) + Sync,
{
    (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let mut best = (dist(i, i + 1).0, i, i + 1);
            for j in i + 2..n {
                let k = dist(i, j).0;
                if k < best.0 {
                    best = (k, i, j);
                }
            }
            best
        })
        .reduce_with(|a, b| match b.0.partial_cmp(&a.0) {
            Some(Ordering::Less) => b,
            Some(Ordering::Equal) if (b.1, b.2) < (a.1, a.2) => b,
            _ => a,
        })
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_nn(pts: &[f64], d: usize, y: &[f64], norm: Norm) -> f64 {
        pts.chunks(d).map(|p| norm.dist(p, y)).fold(f64::INFINITY, f64::min)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn nearest_matches_brute_force(pts in prop::collection::vec(0.0f64..1.0, 2..400), q in prop::collection::vec(0.0f64..=1.0, 2)) {
            let d = 2;
            let pts = &pts[..pts.len() / d * d];
            prop_assume!(!pts.is_empty());
            let idx = CellIndex::new(pts, d);
            for norm in Norm::ALL {
                prop_assert_eq!(idx.nearest(&q, norm).0, brute_nn(pts, d, &q, norm));
            }
        }

        #[test]
        fn closest_pair_matches_brute_force(pts in prop::collection::vec(0.0f64..1.0, 300..900), d in 1usize..4) {
            let pts = &pts[..pts.len() / d * d];
            for norm in Norm::ALL {
                let f = |i: usize, j: usize| {
                    let v = norm.dist(&pts[i * d..(i + 1) * d], &pts[j * d..(j + 1) * d]);
                    (v, v)
                };
                let n = pts.len() / d;
                let got = closest_pair(pts, d, f).0;
                let want = brute_force(n, &f).0;
                prop_assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn duplicates_give_zero() {
        let mut pts: Vec<f64> = (0..200).map(|i| (i as f64 * 0.618).fract()).collect();
        pts.extend([pts[10], pts[11]]);
        let (v, i, j) = closest_pair(&pts, 2, |i, j| {
            let v = Norm::Linf.dist(&pts[2 * i..2 * i + 2], &pts[2 * j..2 * j + 2]);
            (v, v)
        });
        assert_eq!(v, 0.0);
        assert_eq!(&pts[2 * i..2 * i + 2], &pts[2 * j..2 * j + 2]);
    }
}
