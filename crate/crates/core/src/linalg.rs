//! Small dense helpers for `d ≤ ~8` generator matrices (row-major).

use num_integer::Integer;

/// Gauss–Jordan inverse with partial pivoting; `None` when singular.
pub(crate) fn invert(d: usize, m: &[f64]) -> Option<Vec<f64>> {
    let mut a = m.to_vec();
    let mut inv = vec![0.0; d * d];
    for i in 0..d {
        inv[i * d + i] = 1.0;
    }
    for col in 0..d {
        let pivot = (col..d).max_by(|&r, &s| a[r * d + col].abs().total_cmp(&a[s * d + col].abs()))?;
        if a[pivot * d + col].abs() < 1e-300 {
            return None;
        }
        if pivot != col {
            for j in 0..d {
                a.swap(pivot * d + j, col * d + j);
                inv.swap(pivot * d + j, col * d + j);
            }
        }
        let p = a[col * d + col];
        for j in 0..d {
            a[col * d + j] /= p;
            inv[col * d + j] /= p;
        }
        for r in 0..d {
            if r == col {
                continue;
            }
            let f = a[r * d + col];
            if f != 0.0 {
                for j in 0..d {
                    a[r * d + j] -= f * a[col * d + j];
                    inv[r * d + j] -= f * inv[col * d + j];
                }
            }
        }
    }
    Some(inv)
}

/// Determinant by LU with partial pivoting.
pub(crate) fn determinant(d: usize, m: &[f64]) -> f64 {
    let mut a = m.to_vec();
    let mut det = 1.0;
    for col in 0..d {
        let pivot = (col..d)
            .max_by(|&r, &s| a[r * d + col].abs().total_cmp(&a[s * d + col].abs()))
            .unwrap();
        if a[pivot * d + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for j in 0..d {
                a.swap(pivot * d + j, col * d + j);
            }
            det = -det;
        }
        let p = a[col * d + col];
        det *= p;
        for r in col + 1..d {
            let f = a[r * d + col] / p;
            for j in col..d {
                a[r * d + j] -= f * a[col * d + j];
            }
        }
    }
    det
}

/// LLL reduction (`δ = 0.99`) of the columns of `t` (row-major `d × d`).
/// Returns the unimodular `U` (row-major) with `t U` reduced. Rounding in the
/// Gram–Schmidt data only affects how well the result is reduced; `U` itself
/// is always exact and unimodular.
pub(crate) fn lll(d: usize, t: &[f64]) -> Vec<i64> {
    const DELTA: f64 = 0.99;
    let mut b: Vec<Vec<f64>> = (0..d).map(|j| (0..d).map(|i| t[i * d + j]).collect()).collect();
    let mut u: Vec<Vec<i64>> = (0..d).map(|j| (0..d).map(|i| (i == j) as i64).collect()).collect();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let mut k = 1;
    let mut steps = 0;
    while k < d && steps < 100_000 {
        steps += 1;
        let (mu, norms) = gram_schmidt(&b, dot);
        let mut mu_k = mu[k].clone();
        let mut overflow = false;
        for j in (0..k).rev() {
            let q = mu_k[j].round();
            if q == 0.0 {
                continue;
            }
            if q.abs() > 1e15 {
                overflow = true;
                break;
            }
            let qi = q as i64;
            let next: Option<Vec<i64>> = u[k].iter().zip(&u[j]).map(|(a, c)| c.checked_mul(qi).and_then(|x| a.checked_sub(x))).collect();
            let Some(next) = next else {
                overflow = true;
                break;
            };
            u[k] = next;
            let bj = b[j].clone();
            for (x, y) in b[k].iter_mut().zip(&bj) {
                *x -= q * y;
            }
            for i in 0..j {
                mu_k[i] -= q * mu[j][i];
            }
            mu_k[j] -= q;
        }
        if overflow {
            break;
        }
        // Size reduction leaves ‖b*_k‖ unchanged; the Lovász test uses the updated μ.
        let lovasz = (DELTA - mu_k[k - 1] * mu_k[k - 1]) * norms[k - 1];
        if norms[k].partial_cmp(&lovasz) != Some(std::cmp::Ordering::Less) {
            k += 1;
        } else {
            b.swap(k, k - 1);
            u.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    let mut out = vec![0i64; d * d];
    for (j, col) in u.iter().enumerate() {
        for i in 0..d {
            out[i * d + j] = col[i];
        }
    }
    out
}

fn gram_schmidt(b: &[Vec<f64>], dot: impl Fn(&[f64], &[f64]) -> f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let d = b.len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(d);
    let mut mu = vec![vec![0.0; d]; d];
    let mut norms = vec![0.0; d];
    for i in 0..d {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = if norms[j] > 0.0 { dot(&b[i], &star[j]) / norms[j] } else { 0.0 };
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * y;
            }
        }
        norms[i] = dot(&v, &v);
        star.push(v);
    }
    (mu, norms)
}

/// Incrementally tracks whether integer vectors are linearly independent,
/// using fraction-free elimination.
#[derive(Clone, Debug, Default)]
pub(crate) struct IndependenceTracker {
    rows: Vec<(usize, Vec<i128>)>,
}

impl IndependenceTracker {
    #[cfg(test)]
    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the vectors already held.
    pub(crate) fn try_insert(&mut self, v: &[i64]) -> bool {
        let mut w: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        for (pivot, row) in &self.rows {
            let (a, b) = (row[*pivot], w[*pivot]);
            if b == 0 {
                continue;
            }
            for (wi, ri) in w.iter_mut().zip(row) {
                *wi = *wi * a - *ri * b;
            }
            let g = w.iter().fold(0i128, |g, x| g.gcd(x));
            if g > 1 {
                w.iter_mut().for_each(|x| *x /= g);
            }
        }
        match w.iter().position(|&x| x != 0) {
            Some(p) => {
                self.rows.push((p, w));
                true
            }
            None => false,
        }
    }
}
