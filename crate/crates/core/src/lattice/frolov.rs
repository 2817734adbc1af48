use super::{LatticeSpec, LatticeTag};
use crate::error::{Error, Result};

/// `p_d(x) = ∏_{j=1..d} (x − 2j + 1) − 1`.
pub fn frolov_polynomial(d: usize, x: f64) -> f64 {
    (1..=d).map(|j| x - (2 * j) as f64 + 1.0).product::<f64>() - 1.0
}

/// The `d` real roots of `p_d`, increasing, bracketed on a 1/8 grid and
/// bisected to adjacent floats.
pub fn frolov_roots(d: usize) -> Result<Vec<f64>> {
    if d == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    let f = |x: f64| frolov_polynomial(d, x);
    let mut roots = Vec::with_capacity(d);
    let steps = 8 * (2 * d + 2);
    let mut prev = -1.0;
    for s in 1..=steps {
        let x = -1.0 + s as f64 / 8.0;
        let (fa, fb) = (f(prev), f(x));
        if fa == 0.0 {
            roots.push(prev);
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            let (mut lo, mut hi) = (prev, x);
            let neg_low = fa < 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if (f(mid) < 0.0) == neg_low {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        prev = x;
    }
    if roots.len() != d {
        return Err(Error::domain(format!("found {} roots of p_{d}, expected {d}", roots.len())));
    }
    Ok(roots)
}

/// Vandermonde matrix with rows `(1, ξ_i, …, ξ_i^{d−1})` over the roots of `p_d`.
pub fn frolov_matrix(d: usize) -> Result<LatticeSpec> {
    if !(2..=4).contains(&d) {
        return Err(Error::domain(format!("Frolov lattices are supported for 2 ≤ d ≤ 4, got {d}")));
    }
    let roots = frolov_roots(d)?;
    let mut t = Vec::with_capacity(d * d);
    for &x in &roots {
        t.extend((0..d).map(|j| x.powi(j as i32)));
    }
    let mut det = 1.0;
    for i in 0..d {
        for j in i + 1..d {
            det *= (roots[j] - roots[i]).abs();
        }
    }
    LatticeSpec::with_det(d, t, det, LatticeTag::Frolov { roots })
}

/// Minimum of `∏_j |x_j|` over nonzero lattice vectors with `‖x‖_∞ ≤ R`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormFormMin {
    pub value: f64,
    pub coeffs: Vec<i64>,
    pub coords: Vec<f64>,
    /// The minimiser has a vanishing coordinate.
    pub zero_coordinate: bool,
}

pub fn admissibility_min_normform(lattice: &LatticeSpec, radius: f64, budget: u64) -> Result<NormFormMin> {
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::domain(format!("radius must be positive, got {radius}")));
    }
    let exact = lattice.is_exact();
    let limit = radius * (1.0 + 1e-12);
    let mut best: Option<NormFormMin> = None;
    lattice.for_each_short(radius, budget, |k| {
        match k.iter().find(|&&x| x != 0) {
            Some(&x) if x > 0 => {}
            _ => return,
        }
        let x = lattice.vector(k);
        if x.iter().any(|t| t.abs() > limit) {
            return;
        }
        let zero = if exact {
            lattice.exact_vector(k).unwrap().map(|v| v.contains(&0)).unwrap_or(false)
        } else {
            x.iter().any(|t| t.abs() < 1e-12)
        };
        let value = if zero { 0.0 } else { x.iter().map(|t| t.abs()).product() };
        let better = match &best {
            None => true,
            Some(b) => value < b.value * (1.0 - 1e-12) || (value <= b.value * (1.0 + 1e-12) && k < &b.coeffs[..]),
        };
        if better {
            best = Some(NormFormMin { value, coeffs: k.to_vec(), coords: x, zero_coordinate: zero });
        }
    })?;
    best.ok_or_else(|| Error::domain(format!("no nonzero lattice vector with sup-norm ≤ {radius}")))
}

#[cfg(test)]
mod tests {
    use super::super::{rank1_lattice, DEFAULT_BUDGET};
    use super::*;

    #[test]
    fn roots_and_determinants() {
        let r2 = frolov_roots(2).unwrap();
        let s = 2f64.sqrt();
        assert!((r2[0] - (2.0 - s)).abs() < 1e-14 && (r2[1] - (2.0 + s)).abs() < 1e-14);
        let l2 = frolov_matrix(2).unwrap();
        assert!((l2.det_abs() - 2.0 * s).abs() < 1e-13);

        let r3 = frolov_roots(3).unwrap();
        for (x, want) in r3.iter().zip([1.13919, 2.74590, 5.11491]) {
            assert!((x - want).abs() < 1e-5);
            assert!(frolov_polynomial(3, *x).abs() < 1e-12);
        }
        assert!((frolov_matrix(3).unwrap().det_abs() - 15.1327).abs() < 1e-3);
        let r4 = frolov_roots(4).unwrap();
        for (x, want) in r4.iter().zip([0.97955, 3.06357, 4.93643, 7.02045]) {
            assert!((x - want).abs() < 1e-5);
        }
        assert!((frolov_matrix(4).unwrap().det_abs() - 769.33).abs() < 1e-1);
        assert!(frolov_matrix(1).is_err() && frolov_matrix(5).is_err());
    }

    #[test]
    fn norm_form_minima() {
        let f = frolov_matrix(2).unwrap();
        let m = admissibility_min_normform(&f, 50.0, DEFAULT_BUDGET).unwrap();
        assert!((m.value - 1.0).abs() < 1e-9);
        assert!(!m.zero_coordinate);
        let p: f64 = m.coords.iter().map(|x| x.abs()).product();
        assert!((p - m.value).abs() < 1e-12);

        let z = LatticeSpec::integer(2).unwrap();
        let m = admissibility_min_normform(&z, 2.0, DEFAULT_BUDGET).unwrap();
        assert_eq!(m.value, 0.0);
        assert!(m.zero_coordinate);

        let r = rank1_lattice(&[1, 5], 8).unwrap();
        let m = admissibility_min_normform(&r, 1.0, DEFAULT_BUDGET).unwrap();
        assert_eq!(m.value, 0.0);
        assert!(m.zero_coordinate);
    }

    #[test]
    fn frolov_norm_form_is_integral_in_dimension_three() {
        let f = frolov_matrix(3).unwrap();
        let m = admissibility_min_normform(&f, 12.0, DEFAULT_BUDGET).unwrap();
        assert!(m.value >= 1.0 - 1e-9, "min norm form {}", m.value);
    }
}
