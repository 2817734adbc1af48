//! Point sets shared by the kernel benchmarks.

use qups::generators::{alpha_power2, gen_fibonacci, gen_frolov_points, gen_kronecker};
use qups::PointSet;

/// Fibonacci lattice with `F_m` points.
pub fn fibonacci(m: u32) -> PointSet {
    gen_fibonacci(m).expect("valid Fibonacci index")
}

/// First `n` points of the Kronecker sequence for `alpha_power2(d)`.
pub fn kronecker(n: u64, d: usize) -> PointSet {
    gen_kronecker(&alpha_power2(d), n, false).expect("valid Kronecker parameters")
}

pub fn frolov2(a: f64) -> PointSet {
    gen_frolov_points(2, a, &[0.0, 0.0]).expect("valid Frolov scale")
}
