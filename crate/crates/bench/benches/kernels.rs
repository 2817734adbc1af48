use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use qups::lattice::{dual_shortest, rank1_lattice, shortest_vector, successive_minima, DEFAULT_BUDGET};
use qups::metrics::{covering_radius_enclosure, separation_radius, star_discrepancy_exact, DEFAULT_DSTAR_BUDGET};
use qups::search::{search_generators, SearchConfig};
use qups::Norm;
use qups_bench::{fibonacci, frolov2, kronecker};

fn separation(c: &mut Criterion) {
    let mut g = c.benchmark_group("separation");
    for n in [1_000u64, 10_000, 100_000] {
        let p = kronecker(n, 2);
        g.bench_with_input(BenchmarkId::new("kronecker2", n), &p, |b, p| b.iter(|| separation_radius(black_box(p), Norm::Linf).unwrap()));
    }
    g.finish();
}

fn covering(c: &mut Criterion) {
    let mut g = c.benchmark_group("covering");
    g.sample_size(10);
    let p = fibonacci(18);
    for m in [256usize, 512] {
        g.bench_with_input(BenchmarkId::new("fibonacci18", m), &m, |b, &m| {
            b.iter(|| covering_radius_enclosure(black_box(&p), Norm::Linf, m).unwrap())
        });
    }
    let p = frolov2(64.0);
    g.bench_function("frolov2_a64", |b| b.iter(|| covering_radius_enclosure(black_box(&p), Norm::Linf, 512).unwrap()));
    g.finish();
}

fn discrepancy(c: &mut Criterion) {
    let mut g = c.benchmark_group("star_discrepancy");
    g.sample_size(10);
    for m in [10u32, 14] {
        let p = fibonacci(m);
        g.bench_with_input(BenchmarkId::new("fibonacci", p.len()), &p, |b, p| {
            b.iter(|| star_discrepancy_exact(black_box(p), DEFAULT_DSTAR_BUDGET).unwrap())
        });
    }
    let p = kronecker(200, 3);
    g.bench_function("kronecker3_200", |b| b.iter(|| star_discrepancy_exact(black_box(&p), DEFAULT_DSTAR_BUDGET).unwrap()));
    g.finish();
}

fn lattices(c: &mut Criterion) {
    let mut g = c.benchmark_group("lattice");
    let l = rank1_lattice(&[1, 6765], 10946).unwrap();
    g.bench_function("shortest_fibonacci21", |b| b.iter(|| shortest_vector(black_box(&l), Norm::Linf, DEFAULT_BUDGET).unwrap()));
    let l = rank1_lattice(&[1, 7, 49, 343], 401).unwrap();
    g.bench_function("minima_d4", |b| b.iter(|| successive_minima(black_box(&l), Norm::Linf, DEFAULT_BUDGET).unwrap()));
    g.bench_function("dual_l2_d3", |b| b.iter(|| dual_shortest(black_box(&[1, 12, 20]), 101, Norm::L2, DEFAULT_BUDGET).unwrap()));
    g.finish();
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    let cfg = SearchConfig::new(31, 2).with_auto_thresholds().unwrap();
    g.bench_function("n31_d2", |b| b.iter(|| search_generators(black_box(&cfg)).unwrap()));
    g.finish();
}

criterion_group!(benches, separation, covering, discrepancy, lattices, search);
criterion_main!(benches);
