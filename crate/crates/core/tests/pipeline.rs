use num_integer::Integer;
use proptest::prelude::*;

use qups::format;
use qups::generators::{alpha_power2, gen_fibonacci, gen_grid_aniso, gen_kronecker, gen_rank1};
use qups::lattice::{rank1_lattice, shortest_vector, DEFAULT_BUDGET};
use qups::metrics::{
    analyze, covering_radius_enclosure, mesh_ratio_enclosure, nestedness_check, separation_radius, star_discrepancy_exact,
    star_discrepancy_lb, AnalyzeOptions, Metric, DEFAULT_DSTAR_BUDGET,
};
use qups::{Norm, PointSet, Provenance};

fn brute_separation(p: &PointSet, norm: Norm) -> f64 {
    let pts: Vec<Vec<f64>> = p.iter().collect();
    let mut best = f64::INFINITY;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            best = best.min(norm.dist(&pts[i], &pts[j]));
        }
    }
    best / 2.0
}

fn brute_dstar(p: &PointSet) -> f64 {
    let pts: Vec<Vec<f64>> = p.iter().collect();
    let d = p.dim();
    let n = pts.len() as f64;
    let cand: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            let mut v: Vec<f64> = pts.iter().map(|x| x[j]).chain([1.0]).collect();
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        })
        .collect();
    let mut best: f64 = 0.0;
    let corners: Vec<Vec<f64>> = match d {
        1 => cand[0].iter().map(|&a| vec![a]).collect(),
        _ => cand[0].iter().flat_map(|&a| cand[1].iter().map(move |&b| vec![a, b])).collect(),
    };
    for a in corners {
        let vol: f64 = a.iter().product();
        let open = pts.iter().filter(|x| x.iter().zip(&a).all(|(u, v)| u < v)).count() as f64;
        let closed = pts.iter().filter(|x| x.iter().zip(&a).all(|(u, v)| u <= v)).count() as f64;
        best = best.max(vol - open / n).max(closed / n - vol);
    }
    best
}

fn norm_strategy() -> impl Strategy<Value = Norm> {
    prop_oneof![Just(Norm::L1), Just(Norm::L2), Just(Norm::Linf)]
}

fn float_set(d: usize) -> impl Strategy<Value = PointSet> {
    proptest::collection::vec(0.0f64..1.0, 2 * d..40 * d)
        .prop_map(move |mut v| {
            v.truncate(v.len() / d * d);
            PointSet::from_float(d, v, Provenance::new("random")).unwrap()
        })
}

fn rank1_case() -> impl Strategy<Value = (Vec<u64>, u64)> {
    (3u64..300, 2usize..4, any::<u64>()).prop_map(|(n, d, seed)| {
        let mut g = vec![1u64];
        let mut s = seed;
        while g.len() < d {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let c = (s >> 33) % n;
            if c.gcd(&n) == 1 {
                g.push(c);
            }
        }
        (g, n)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn file_round_trip_float(p in float_set(3)) {
        let s = format::to_string(&p);
        let q = format::from_str(&s).unwrap();
        prop_assert_eq!(format::to_string(&q), s);
        prop_assert_eq!(q.to_f64(), p.to_f64());
    }

    #[test]
    fn file_round_trip_rank1((g, n) in rank1_case()) {
        let p = gen_rank1(&g, n).unwrap();
        let q = format::from_str(&format::to_string(&p)).unwrap();
        prop_assert_eq!(&q, &p.reduce_denominator());
        prop_assert_eq!(q.provenance().rank1(), Some((g, n)));
    }

    #[test]
    fn rank1_points_are_distinct((g, n) in rank1_case()) {
        let p = gen_rank1(&g, n).unwrap();
        prop_assert_eq!(p.len() as u64, n);
        prop_assert_eq!(p.dedup().len() as u64, n);
    }

    #[test]
    fn separation_matches_brute_force(p in float_set(2), norm in norm_strategy()) {
        let s = separation_radius(&p, norm).unwrap();
        prop_assert!((s.radius.value - brute_separation(&p, norm)).abs() <= 1e-15);
    }

    #[test]
    fn lattice_sets_are_separated_by_lambda1((g, n) in rank1_case(), norm in norm_strategy()) {
        let p = gen_rank1(&g, n).unwrap();
        let lam = shortest_vector(&rank1_lattice(&g, n).unwrap(), norm, DEFAULT_BUDGET).unwrap().length.value;
        let q = separation_radius(&p, norm).unwrap().radius.value;
        prop_assert!(q >= lam / 2.0 * (1.0 - 1e-12));
    }

    #[test]
    fn covering_enclosure_is_ordered(p in float_set(2), norm in norm_strategy(), m in 2usize..40) {
        let c = covering_radius_enclosure(&p, norm, m).unwrap();
        let fine = covering_radius_enclosure(&p, norm, 4 * m).unwrap();
        prop_assert!(c.lower <= c.upper);
        // Refining the grid keeps the true covering radius inside both intervals.
        prop_assert!(fine.lower <= c.upper && c.lower <= fine.upper);
    }

    #[test]
    fn dstar_exact_matches_corner_scan(p in float_set(2)) {
        let exact = star_discrepancy_exact(&p, DEFAULT_DSTAR_BUDGET).unwrap();
        prop_assert!((exact.value - brute_dstar(&p)).abs() <= 1e-12);
        let lb = star_discrepancy_lb(&p, 500, 1).unwrap();
        prop_assert!(lb.value <= exact.value + 1e-12);
    }

    #[test]
    fn kronecker_prefixes_are_stable(n in 2u64..400, k in 1u64..400) {
        let k = k.min(n);
        let full = gen_kronecker(&alpha_power2(2), n, false).unwrap();
        let short = gen_kronecker(&alpha_power2(2), k, false).unwrap();
        prop_assert_eq!(full.prefix(k as usize).unwrap().to_f64(), short.to_f64());
        prop_assert!(nestedness_check(&short, &full, 0.0));
    }
}

#[test]
fn fibonacci_file_analyze_pipeline() {
    let p = gen_fibonacci(8).unwrap();
    let q = format::from_str(&format::to_string(&p)).unwrap();
    let r = analyze(&q, &AnalyzeOptions::default()).unwrap();
    assert_eq!((r.n, r.family.as_str()), (21, "fibonacci"));
    assert!(r.errors.is_empty(), "{:?}", r.errors);
    assert!(r.rho_lo.unwrap() <= r.rho_hi.unwrap() && r.rho_hi.unwrap() <= 12.0);
    let direct = mesh_ratio_enclosure(&p, Norm::Linf, r.grid.unwrap()).unwrap();
    assert_eq!(r.rho_hi, Some(direct.upper));
    assert_eq!(r.kappa, Some(qups::lattice::trig_degree(&[1, 13], 21, DEFAULT_BUDGET).unwrap()));
}

#[test]
fn anisotropic_grid_report() {
    let opts = AnalyzeOptions { metrics: Metric::parse_list("sep,mesh").unwrap(), ..Default::default() };
    let r = analyze(&gen_grid_aniso(3, 2).unwrap(), &opts).unwrap();
    assert_eq!((r.n, r.q_exact.as_deref()), (27, Some("1/18")));
}
