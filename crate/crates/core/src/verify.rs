//! Batch checks of the construction bounds, grouped into named suites.
//! Each row records the measured quantity next to the bound it must meet.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generators::{alpha_power2, gen_fibonacci, gen_frolov_points, gen_hexagonal_cf, hexagonal_cf_pair, GOLDEN, LIOUVILLE};
use crate::lattice::{
    admissibility_min_normform, frolov_matrix, lattice_covering_upper, rank1_lattice, shortest_vector,
    shortest_vector_2d_cf, successive_minima, LatticeSpec, DEFAULT_BUDGET,
};
use crate::metrics::{covering_radius_enclosure, default_grid, mesh_ratio_enclosure, nestedness_check, separation_radius};
use crate::norm::Norm;
use crate::numtheory::{badly_approximable_profile, cf_expand_rational, fibonacci};

/// `min_{n ≤ 10⁵} n^{1/2} ⟨n α⟩` for `α = alpha_power2(2)`.
pub const POW2_C_STAR: f64 = 0.29592461992295155;
pub const FROLOV_MESH_BOUND: f64 = 3.1;
const REL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Cf,
    Minima,
    Meshratio,
    Nalpha,
    Frolov,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Cf, Suite::Minima, Suite::Meshratio, Suite::Nalpha, Suite::Frolov];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Cf => "cf",
            Suite::Minima => "minima",
            Suite::Meshratio => "meshratio",
            Suite::Nalpha => "nalpha",
            Suite::Frolov => "frolov",
        }
    }

    /// Suites named by `s`; `all` expands to every suite.
    pub fn parse_selection(s: &str) -> Result<Vec<Suite>> {
        if s.trim().eq_ignore_ascii_case("all") {
            return Ok(Suite::ALL.to_vec());
        }
        Ok(vec![s.parse()?])
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::domain(format!("unknown suite '{s}' (expected cf, minima, meshratio, nalpha, frolov, all)")))
    }
}

/// Direction of the comparison `measured <rel> bound`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "==")]
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Lt => "<",
            Relation::Eq => "==",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRow {
    pub suite: Suite,
    /// Short name of the bound being checked.
    pub anchor: String,
    /// The instance, e.g. `fibonacci m=7`.
    pub case: String,
    pub measured: f64,
    pub relation: Relation,
    pub bound: f64,
    pub pass: bool,
}

fn row(suite: Suite, anchor: &str, case: String, measured: f64, relation: Relation, bound: f64, pass: bool) -> CheckRow {
    CheckRow { suite, anchor: anchor.into(), case, measured, relation, bound, pass }
}

fn cmp_row(suite: Suite, anchor: &str, case: String, measured: f64, relation: Relation, bound: f64) -> CheckRow {
    let slack = REL_TOL * bound.abs().max(1.0);
    let pass = match relation {
        Relation::Le => measured <= bound + slack,
        Relation::Ge => measured >= bound - slack,
        Relation::Lt => measured < bound,
        Relation::Eq => (measured - bound).abs() <= slack,
    };
    row(suite, anchor, case, measured, relation, bound, pass)
}

pub fn run_suite(suite: Suite) -> Result<Vec<CheckRow>> {
    match suite {
        Suite::Cf => suite_cf(),
        Suite::Minima => suite_minima(),
        Suite::Meshratio => suite_meshratio(),
        Suite::Nalpha => suite_nalpha(),
        Suite::Frolov => suite_frolov(),
    }
}

/// Two-dimensional `(g, N)` pairs: Fibonacci ratios plus seeded random pairs.
pub fn pair_fixtures(random: usize, seed: u64) -> Result<Vec<(u64, u64)>> {
    let mut out = Vec::new();
    for m in 5..=20 {
        out.push((fibonacci(m - 1)?, fibonacci(m)?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < 16 + random {
        let n = rng.gen_range(2..=512u64);
        let g = rng.gen_range(1..n);
        if num_integer::gcd(g, n) == 1 {
            out.push((g, n));
        }
    }
    Ok(out)
}

fn suite_cf() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (g, n) in pair_fixtures(40, 7)? {
        let cf = cf_expand_rational(g, n)?;
        let conv = cf.convergents();
        // Prefix minima of ⟨k g/N⟩·N over k = 1..N−1.
        let mut prefix = vec![u64::MAX; n as usize];
        for k in 1..n as usize {
            let r = (k as u64 * g) % n;
            prefix[k] = prefix[k - 1].min(r.min(n - r));
        }
        // Each convergent q_j beats every k < q_{j+1}: ratio ≥ 1.
        let mut worst = f64::INFINITY;
        for w in conv.windows(2) {
            let (q, q_next) = (w[0].q, w[1].q.min(n));
            if q_next <= 1 || q >= n {
                continue;
            }
            let r = (q * g) % n;
            let dq = r.min(n - r);
            if dq == 0 {
                continue;
            }
            worst = worst.min(prefix[q_next as usize - 1] as f64 / dq as f64);
        }
        if worst.is_finite() {
            rows.push(cmp_row(Suite::Cf, "best approximation", format!("g/N={g}/{n}"), worst, Relation::Ge, 1.0));
        }
        let fast = shortest_vector_2d_cf(g, n)?;
        let enumerated = shortest_vector(&rank1_lattice(&[1, g], n)?, Norm::Linf, DEFAULT_BUDGET)?;
        let same = fast.length.exact.unwrap().cmp_exact(&enumerated.length.exact.unwrap()).is_eq();
        rows.push(row(
            Suite::Cf,
            "cf shortest vector",
            format!("g/N={g}/{n}"),
            fast.length.value,
            Relation::Eq,
            enumerated.length.value,
            same,
        ));
    }
    for m in 5..=20u32 {
        let k = cf_expand_rational(fibonacci(m - 1)?, fibonacci(m)?)?.max_partial_quotient()?;
        rows.push(cmp_row(Suite::Cf, "fibonacci K", format!("m={m}"), k as f64, Relation::Eq, 1.0));
    }
    for k in 1..=12 {
        let (p, q) = hexagonal_cf_pair(k)?;
        let kk = cf_expand_rational(p, q)?.max_partial_quotient()?;
        rows.push(cmp_row(Suite::Cf, "hexagonal K", format!("k={k}"), kk as f64, Relation::Le, 2.0));
    }
    Ok(rows)
}

fn lattice_fixtures() -> Result<Vec<(String, LatticeSpec)>> {
    let mut out = vec![("rank1 (1,5)/8".to_string(), rank1_lattice(&[1, 5], 8)?)];
    for m in [6u32, 9, 12, 15] {
        let (g, n) = (fibonacci(m - 1)?, fibonacci(m)?);
        out.push((format!("rank1 (1,{g})/{n}"), rank1_lattice(&[1, g], n)?));
    }
    out.push(("rank1 (1,3,9)/31".into(), rank1_lattice(&[1, 3, 9], 31)?));
    out.push(("rank1 (1,12,20)/101".into(), rank1_lattice(&[1, 12, 20], 101)?));
    out.push(("rank1 (1,7,49,343)/401".into(), rank1_lattice(&[1, 7, 49, 343], 401)?));
    out.push(("frolov d=2".into(), frolov_matrix(2)?));
    out.push(("frolov d=3".into(), frolov_matrix(3)?));
    Ok(out)
}

fn suite_minima() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (name, l) in lattice_fixtures()? {
        let lam = successive_minima(&l, Norm::Linf, DEFAULT_BUDGET)?.values();
        let prod: f64 = lam.iter().product();
        let det = l.det_abs();
        let fact: f64 = (1..=l.dim()).map(|i| i as f64).product();
        rows.push(cmp_row(Suite::Minima, "minkowski upper", name.clone(), prod, Relation::Le, det));
        rows.push(cmp_row(Suite::Minima, "minkowski lower", name, prod, Relation::Ge, det / fact));
    }
    for (g, n) in pair_fixtures(40, 11)? {
        let k = cf_expand_rational(g, n)?.max_partial_quotient()?;
        let sv = shortest_vector_2d_cf(g, n)?.length.exact.unwrap();
        // λ₁² (K+2) N ≥ 1  ⇔  key² (K+2) ≥ N.
        let lhs = sv.key * sv.key * (k as u128 + 2);
        rows.push(row(
            Suite::Minima,
            "lambda1 >= 1/sqrt((K+2)N)",
            format!("g/N={g}/{n}"),
            sv.to_f64(),
            Relation::Ge,
            1.0 / (((k + 2) * n) as f64).sqrt(),
            lhs >= n as u128,
        ));
    }
    Ok(rows)
}

fn suite_meshratio() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for m in 5..=20u32 {
        let p = gen_fibonacci(m)?;
        let mesh = mesh_ratio_enclosure(&p, Norm::Linf, 512)?;
        rows.push(cmp_row(Suite::Meshratio, "fibonacci rho <= 4(K+2)", format!("m={m} grid=512"), mesh.upper, Relation::Le, 12.0));
    }
    for k in 1..=8u32 {
        let p = gen_hexagonal_cf(k)?;
        let mesh = mesh_ratio_enclosure(&p, Norm::Linf, default_grid(p.len(), 2))?;
        rows.push(cmp_row(Suite::Meshratio, "hexagonal rho <= 4(K+2)", format!("k={k}"), mesh.upper, Relation::Le, 16.0));
    }
    for (g, n) in [(vec![1, 5], 8), (vec![1, 21], 34), (vec![1, 55], 89), (vec![1, 3, 9], 31), (vec![1, 12, 20], 101)] {
        let p = crate::generators::gen_rank1(&g, n)?;
        let l = rank1_lattice(&g, n)?;
        let d = g.len();
        let case = format!("rank1 {g:?}/{n}");
        let lam = shortest_vector(&l, Norm::Linf, DEFAULT_BUDGET)?.length.value;
        let q = separation_radius(&p, Norm::Linf)?.radius.value;
        rows.push(cmp_row(Suite::Meshratio, "q >= lambda1/2", case.clone(), q, Relation::Ge, lam / 2.0));
        let h = covering_radius_enclosure(&p, Norm::Linf, default_grid(p.len(), d))?.lower;
        let hl = lattice_covering_upper(&l, Norm::Linf, DEFAULT_BUDGET)?;
        rows.push(cmp_row(Suite::Meshratio, "h <= 2 h(lattice)", case, h, Relation::Le, 2.0 * hl));
    }
    Ok(rows)
}

fn suite_nalpha() -> Result<Vec<CheckRow>> {
    let n_max = 100_000;
    let golden = badly_approximable_profile(&[GOLDEN], n_max)?;
    let pow2 = badly_approximable_profile(&alpha_power2(2), n_max)?;
    let liou = badly_approximable_profile(&[LIOUVILLE, LIOUVILLE], n_max)?;
    Ok(vec![
        cmp_row(Suite::Nalpha, "golden n<n alpha>", format!("n<=1e5 argmin={}", golden.argmin), golden.min_value, Relation::Ge, 0.38),
        row(
            Suite::Nalpha,
            "pow2 n^(1/2)<n alpha>",
            format!("n<=1e5 argmin={}", pow2.argmin),
            pow2.min_value,
            Relation::Ge,
            POW2_C_STAR,
            pow2.min_value >= POW2_C_STAR - 1e-9,
        ),
        cmp_row(Suite::Nalpha, "liouville witness", format!("n<=1e5 argmin={}", liou.argmin), liou.min_value, Relation::Lt, 1e-3),
    ])
}

fn suite_frolov() -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    for (d, r) in [(2usize, 50.0), (3, 12.0)] {
        let m = admissibility_min_normform(&frolov_matrix(d)?, r, DEFAULT_BUDGET)?;
        rows.push(cmp_row(Suite::Frolov, "norm form >= 1", format!("d={d} R={r}"), m.value, Relation::Ge, 1.0 - 1e-9));
    }
    let mut prev = None;
    for i in 2..=7 {
        let a = (1u32 << i) as f64;
        let p = gen_frolov_points(2, a, &[0.0, 0.0])?;
        if let Some(s) = &prev {
            let nested = nestedness_check(s, &p, 1e-12);
            rows.push(row(Suite::Frolov, "nested", format!("a={} in a={a}", a / 2.0), nested as u8 as f64, Relation::Eq, 1.0, nested));
        }
        let mesh = mesh_ratio_enclosure(&p, Norm::Linf, default_grid(p.len(), 2))?;
        rows.push(cmp_row(Suite::Frolov, "mesh ratio", format!("d=2 a={a} N={}", p.len()), mesh.upper, Relation::Le, FROLOV_MESH_BOUND));
        prev = Some(p);
    }
    Ok(rows)
}
