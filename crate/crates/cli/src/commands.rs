use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use qups::generators::{
    gen_fibonacci, gen_frolov_points, gen_grid_aniso, gen_grid_regular, gen_hexagonal_cf, gen_kronecker, gen_rank1, AlphaSpec,
};
use qups::metrics::{analyze as run_analyze, profile_prefixes, AnalyzeOptions, GridPolicy, Metric, SequenceFamily};
use qups::search::{auto_thresholds, search_generators, SearchConfig, SearchMode};
use qups::verify::{run_suite, Suite};
use qups::{format, Norm, PointSet};

use crate::error::CliError;
use crate::{AnalyzeArgs, GenArgs, Kind, ModeArg, ProfileArgs, SearchArgs, VerifyArgs};

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn need<T: Copy>(v: Option<T>, flag: &str, kind: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for --kind {kind}")))
}

fn emit(out: Option<&Path>, bytes: &str) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout().write_all(bytes.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

fn parse_norm(s: &str) -> Result<Norm, CliError> {
    s.parse::<Norm>().map_err(CliError::from)
}

fn alpha(spec: Option<&str>, dim: Option<usize>) -> Result<Vec<f64>, CliError> {
    let spec: AlphaSpec = spec.unwrap_or("pow2").parse()?;
    let d = match (&spec, dim) {
        (_, Some(d)) => d,
        (AlphaSpec::List(v), None) => v.len(),
        (AlphaSpec::Golden, None) => 1,
        _ => return Err(CliError::Usage("--dim is required for this alpha".into())),
    };
    Ok(spec.resolve(d)?)
}

fn shift(v: &[f64], d: usize) -> Result<Vec<f64>, CliError> {
    match v.len() {
        0 => Ok(vec![0.0; d]),
        n if n == d => Ok(v.to_vec()),
        n => Err(CliError::Usage(format!("--shift has {n} entries, expected {d}"))),
    }
}

pub fn build_pointset(a: &GenArgs) -> Result<PointSet, CliError> {
    let name = |k: Kind| format!("{k:?}").to_lowercase();
    let kn = name(a.kind);
    Ok(match a.kind {
        Kind::Rank1 => {
            if a.g.is_empty() {
                return Err(CliError::Usage("--g is required for --kind rank1".into()));
            }
            gen_rank1(&a.g, need(a.n, "n", &kn)?)?
        }
        Kind::Fibonacci => {
            let m = need(a.m, "m", &kn)?;
            let m = u32::try_from(m).map_err(|_| CliError::Usage("--m is too large".into()))?;
            gen_fibonacci(m)?
        }
        Kind::Hexcf => gen_hexagonal_cf(need(a.k, "k", &kn)?)?,
        Kind::Kronecker => {
            let al = alpha(a.alpha.as_deref(), a.dim)?;
            gen_kronecker(&al, need(a.count, "count", &kn)?, a.include_zero)?
        }
        Kind::Frolov => {
            let d = need(a.dim, "dim", &kn)?;
            gen_frolov_points(d, need(a.a, "a", &kn)?, &shift(&a.shift, d)?)?
        }
        Kind::Grid => gen_grid_regular(need(a.m, "m", &kn)?, need(a.dim, "dim", &kn)?)?,
        Kind::GridAniso => gen_grid_aniso(need(a.m, "m", "grid-aniso")?, need(a.dim, "dim", "grid-aniso")?)?,
    })
}

pub fn gen(a: &GenArgs) -> Result<(), CliError> {
    let p = build_pointset(a)?;
    emit(a.out.as_deref(), &format::to_string(&p))
}

fn read_pointset(path: &PathBuf) -> Result<PointSet, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(e.to_string()))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?
    };
    Ok(format::from_str(&text)?)
}

pub fn analyze(a: &AnalyzeArgs) -> Result<(), CliError> {
    let p = read_pointset(&a.input)?;
    let metrics = Metric::parse_list(&a.metrics)?;
    let opts = AnalyzeOptions {
        metrics: metrics.clone(),
        norm: parse_norm(&a.norm)?,
        grid: a.grid,
        dstar_budget: a.dstar_budget,
        lb_trials: a.lb_trials,
        seed: a.seed,
    };
    let report = run_analyze(&p, &opts)?;
    let mut v = serde_json::to_value(&report).expect("report serializes");
    let obj = v.as_object_mut().unwrap();
    obj.insert("tool".into(), json!({ "name": "qups", "version": VERSION }));
    obj.insert(
        "parameters".into(),
        json!({
            "input": a.input.display().to_string(),
            "metrics": metrics.iter().map(|m| format!("{m:?}").to_lowercase()).collect::<Vec<_>>(),
            "norm": opts.norm,
            "grid": a.grid,
            "dstar_budget": a.dstar_budget,
            "lb_trials": a.lb_trials,
            "seed": a.seed,
        }),
    );
    emit(a.out.as_deref(), &(serde_json::to_string_pretty(&v).unwrap() + "\n"))
}

/// `pow<b>:<lo>..<hi>` or a comma-separated list of positive integers.
pub fn parse_indices(s: &str) -> Result<Vec<u64>, CliError> {
    let bad = || CliError::Usage(format!("cannot read index spec '{s}' (expected e.g. pow2:4..14 or 16,32,64)"));
    if let Some(rest) = s.strip_prefix("pow") {
        let (base, range) = rest.split_once(':').ok_or_else(bad)?;
        let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
        let base: u64 = base.parse().map_err(|_| bad())?;
        let lo: u32 = lo.parse().map_err(|_| bad())?;
        let hi: u32 = hi.parse().map_err(|_| bad())?;
        if base < 2 {
            return Err(CliError::Usage("index base must be at least 2".into()));
        }
        if lo > hi {
            return Err(CliError::Usage(format!("index range {lo}..{hi} is not increasing")));
        }
        return (lo..=hi)
            .map(|e| base.checked_pow(e).ok_or_else(|| CliError::Usage(format!("{base}^{e} overflows"))))
            .collect();
    }
    s.split(',').map(|t| t.trim().parse::<u64>().map_err(|_| bad())).collect()
}

pub fn profile(a: &ProfileArgs) -> Result<(), CliError> {
    let family = match a.kind {
        Kind::Kronecker => SequenceFamily::Kronecker { alpha: alpha(a.alpha.as_deref(), a.dim)?, include_zero: a.include_zero },
        Kind::Frolov => {
            let d = need(a.dim, "dim", "frolov")?;
            SequenceFamily::Frolov { d, shift: shift(&a.shift, d)? }
        }
        k => return Err(CliError::Usage(format!("profile supports --kind kronecker or frolov, not {k:?}"))),
    };
    let indices = parse_indices(&a.indices)?;
    let grid = a.grid.map_or(GridPolicy::Adaptive, GridPolicy::Fixed);
    let prof = profile_prefixes(&family, &indices, parse_norm(&a.norm)?, grid)?;
    emit(a.out.as_deref(), &prof.to_csv())
}

pub fn search(a: &SearchArgs) -> Result<(), CliError> {
    let mut cfg = SearchConfig::new(a.n, a.dim);
    match a.thresholds.as_deref() {
        None => {}
        Some("auto") => {
            if !qups::numtheory::is_prime(a.n) {
                return Err(qups::Error::Domain(format!("N = {} is not prime; the search requires a prime modulus", a.n)).into());
            }
            (cfg.kappa_dual_min, cfg.kappa_primal_min) = auto_thresholds(a.n, a.dim)?;
        }
        Some(other) => return Err(CliError::Usage(format!("--thresholds accepts only 'auto', got '{other}'"))),
    }
    if let Some(x) = a.kappa_dual_min {
        cfg.kappa_dual_min = x;
    }
    if let Some(x) = a.kappa_primal_min {
        cfg.kappa_primal_min = x;
    }
    cfg.dstar_max = a.dstar_max;
    cfg.mode = match a.mode {
        ModeArg::Exhaustive => SearchMode::Exhaustive,
        ModeArg::Random => SearchMode::Random { samples: a.samples, seed: a.seed },
    };
    cfg.exclude_zero = a.exclude_zero;
    cfg.max_scan = a.max_scan;
    cfg.mesh_grid = a.mesh_grid;
    let r = search_generators(&cfg)?;
    let mut summary = r.summary_json();
    summary.as_object_mut().unwrap().insert("tool".into(), json!({ "name": "qups", "version": VERSION }));
    let summary = serde_json::to_string_pretty(&summary).unwrap() + "\n";
    emit(a.out.as_deref(), &r.to_csv())?;
    match &a.summary {
        Some(p) => fs::write(p, &summary).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            eprint!("{summary}");
            Ok(())
        }
    }
}

pub fn verify_bounds(a: &VerifyArgs) -> Result<(), CliError> {
    let suites = Suite::parse_selection(&a.suite)?;
    let mut all = Vec::new();
    let mut out = String::new();
    out.push_str(&format!("{:<10} {:<28} {:<26} {:>14} {:>2} {:>14}  {}\n", "suite", "check", "case", "measured", "", "bound", "result"));
    for s in suites {
        for r in run_suite(s)? {
            out.push_str(&format!(
                "{:<10} {:<28} {:<26} {:>14.8e} {:>2} {:>14.8e}  {}\n",
                s.name(),
                r.anchor,
                r.case,
                r.measured,
                r.relation.to_string(),
                r.bound,
                if r.pass { "PASS" } else { "FAIL" }
            ));
            all.push(r);
        }
    }
    let failed: Vec<String> = all.iter().filter(|r| !r.pass).map(|r| format!("{} / {} / {}", r.suite.name(), r.anchor, r.case)).collect();
    out.push_str(&format!("{} checks, {} failed\n", all.len(), failed.len()));
    emit(None, &out)?;
    if let Some(p) = &a.json {
        let v: Value = serde_json::to_value(&all).unwrap();
        fs::write(p, serde_json::to_string_pretty(&v).unwrap() + "\n")
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed))
    }
}
