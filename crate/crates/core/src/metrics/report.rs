use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Value};

use super::{covering_radius_enclosure, default_grid, separation_radius, star_discrepancy_exact, star_discrepancy_lb};
use crate::error::{Error, Result};
use crate::lattice::{dual_shortest_unchecked, DEFAULT_BUDGET};
use crate::norm::Norm;
use crate::pointset::PointSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Metric {
    Separation,
    Covering,
    Mesh,
    Dstar,
    Dual,
}

impl Metric {
    pub const ALL: [Metric; 5] = [Metric::Separation, Metric::Covering, Metric::Mesh, Metric::Dstar, Metric::Dual];

    /// Parses a comma-separated list; `all` selects every metric.
    pub fn parse_list(s: &str) -> Result<Vec<Metric>> {
        let mut out = Vec::new();
        for t in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if t.eq_ignore_ascii_case("all") {
                out.extend(Metric::ALL);
            } else {
                out.push(t.parse()?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sep" | "separation" => Ok(Metric::Separation),
            "cover" | "covering" => Ok(Metric::Covering),
            "mesh" => Ok(Metric::Mesh),
            "dstar" | "discrepancy" => Ok(Metric::Dstar),
            "dual" => Ok(Metric::Dual),
            other => Err(Error::domain(format!("unknown metric '{other}' (expected sep, cover, mesh, dstar, dual, all)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyzeOptions {
    pub metrics: Vec<Metric>,
    pub norm: Norm,
    /// Covering grid; `None` picks [`default_grid`].
    pub grid: Option<usize>,
    pub dstar_budget: u64,
    pub lb_trials: u64,
    pub seed: u64,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            metrics: Metric::ALL.to_vec(),
            norm: Norm::Linf,
            grid: None,
            dstar_budget: super::DEFAULT_DSTAR_BUDGET,
            lb_trials: 100_000,
            seed: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DstarKind {
    Exact,
    LowerBound,
}

/// Per-set diagnostics; absent figures serialize as `null`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuReport {
    pub n: usize,
    pub d: usize,
    pub p: Norm,
    pub q: Option<f64>,
    pub q_exact: Option<String>,
    pub h_lo: Option<f64>,
    pub h_hi: Option<f64>,
    pub grid: Option<usize>,
    pub rho_lo: Option<f64>,
    pub rho_hi: Option<f64>,
    pub dstar: Option<f64>,
    pub dstar_exact: Option<String>,
    pub dstar_kind: Option<DstarKind>,
    pub kappa: Option<u64>,
    pub sigma: Option<f64>,
    pub family: String,
    pub params: Map<String, Value>,
    /// Metrics that could not be computed, with the reason.
    pub errors: BTreeMap<String, String>,
}

/// Computes the requested metrics; a failing metric is recorded in
/// `errors` and the others are still reported.
pub fn analyze(p: &PointSet, opts: &AnalyzeOptions) -> Result<QuReport> {
    if opts.metrics.is_empty() {
        return Err(Error::domain("no metrics requested"));
    }
    let has = |m: Metric| opts.metrics.contains(&m);
    let prov = p.provenance();
    let mut r = QuReport {
        n: p.len(),
        d: p.dim(),
        p: opts.norm,
        q: None,
        q_exact: None,
        h_lo: None,
        h_hi: None,
        grid: None,
        rho_lo: None,
        rho_hi: None,
        dstar: None,
        dstar_exact: None,
        dstar_kind: None,
        kappa: None,
        sigma: None,
        family: prov.family.clone(),
        params: prov.params.clone(),
        errors: BTreeMap::new(),
    };
    if has(Metric::Separation) || has(Metric::Mesh) {
        match separation_radius(p, opts.norm) {
            Ok(s) => {
                r.q = Some(s.radius.value);
                r.q_exact = s.radius.exact.map(|_| s.radius.to_string());
            }
            Err(e) => {
                r.errors.insert("sep".into(), e.to_string());
            }
        }
    }
    if has(Metric::Covering) || has(Metric::Mesh) {
        let m = opts.grid.unwrap_or_else(|| default_grid(p.len(), p.dim()));
        match covering_radius_enclosure(p, opts.norm, m) {
            Ok(c) => {
                r.h_lo = Some(c.lower);
                r.h_hi = Some(c.upper);
                r.grid = Some(m);
            }
            Err(e) => {
                r.errors.insert("cover".into(), e.to_string());
            }
        }
    }
    if has(Metric::Mesh) {
        match (r.q, r.h_lo, r.h_hi) {
            (Some(q), Some(lo), Some(hi)) if q > 0.0 => {
                r.rho_lo = Some(lo / q);
                r.rho_hi = Some(hi / q);
            }
            (Some(_), Some(_), Some(_)) => {
                r.errors.insert("mesh".into(), "repeated points give zero separation".into());
            }
            _ => {
                r.errors.insert("mesh".into(), "needs both separation and covering".into());
            }
        }
    }
    if has(Metric::Dstar) {
        match star_discrepancy_exact(p, opts.dstar_budget) {
            Ok(ds) => {
                r.dstar = Some(ds.value);
                r.dstar_exact = ds.exact.map(|x| x.to_string());
                r.dstar_kind = Some(DstarKind::Exact);
            }
            Err(Error::Resource(_)) => match star_discrepancy_lb(p, opts.lb_trials, opts.seed) {
                Ok(ds) => {
                    r.dstar = Some(ds.value);
                    r.dstar_exact = ds.exact.map(|x| x.to_string());
                    r.dstar_kind = Some(if ds.lower_bound { DstarKind::LowerBound } else { DstarKind::Exact });
                }
                Err(e) => {
                    r.errors.insert("dstar".into(), e.to_string());
                }
            },
            Err(e) => {
                r.errors.insert("dstar".into(), e.to_string());
            }
        }
    }
    if has(Metric::Dual) {
        match prov.rank1() {
            Some((g, n)) => {
                let k = dual_shortest_unchecked(&g, n, Norm::L1, DEFAULT_BUDGET);
                let s = dual_shortest_unchecked(&g, n, Norm::L2, DEFAULT_BUDGET);
                match (k, s) {
                    (Ok(k), Ok(s)) => {
                        r.kappa = Some(k.length.exact.unwrap().key as u64);
                        r.sigma = Some(1.0 / s.length.value);
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        r.errors.insert("dual".into(), e.to_string());
                    }
                }
            }
            None if opts.metrics.len() < Metric::ALL.len() => {
                r.errors.insert("dual".into(), "point set carries no rank-1 generating vector".into());
            }
            None => {}
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_fibonacci, gen_grid_aniso, gen_kronecker};

    #[test]
    fn fibonacci_report() {
        let r = analyze(&gen_fibonacci(6).unwrap(), &AnalyzeOptions::default()).unwrap();
        assert_eq!((r.n, r.d, r.q, r.q_exact.as_deref()), (8, 2, Some(0.125), Some("1/8")));
        assert!(r.rho_hi.unwrap() <= 12.0);
        assert_eq!((r.kappa, r.dstar_kind), (Some(4), Some(DstarKind::Exact)));
        assert!((r.sigma.unwrap() - 1.0 / 8f64.sqrt()).abs() < 1e-15);
        assert!(r.errors.is_empty());
        let json = serde_json::to_value(&r).unwrap();
        for key in ["n", "d", "p", "q", "h_lo", "h_hi", "rho_lo", "rho_hi", "dstar", "kappa", "sigma", "family", "params"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert_eq!(json["p"], "inf");
    }

    #[test]
    fn partial_reports() {
        let g = gen_grid_aniso(2, 2).unwrap();
        let opts = AnalyzeOptions { metrics: Metric::parse_list("sep").unwrap(), ..Default::default() };
        let r = analyze(&g, &opts).unwrap();
        assert_eq!((r.n, r.q), (8, Some(0.125)));
        assert!(r.h_lo.is_none());
        let opts = AnalyzeOptions { metrics: vec![], ..Default::default() };
        assert!(analyze(&g, &opts).is_err());
        let k = gen_kronecker(&[0.1, 0.2, 0.3, 0.4], 50, false).unwrap();
        let opts = AnalyzeOptions { metrics: Metric::parse_list("dstar,dual").unwrap(), lb_trials: 100, ..Default::default() };
        let r = analyze(&k, &opts).unwrap();
        assert_eq!(r.dstar_kind, Some(DstarKind::LowerBound));
        assert!(r.errors.contains_key("dual"));
        assert!(Metric::parse_list("sep,bogus").is_err());
    }
}
