//! Plain-text point-set files.
//!
//! ```text
//! qups 1 <d> <N> <rat|f64>
//! # family=<name>
//! # params=<json object>
//! <d fields>   (N lines)
//! ```
//!
//! `rat` fields are `num/den` in lowest terms; `f64` fields carry 17
//! significant digits so that binary64 values survive a round trip. Lines
//! starting with `#` are comments; the `family=` and `params=` comments restore
//! the provenance when present.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num_integer::Integer;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::pointset::{Coords, PointSet, Provenance};

pub const MAGIC: &str = "qups";
pub const VERSION: u32 = 1;

/// Serializes `p` into the file format.
pub fn to_string(p: &PointSet) -> String {
    let mut s = String::new();
    let repr = if p.is_rational() { "rat" } else { "f64" };
    writeln!(s, "{MAGIC} {VERSION} {} {} {repr}", p.dim(), p.len()).unwrap();
    let prov = p.provenance();
    writeln!(s, "# family={}", prov.family).unwrap();
    if !prov.params.is_empty() {
        writeln!(s, "# params={}", Value::Object(prov.params.clone())).unwrap();
    }
    let d = p.dim();
    match p.coords() {
        Coords::Rational { den, nums } => {
            for row in nums.chunks(d) {
                let fields: Vec<String> = row
                    .iter()
                    .map(|&a| {
                        let g = a.gcd(den);
                        format!("{}/{}", a / g, den / g)
                    })
                    .collect();
                writeln!(s, "{}", fields.join(" ")).unwrap();
            }
        }
        Coords::Float(xs) => {
            for row in xs.chunks(d) {
                let fields: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
                writeln!(s, "{}", fields.join(" ")).unwrap();
            }
        }
    }
    s
}

pub fn write<W: Write>(p: &PointSet, mut w: W) -> std::io::Result<()> {
    w.write_all(to_string(p).as_bytes())
}

pub fn read<R: BufRead>(r: R) -> Result<PointSet> {
    let mut text = String::new();
    let mut r = r;
    r.read_to_string(&mut text).map_err(|e| Error::Parse { line: 0, message: e.to_string() })?;
    from_str(&text)
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

enum Repr {
    Rat,
    F64,
}

/// Parses the file format. Line numbers in errors are 1-based.
pub fn from_str(text: &str) -> Result<PointSet> {
    let mut header: Option<(usize, usize, Repr)> = None;
    let mut family = String::from("file");
    let mut params = Map::new();
    let mut rows: Vec<(usize, &str)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let ln = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            let c = c.trim();
            if let Some(f) = c.strip_prefix("family=") {
                family = f.to_string();
            } else if let Some(j) = c.strip_prefix("params=") {
                match serde_json::from_str::<Value>(j) {
                    Ok(Value::Object(m)) => params = m,
                    _ => return Err(perr(ln, "params comment is not a JSON object")),
                }
            }
            continue;
        }
        if header.is_none() {
            header = Some(parse_header(ln, line)?);
        } else {
            rows.push((ln, line));
        }
    }
    let (d, n, repr) = header.ok_or_else(|| perr(0, "missing header line"))?;
    if rows.len() != n {
        let ln = rows.last().map_or(1, |r| r.0);
        return Err(perr(ln, format!("header declares {n} points but found {}", rows.len())));
    }
    let prov = Provenance { family, params };
    match repr {
        Repr::F64 => {
            let mut xs = Vec::with_capacity(n * d);
            for &(ln, line) in &rows {
                let fields = split_fields(ln, line, d)?;
                for f in fields {
                    let x: f64 = f.parse().map_err(|_| perr(ln, format!("invalid number '{f}'")))?;
                    if !(0.0..1.0).contains(&x) {
                        return Err(perr(ln, format!("coordinate {f} outside [0,1)")));
                    }
                    xs.push(x);
                }
            }
            PointSet::from_float(d, xs, prov)
        }
        Repr::Rat => {
            let mut fr: Vec<(u64, u64)> = Vec::with_capacity(n * d);
            let mut den: u64 = 1;
            for &(ln, line) in &rows {
                for f in split_fields(ln, line, d)? {
                    let (a, b) = f.split_once('/').ok_or_else(|| perr(ln, format!("expected num/den, got '{f}'")))?;
                    let a: u64 = a.parse().map_err(|_| perr(ln, format!("invalid numerator '{a}'")))?;
                    let b: u64 = b.parse().map_err(|_| perr(ln, format!("invalid denominator '{b}'")))?;
                    if b == 0 || a >= b {
                        return Err(perr(ln, format!("coordinate {f} outside [0,1)")));
                    }
                    let g = a.gcd(&b);
                    let (a, b) = (a / g, b / g);
                    den = (den / den.gcd(&b))
                        .checked_mul(b)
                        .ok_or_else(|| perr(ln, "common denominator exceeds 64 bits"))?;
                    fr.push((a, b));
                }
            }
            let nums = fr.into_iter().map(|(a, b)| a * (den / b)).collect();
            PointSet::from_rational(d, den, nums, prov)
        }
    }
}

fn parse_header(ln: usize, line: &str) -> Result<(usize, usize, Repr)> {
    let t: Vec<&str> = line.split_whitespace().collect();
    if t.len() != 5 || t[0] != MAGIC {
        return Err(perr(ln, "expected header 'qups 1 <d> <N> <rat|f64>'"));
    }
    if t[1] != "1" {
        return Err(perr(ln, format!("unsupported format version {}", t[1])));
    }
    let d: usize = t[2].parse().map_err(|_| perr(ln, "invalid dimension"))?;
    let n: usize = t[3].parse().map_err(|_| perr(ln, "invalid point count"))?;
    if d == 0 || n == 0 {
        return Err(perr(ln, "dimension and point count must be positive"));
    }
    let repr = match t[4] {
        "rat" => Repr::Rat,
        "f64" => Repr::F64,
        other => return Err(perr(ln, format!("unknown representation '{other}'"))),
    };
    Ok((d, n, repr))
}

fn split_fields(ln: usize, line: &str, d: usize) -> Result<Vec<&str>> {
    let f: Vec<&str> = line.split_whitespace().collect();
    if f.len() != d {
        return Err(perr(ln, format!("expected {d} fields, found {}", f.len())));
    }
    Ok(f)
}
