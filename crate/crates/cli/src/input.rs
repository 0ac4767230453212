//! Input files and option values.
//!
//! A connection file lists the nonzero entries of `M` in `d + M dz/z`:
//!
//! ```toml
//! n = 2
//! ramification = 1      # exponents are multiples of 1/ramification
//! precision = "4"       # optional: every entry is known below z^4
//!
//! [[entries]]
//! row = 1
//! col = 2
//! value = "z^-1 + 3/2"
//! ```
//!
//! A formal-type file is the canonical serialization written by `reduce`.

use std::path::Path;

use loopstrata::apartment::Point;
use loopstrata::formaltype::FormalType;
use loopstrata::scalars::parse::{parse_rational, parse_scalar, parse_series};
use loopstrata::scalars::{is_integer, PuiseuxSeries, Q};
use loopstrata::strata::Connection;
use loopstrata::torus::TorusData;
use loopstrata::LoopMatrix;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConnectionFile {
    n: usize,
    #[serde(default = "one")]
    ramification: u32,
    precision: Option<String>,
    #[serde(default)]
    entries: Vec<EntryRecord>,
}

fn one() -> u32 {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EntryRecord {
    row: usize,
    col: usize,
    value: String,
}

#[derive(Deserialize)]
struct FormalTypeFile {
    torus: Vec<usize>,
    depth: String,
    #[serde(default)]
    coeff: Vec<CoeffRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoeffRecord {
    block: usize,
    grade: String,
    value: String,
}

fn parse_err(what: impl std::fmt::Display) -> CliError {
    CliError::Parse(what.to_string())
}

pub fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub fn parse_connection(text: &str) -> CliResult<Connection> {
    let file: ConnectionFile = toml::from_str(text).map_err(parse_err)?;
    let n = file.n;
    if n == 0 || n > 16 {
        return Err(parse_err(format!("rank n = {n} is outside 1..=16")));
    }
    if file.ramification == 0 {
        return Err(parse_err("ramification must be positive"));
    }
    let e = Q::from_integer(file.ramification.into());
    let prec = match &file.precision {
        Some(p) => Some(parse_rational(p).map_err(parse_err)?),
        None => None,
    };
    let mut entries: Vec<PuiseuxSeries> = (0..n * n).map(|_| PuiseuxSeries::exact_zero()).collect();
    for rec in &file.entries {
        if rec.row == 0 || rec.col == 0 || rec.row > n || rec.col > n {
            return Err(parse_err(format!("entry ({}, {}) outside a {n}x{n} matrix", rec.row, rec.col)));
        }
        let s = parse_series(&rec.value).map_err(parse_err)?;
        for (exp, _) in s.iter_q() {
            if !is_integer(&(&exp * &e)) {
                return Err(parse_err(format!("exponent {exp} is not a multiple of 1/{}", file.ramification)));
            }
        }
        let slot = &mut entries[(rec.row - 1) * n + rec.col - 1];
        *slot = &*slot + &s;
    }
    let mut m = LoopMatrix::from_entries(n, entries);
    if let Some(p) = prec {
        m = m.truncate_q(&p);
    }
    Ok(Connection::new(m))
}

pub fn parse_formal_type(text: &str) -> CliResult<FormalType> {
    let file: FormalTypeFile = toml::from_str(text).map_err(parse_err)?;
    if file.torus.is_empty() || file.torus.contains(&0) {
        return Err(parse_err("torus partition must have positive parts"));
    }
    let torus = TorusData::new(file.torus);
    let depth = parse_rational(&file.depth).map_err(parse_err)?;
    let mut terms = Vec::with_capacity(file.coeff.len());
    for c in &file.coeff {
        if c.block == 0 {
            return Err(parse_err("blocks are numbered from 1"));
        }
        let g = parse_rational(&c.grade).map_err(parse_err)?;
        let v = parse_scalar(&c.value).map_err(parse_err)?;
        terms.push((c.block - 1, g, v));
    }
    Ok(FormalType::from_terms(torus, depth, terms)?)
}

/// `a/b,c/d,...`.
pub fn parse_point(s: &str) -> CliResult<Point> {
    let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
    let coords = trimmed
        .split(',')
        .map(|c| parse_rational(c.trim()).map_err(parse_err))
        .collect::<CliResult<Vec<Q>>>()?;
    Ok(Point::new(coords))
}

/// `e1,e2,...`.
pub fn parse_partition(s: &str) -> CliResult<TorusData> {
    let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
    let parts = trimmed
        .split(',')
        .map(|c| c.trim().parse::<usize>().map_err(|_| parse_err(format!("bad partition part `{c}`"))))
        .collect::<CliResult<Vec<usize>>>()?;
    if parts.is_empty() || parts.contains(&0) {
        return Err(parse_err("partition parts must be positive"));
    }
    Ok(TorusData::new(parts))
}

/// A positive rational with denominator at most 64.
pub fn parse_precision(s: &str) -> CliResult<Q> {
    let p = parse_rational(s).map_err(parse_err)?;
    if p <= Q::from_integer(0.into()) || p.denom() > &64.into() {
        return Err(parse_err(format!("precision {p} must be positive with denominator at most 64")));
    }
    Ok(p)
}

/// Entries of a matrix as `[[gauge]]` records, 1-based.
pub fn matrix_records(table: &str, m: &LoopMatrix) -> String {
    let mut out = String::new();
    let n = m.n();
    for i in 0..n {
        for j in 0..n {
            let s = m.get(i, j);
            if s.is_exact_zero() {
                continue;
            }
            out.push_str(&format!("\n[[{table}]]\nrow = {}\ncol = {}\nvalue = \"{s}\"\n", i + 1, j + 1));
        }
    }
    out
}

/// Reads `[[table]]` records back into a matrix.
#[cfg(test)]
pub fn parse_matrix_records(text: &str, table: &str, n: usize) -> CliResult<LoopMatrix> {
    let doc: std::collections::BTreeMap<String, toml::Value> = toml::from_str(text).map_err(parse_err)?;
    let mut entries: Vec<PuiseuxSeries> = (0..n * n).map(|_| PuiseuxSeries::exact_zero()).collect();
    if let Some(toml::Value::Array(items)) = doc.get(table) {
        for item in items {
            let rec: EntryRecord = item.clone().try_into().map_err(parse_err)?;
            entries[(rec.row - 1) * n + rec.col - 1] = parse_series(&rec.value).map_err(parse_err)?;
        }
    }
    Ok(LoopMatrix::from_entries(n, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use loopstrata::scalars::{q, qi};

    #[test]
    fn connection_file() {
        let c = parse_connection(
            "n = 2\nramification = 2\nprecision = \"3\"\n[[entries]]\nrow = 1\ncol = 2\nvalue = \"z^(-1/2)\"\n",
        )
        .unwrap();
        assert_eq!(c.matrix().ram(), 2);
        assert_eq!(c.matrix().prec_q(), Some(qi(3)));
        assert!(parse_connection("n = 2\n[[entries]]\nrow = 1\ncol = 2\nvalue = \"z^(-1/2)\"\n").is_err());
        assert!(parse_connection("n = 2\n[[entries]]\nrow = 3\ncol = 1\nvalue = \"1\"\n").is_err());
        assert!(parse_connection("n = two").is_err());
    }

    #[test]
    fn options() {
        assert_eq!(parse_point("0,-1/2").unwrap(), Point::new(vec![qi(0), q(-1, 2)]));
        assert_eq!(parse_point("(1/3, 0)").unwrap().coords()[0], q(1, 3));
        assert_eq!(parse_partition("2,1").unwrap().blocks(), &[2, 1]);
        assert!(parse_partition("2,0").is_err());
        assert!(parse_precision("-1").is_err());
        assert!(parse_precision("1/128").is_err());
    }

    #[test]
    fn matrix_records_round_trip() {
        let m = LoopMatrix::elementary(3, 0, 2, loopstrata::Cyclotomic::from_q(q(-2, 7)), -1, 1);
        assert_eq!(parse_matrix_records(&matrix_records("gauge", &m), "gauge", 3).unwrap(), m);
    }

    #[test]
    fn formal_type_round_trip() {
        let t = TorusData::new(vec![3]);
        let a = FormalType::from_terms(
            t,
            q(2, 3),
            [(0, q(-2, 3), loopstrata::Cyclotomic::zeta(3)), (0, qi(0), loopstrata::Cyclotomic::from_q(q(1, 5)))],
        )
        .unwrap();
        assert_eq!(parse_formal_type(&a.to_canonical()).unwrap(), a);
    }
}
