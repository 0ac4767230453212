//! Command implementations. Each returns the text for stdout; identical
//! inputs give byte-identical output.

use std::fmt::Write as _;
use std::path::Path;

use loopstrata::apartment::Point;
use loopstrata::formaltype::{orbit_equivalent, validate, FormalType};
use loopstrata::reduce::{gauge, reduce_to_formal_type};
use loopstrata::scalars::Q;
use loopstrata::strata::{is_fundamental, is_regular_stratum, leading_stratum, slope_report, Connection};
use loopstrata::torus::{compatibility_witness, regular_classes, regular_depths, TorusData};
use loopstrata::Error;

use crate::error::{CliError, CliResult};
use crate::input::{matrix_records, parse_connection, parse_formal_type, read};

fn quoted_point(x: &Point) -> String {
    let coords: Vec<String> = x.coords().iter().map(|c| format!("\"{c}\"")).collect();
    format!("[{}]", coords.join(", "))
}

fn load_connection(path: &Path, precision: Option<&Q>) -> CliResult<Connection> {
    let c = parse_connection(&read(path)?)?;
    Ok(match precision {
        Some(p) => Connection::new(c.matrix().truncate_q(p)),
        None => c,
    })
}

pub fn slope(path: &Path, precision: Option<&Q>, structured: bool) -> CliResult<String> {
    let c = load_connection(path, precision)?;
    let rep = slope_report(&c)?;
    let x = rep.stratum.x();
    Ok(if structured {
        format!(
            "slope = \"{}\"\npoint = {}\nfundamental = {}\ndepth = \"{}\"\ndescent_steps = {}\n",
            rep.slope,
            quoted_point(x),
            rep.fundamental,
            rep.stratum.r(),
            rep.steps
        )
    } else {
        format!(
            "slope = {}, x = {x}, fundamental = {}\ndepth = {}, descent steps = {}\n",
            rep.slope,
            rep.fundamental,
            rep.stratum.r(),
            rep.steps
        )
    })
}

pub fn stratum(path: &Path, point: &Point, precision: Option<&Q>, structured: bool) -> CliResult<String> {
    let c = load_connection(path, precision)?;
    if point.n() != c.n() {
        return Err(CliError::Parse(format!("point has {} coordinates for a rank {} connection", point.n(), c.n())));
    }
    let st = leading_stratum(&c, point)?;
    let regular = match is_regular_stratum(&st) {
        Ok(Some(w)) => format!("{}", w.class),
        Ok(None) => String::from("no"),
        Err(Error::EigenvaluesOutsideField(_)) => String::from("undecided (irrational residue eigenvalues)"),
        Err(e) => return Err(e.into()),
    };
    let fundamental = is_fundamental(&st);
    Ok(if structured {
        format!(
            "point = {}\ndepth = \"{}\"\nfundamental = {fundamental}\nregular = \"{regular}\"\n{}",
            quoted_point(point),
            st.r(),
            matrix_records("leading", st.beta0())
        )
    } else {
        format!(
            "x = {point}, depth = {}, fundamental = {fundamental}, regular = {regular}\nleading term:\n{}\n",
            st.r(),
            st.beta0()
        )
    })
}

pub struct ReduceOptions<'a> {
    pub torus: &'a TorusData,
    pub point: Option<&'a Point>,
    pub precision: Option<&'a Q>,
    pub out: Option<&'a Path>,
    pub structured: bool,
}

/// Default working grade when neither the input nor `--precision` bounds it.
const DEFAULT_BOUND: i64 = 2;

pub fn reduce(path: &Path, opts: &ReduceOptions<'_>) -> CliResult<String> {
    let c = parse_connection(&read(path)?)?;
    let bound = opts.precision.cloned().unwrap_or_else(|| Q::from_integer(DEFAULT_BOUND.into()));
    let res = reduce_to_formal_type(&c, opts.torus, opts.point, &bound)?;
    // independent re-check of the certificate in the original coordinates
    let residual = gauge(&res.p, &c).matrix() - &res.reduced;
    if !residual.is_zero_to_precision() {
        return Err(Error::NoSolution(String::from("gauge certificate failed on re-check")).into());
    }
    let canonical = res.formal_type.to_canonical();
    let header = format!("certified_below = \"{}\"\n", res.certified_below);
    if let Some(out) = opts.out {
        let body = format!("{header}{canonical}{}", matrix_records("gauge", res.p.matrix()));
        std::fs::write(out, body).map_err(|source| CliError::Io { path: out.display().to_string(), source })?;
    }
    Ok(if opts.structured {
        format!("{header}{canonical}")
    } else {
        let mut s = format!("formal type: {}\nx = {}\n", res.formal_type, res.point);
        let _ = writeln!(s, "certified below grade {}", res.certified_below);
        if (res.p.matrix() - &loopstrata::LoopMatrix::identity(c.n())).is_zero_to_precision() {
            s.push_str("p = identity\n");
        }
        s
    })
}

pub fn orbit(a1: &Path, a2: &Path, structured: bool) -> CliResult<String> {
    let load = |p: &Path| -> CliResult<FormalType> {
        let a = parse_formal_type(&read(p)?)?;
        let v = validate(&a, None);
        if !v.valid {
            return Err(Error::InvalidFormalType(format!("{}: {}", p.display(), v.diagnosis.unwrap_or_default())).into());
        }
        Ok(a)
    };
    let (a, b) = (load(a1)?, load(a2)?);
    if a.torus() != b.torus() || a.depth() != b.depth() {
        return Err(Error::Mismatch(format!("{} depth {} vs {} depth {}", a.torus(), a.depth(), b.torus(), b.depth())).into());
    }
    Ok(match (orbit_equivalent(&a, &b), structured) {
        (Some(n), false) => format!("equivalent via {n}\n"),
        (Some(n), true) => format!("equivalent = true\nword = \"{n}\"\n"),
        (None, false) => String::from("inequivalent\n"),
        (None, true) => String::from("equivalent = false\n"),
    })
}

pub fn classes(n: usize, structured: bool) -> CliResult<String> {
    if !(1..=8).contains(&n) {
        return Err(CliError::Parse(format!("classes are tabulated for 1 <= n <= 8, not {n}")));
    }
    let mut s = String::new();
    for cls in regular_classes(n) {
        let depths = regular_depths(&cls)?;
        if structured {
            let parts: Vec<String> = cls.parts().iter().map(|p| p.to_string()).collect();
            let _ = write!(s, "[[class]]\nparts = [{}]\ndepths = \"{depths}\"\n\n", parts.join(", "));
        } else {
            let _ = writeln!(s, "{cls}: {depths}");
        }
    }
    Ok(s)
}

pub fn compatible_points(n: usize, torus: &TorusData, point: &Point, structured: bool) -> CliResult<String> {
    if torus.n() != n || point.n() != n {
        return Err(CliError::Parse(format!("partition {torus} and point {point} must both have size {n}")));
    }
    if n > 8 {
        return Err(CliError::Parse(String::from("permutation search is limited to n <= 8")));
    }
    Ok(match (compatibility_witness(point, torus), structured) {
        (Some(w), false) => {
            let perm: Vec<String> = w.perm.iter().map(|p| (p + 1).to_string()).collect();
            let mu: Vec<String> = w.translation.iter().map(|m| m.to_string()).collect();
            format!(
                "member of Pi_gamma for {torus}: mu = ({}), w = ({}), image = {}\n",
                mu.join(","),
                perm.join(","),
                w.act(point)
            )
        }
        (Some(w), true) => format!(
            "member = true\nmu = {:?}\nw = {:?}\n",
            w.translation,
            w.perm.iter().map(|p| p + 1).collect::<Vec<_>>()
        ),
        (None, false) => format!("not in Pi_gamma for {torus}\n"),
        (None, true) => String::from("member = false\n"),
    })
}

pub fn validate_type(path: &Path, point: Option<&Point>, structured: bool) -> CliResult<String> {
    let a = parse_formal_type(&read(path)?)?;
    let v = validate(&a, point);
    let roots: Vec<String> = v.excluded_roots.iter().map(|(i, j)| format!("e{}-e{}", i + 1, j + 1)).collect();
    Ok(if structured {
        let quoted: Vec<String> = roots.iter().map(|r| format!("\"{r}\"")).collect();
        format!(
            "valid = {}\ndiagnosis = \"{}\"\nexcluded_roots = [{}]\n",
            v.valid,
            v.diagnosis.unwrap_or_default(),
            quoted.join(", ")
        )
    } else if v.valid {
        let mut s = format!("valid: {a}\n");
        if !roots.is_empty() {
            let _ = writeln!(s, "point lies on the excluded hyperplanes {}", roots.join(", "));
        }
        s
    } else {
        format!("invalid: {}\n", v.diagnosis.unwrap_or_default())
    })
}
