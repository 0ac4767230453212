//! Points of the standard apartment and the Moy–Prasad grading they induce.
//!
//! A point is a rational vector `x` with the diagonal torus identified with
//! its Lie algebra. The matrix unit `E_ij z^m` is homogeneous of grade
//! `m + x_i - x_j`; equivalently the graded piece of grade `r` is the
//! `r`-eigenspace of `tau + ad(x)`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalars::linalg::Dense;
use crate::scalars::{frac, is_integer, q, qi, Cyclotomic, LoopMatrix, PuiseuxSeries, Q};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<Q>,
}

impl Point {
    pub fn new(coords: Vec<Q>) -> Self {
        Point { coords }
    }

    pub fn origin(n: usize) -> Self {
        Point { coords: (0..n).map(|_| Q::zero()).collect() }
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    /// `x_i - x_j`, the value of the root `e_i - e_j`.
    pub fn root_value(&self, i: usize, j: usize) -> Q {
        &self.coords[i] - &self.coords[j]
    }

    /// Grade of `E_ij z^m`.
    pub fn grade(&self, i: usize, j: usize, m: &Q) -> Q {
        m + self.root_value(i, j)
    }

    /// `max_i x_i - min_i x_i`.
    pub fn spread(&self) -> Q {
        let max = self.coords.iter().max().cloned().unwrap_or_else(Q::zero);
        let min = self.coords.iter().min().cloned().unwrap_or_else(Q::zero);
        max - min
    }

    /// Translate by a central element so that the first coordinate is zero.
    pub fn normalized(&self) -> Point {
        let c = self.coords.first().cloned().unwrap_or_else(Q::zero);
        Point { coords: self.coords.iter().map(|x| x - &c).collect() }
    }

    pub fn add(&self, v: &[Q]) -> Point {
        Point { coords: self.coords.iter().zip(v).map(|(a, b)| a + b).collect() }
    }

    /// The point as a constant diagonal matrix.
    pub fn matrix(&self) -> LoopMatrix {
        LoopMatrix::diagonal_q(&self.coords)
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> i64 {
        self.coords.iter().fold(1i64, |acc, c| {
            let d: i64 = num_traits::ToPrimitive::to_i64(c.denom()).unwrap();
            crate::scalars::lcm_i64(acc, d)
        })
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// Homogeneous components of a matrix at a point.
///
/// Only grades strictly below `known_below` are recorded; those components
/// are complete and exact. `known_below` is `None` for an exact matrix.
#[derive(Clone, Debug)]
pub struct Graded {
    pub n: usize,
    pub known_below: Option<Q>,
    pub components: BTreeMap<Q, LoopMatrix>,
}

impl Graded {
    pub fn component(&self, r: &Q) -> Result<LoopMatrix> {
        if let Some(k) = &self.known_below {
            if r >= k {
                return Err(Error::precision("graded component", r, k));
            }
        }
        Ok(self.components.get(r).cloned().unwrap_or_else(|| self.zero_component()))
    }

    fn zero_component(&self) -> LoopMatrix {
        LoopMatrix::zeros(self.n, 1, crate::scalars::Precision::Exact)
    }

    /// Smallest grade present, if any.
    pub fn depth(&self) -> Option<Q> {
        self.components.keys().next().cloned()
    }
}

/// Every grade below this bound is completely known in `m` at `x`.
pub fn known_grade(m: &LoopMatrix, x: &Point) -> Option<Q> {
    m.prec_q().map(|p| p - x.spread())
}

/// Decomposes `m` into homogeneous components of the grading at `x`.
pub fn mp_decompose(m: &LoopMatrix, x: &Point) -> Graded {
    let n = m.n();
    assert_eq!(n, x.n());
    let known = known_grade(m, x);
    let ram = m.ram();
    let mut parts: BTreeMap<Q, Vec<(usize, usize, i64, Cyclotomic)>> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            let rv = x.root_value(i, j);
            for (k, c) in m.get(i, j).terms() {
                let g = q(*k, ram as i64) + &rv;
                if known.as_ref().is_some_and(|kb| &g >= kb) {
                    continue;
                }
                parts.entry(g).or_default().push((i, j, *k, c.clone()));
            }
        }
    }
    let components = parts
        .into_iter()
        .map(|(g, terms)| {
            let mut entries: Vec<PuiseuxSeries> = (0..n * n)
                .map(|_| PuiseuxSeries::zero(ram, crate::scalars::Precision::Exact))
                .collect();
            for (i, j, k, c) in terms {
                entries[i * n + j] = PuiseuxSeries::monomial(c, k, ram);
            }
            (g, LoopMatrix::from_entries(n, entries))
        })
        .collect();
    Graded { n, known_below: known, components }
}

/// Smallest grade of a nonzero homogeneous component of `m` at `x`.
pub fn mp_depth(m: &LoopMatrix, x: &Point) -> Result<Q> {
    let g = mp_decompose(m, x);
    g.depth().ok_or_else(|| match g.known_below {
        Some(k) => Error::InsufficientPrecision(alloc::format!("matrix vanishes below grade {k}")),
        None => Error::Invalid(String::from("depth of the zero matrix")),
    })
}

/// Homogeneous component of grade `r`.
pub fn component(m: &LoopMatrix, x: &Point, r: &Q) -> Result<LoopMatrix> {
    mp_decompose(m, x).component(r)
}

/// True when `m` lies in the filtration piece of grades `>= r` at `x`.
pub fn in_filtration(m: &LoopMatrix, x: &Point, r: &Q) -> Result<bool> {
    let g = mp_decompose(m, x);
    if let Some(d) = g.depth() {
        return Ok(&d >= r);
    }
    match g.known_below {
        Some(k) if &k < r => Err(Error::precision("filtration membership", r, &k)),
        _ => Ok(true),
    }
}

/// Fractional parts of all grades occurring in the loop algebra over `F` at `x`.
pub fn critical_numbers(x: &Point) -> BTreeSet<Q> {
    let n = x.n();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            out.insert(frac(&x.root_value(i, j)));
        }
    }
    out
}

/// All grades `g` with `lo < g < hi` (or `lo <= g` when `inclusive_lo`) that occur at `x`.
pub fn critical_grades(x: &Point, lo: &Q, hi: &Q, inclusive_lo: bool) -> Vec<Q> {
    let crit = critical_numbers(x);
    let mut out = Vec::new();
    let mut base = lo.floor();
    while &base < hi {
        for c in &crit {
            let g = &base + c;
            let above = if inclusive_lo { &g >= lo } else { &g > lo };
            if above && &g < hi {
                out.push(g);
            }
        }
        base += qi(1);
    }
    out
}

/// Roots `e_i - e_j` whose value at `x` is an integer: the roots of the
/// reductive quotient at `x`.
pub fn h_x_roots(x: &Point) -> Vec<(usize, usize)> {
    let n = x.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && is_integer(&x.root_value(i, j)) {
                out.push((i, j));
            }
        }
    }
    out
}

/// True when the constant matrix `h` lies in the reductive quotient at `x`.
pub fn in_h_x(h: &Dense, x: &Point) -> bool {
    let n = x.n();
    (0..n).all(|i| (0..n).all(|j| h.get(i, j).is_zero() || is_integer(&x.root_value(i, j))))
}

/// Lift of a constant element of the reductive quotient at `x`: the entry
/// `h_ij` becomes `h_ij z^{-(x_i - x_j)}`.
pub fn theta_lift(h: &Dense, x: &Point) -> Result<LoopMatrix> {
    if !in_h_x(h, x) {
        return Err(Error::Invalid(String::from("constant matrix is not in the reductive quotient at x")));
    }
    let n = x.n();
    Ok(LoopMatrix::from_fn(n, |i, j| {
        PuiseuxSeries::constant(h.get(i, j).clone()).shift_q(&-x.root_value(i, j))
    }))
}

/// Coefficient matrix of a homogeneous matrix: each entry has at most one term.
pub fn homogeneous_coefficients(z: &LoopMatrix) -> Dense {
    let n = z.n();
    let mut out = Dense::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let terms = z.get(i, j).terms();
            assert!(terms.len() <= 1, "matrix is not homogeneous");
            if let Some(c) = terms.values().next() {
                out.set(i, j, c.clone());
            }
        }
    }
    out
}

/// Inverse of [`homogeneous_coefficients`]: entry `c_ij` becomes
/// `c_ij z^{g - (x_i - x_j)}`, homogeneous of grade `g` at `x`.
pub fn homogeneous_from_coefficients(c: &Dense, x: &Point, g: &Q) -> LoopMatrix {
    LoopMatrix::from_fn(x.n(), |i, j| {
        let v = c.get(i, j);
        if v.is_zero() {
            PuiseuxSeries::exact_zero()
        } else {
            PuiseuxSeries::constant(v.clone()).shift_q(&(g - x.root_value(i, j)))
        }
    })
}

/// Index pairs `(i, j)` where `E_ij` has an `F`-rational multiple of grade `g`.
pub fn grade_pattern(x: &Point, g: &Q) -> Vec<(usize, usize)> {
    let n = x.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if is_integer(&(g - x.root_value(i, j))) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Indices grouped by the class of `x_i` modulo `Z`, classes in increasing order.
pub fn residue_classes(x: &Point) -> Vec<(Q, Vec<usize>)> {
    let mut classes: BTreeMap<Q, Vec<usize>> = BTreeMap::new();
    for (i, c) in x.coords().iter().enumerate() {
        classes.entry(frac(c)).or_default().push(i);
    }
    classes.into_iter().collect()
}

/// Residue trace pairing `Res tr(AB) dz/z`: the `z^0` coefficient of `tr(AB)`.
pub fn trace_pairing(a: &LoopMatrix, b: &LoopMatrix) -> Result<Cyclotomic> {
    let t = (a * b).trace();
    let t = t.with_ramification(a.ram().max(1)).reduced_ramification();
    t.coeff(0)
}

/// `exp(Z)` for `Z` homogeneous of positive grade `g` at `x`, or for a
/// constant nilpotent `Z` (pass `g = 0`), truncated below the `z`-exponent `prec`.
///
/// `Z^k` has grade `k g`, so its entries have `z`-exponent at least
/// `k g - spread(x)`; the sum stops once that bound reaches `prec`.
pub fn exp_homogeneous(z: &LoopMatrix, g: &Q, x: &Point, prec: &Q) -> LoopMatrix {
    let n = z.n();
    let mut acc = LoopMatrix::identity(n);
    let mut term = LoopMatrix::identity(n);
    let spread = x.spread();
    let mut k: i64 = 1;
    loop {
        if g > &Q::zero() && qi(k) * g - &spread >= *prec {
            break;
        }
        term = (&term * z).scale_q(&q(1, k));
        if term.is_zero_to_precision() {
            break;
        }
        acc = &acc + &term;
        k += 1;
        assert!(k < 10_000, "exponential of a non-nilpotent grade-zero element");
    }
    if g > &Q::zero() {
        acc.truncate_q(prec)
    } else {
        acc
    }
}

/// Element `x -> w(x) + mu` of the extended affine Weyl group `Z^n x| S_n`.
///
/// `perm[j] = w(j)`, so `w(x)_{w(j)} = x_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineWeyl {
    pub translation: Vec<i64>,
    pub perm: Vec<usize>,
}

impl AffineWeyl {
    pub fn identity(n: usize) -> Self {
        AffineWeyl { translation: alloc::vec![0; n], perm: (0..n).collect() }
    }

    pub fn new(translation: Vec<i64>, perm: Vec<usize>) -> Self {
        assert_eq!(translation.len(), perm.len());
        AffineWeyl { translation, perm }
    }

    pub fn act(&self, x: &Point) -> Point {
        let n = x.n();
        let mut out: Vec<Q> = (0..n).map(|_| Q::zero()).collect();
        for j in 0..n {
            out[self.perm[j]] = x.coords()[j].clone();
        }
        for (i, m) in self.translation.iter().enumerate() {
            out[i] += qi(*m);
        }
        Point::new(out)
    }

    /// `(mu1, w1)(mu2, w2) = (mu1 + w1 mu2, w1 w2)`.
    pub fn compose(&self, other: &AffineWeyl) -> AffineWeyl {
        let n = self.perm.len();
        let mut translation = self.translation.clone();
        for j in 0..n {
            translation[self.perm[j]] += other.translation[j];
        }
        let perm = (0..n).map(|j| self.perm[other.perm[j]]).collect();
        AffineWeyl { translation, perm }
    }

    pub fn inverse(&self) -> AffineWeyl {
        let n = self.perm.len();
        let mut perm = alloc::vec![0; n];
        for j in 0..n {
            perm[self.perm[j]] = j;
        }
        // w^{-1}(-mu)
        let mut translation = alloc::vec![0; n];
        for j in 0..n {
            translation[perm[j]] = -self.translation[j];
        }
        AffineWeyl { translation, perm }
    }

    /// Monomial representative `z^{-mu} P_w`; conjugation by it carries the
    /// grading at `x` to the grading at `act(x)`.
    pub fn representative(&self) -> LoopMatrix {
        let n = self.perm.len();
        LoopMatrix::from_fn(n, |i, j| {
            if self.perm[j] == i {
                PuiseuxSeries::monomial(Cyclotomic::one(), -self.translation[i], 1)
            } else {
                PuiseuxSeries::exact_zero()
            }
        })
    }
}
