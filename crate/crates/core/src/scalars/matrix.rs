//! Square matrices of truncated Puiseux series.
//!
//! All entries share one ramification and one exclusive precision; every
//! constructor and operation re-establishes that by lifting to the lcm of the
//! ramifications and truncating to the smallest entry precision.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use super::cyclotomic::Cyclotomic;
use super::puiseux::{Precision, PuiseuxSeries};
use super::rational::{lcm_i64, Q};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct LoopMatrix {
    n: usize,
    ram: u32,
    prec: Precision,
    entries: Vec<PuiseuxSeries>,
}

impl LoopMatrix {
    pub fn zeros(n: usize, ram: u32, prec: Precision) -> Self {
        LoopMatrix {
            n,
            ram,
            prec,
            entries: (0..n * n).map(|_| PuiseuxSeries::zero(ram, prec)).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, 1, Precision::Exact);
        for i in 0..n {
            m.entries[i * n + i] = PuiseuxSeries::constant(Cyclotomic::one());
        }
        m
    }

    /// Builds a matrix from row-major entries, harmonizing ramification and precision.
    pub fn from_entries(n: usize, entries: Vec<PuiseuxSeries>) -> Self {
        assert_eq!(entries.len(), n * n);
        let ram = entries.iter().fold(1i64, |acc, s| lcm_i64(acc, s.ram() as i64)) as u32;
        let prec = entries
            .iter()
            .map(|s| s.precision().scale((ram / s.ram()) as i64))
            .fold(Precision::Exact, Precision::min);
        let entries: Vec<PuiseuxSeries> = entries
            .into_iter()
            .map(|s| s.with_ramification(ram).truncate(prec))
            .collect();
        // keep the smallest ramification that represents every entry and the precision
        let mut g = ram as i64;
        if let Precision::Below(p) = prec {
            g = num_integer::gcd(g, p);
        }
        for s in &entries {
            for k in s.terms().keys() {
                if g == 1 {
                    break;
                }
                g = num_integer::gcd(g, *k);
            }
        }
        if g > 1 {
            let coarse = (ram as i64 / g) as u32;
            let prec = match prec {
                Precision::Below(p) => Precision::Below(p / g),
                Precision::Exact => Precision::Exact,
            };
            let entries: Vec<PuiseuxSeries> = entries
                .iter()
                .map(|s| PuiseuxSeries::from_terms(coarse, prec, s.terms().iter().map(|(k, c)| (k / g, c.clone()))))
                .collect();
            return LoopMatrix { n, ram: coarse, prec, entries };
        }
        LoopMatrix { n, ram, prec, entries }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> PuiseuxSeries>(n: usize, mut f: F) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self::from_entries(n, entries)
    }

    /// Constant matrix from row-major scalars.
    pub fn constant(n: usize, values: &[Cyclotomic]) -> Self {
        assert_eq!(values.len(), n * n);
        Self::from_fn(n, |i, j| PuiseuxSeries::constant(values[i * n + j].clone()))
    }

    pub fn diagonal(values: &[Cyclotomic]) -> Self {
        let n = values.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                PuiseuxSeries::constant(values[i].clone())
            } else {
                PuiseuxSeries::exact_zero()
            }
        })
    }

    pub fn diagonal_q(values: &[Q]) -> Self {
        let v: Vec<Cyclotomic> = values.iter().cloned().map(Cyclotomic::from_q).collect();
        Self::diagonal(&v)
    }

    /// `c z^{k/e} E_{ij}`, exact.
    pub fn elementary(n: usize, i: usize, j: usize, c: Cyclotomic, k: i64, ram: u32) -> Self {
        let mut m = Self::zeros(n, ram, Precision::Exact);
        m.entries[i * n + j] = PuiseuxSeries::monomial(c, k, ram);
        m
    }

    /// Diagonal `z^{mu}` for rational exponents.
    pub fn z_power(mu: &[Q]) -> Self {
        let n = mu.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                PuiseuxSeries::constant(Cyclotomic::one()).shift_q(&mu[i])
            } else {
                PuiseuxSeries::exact_zero()
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// Exclusive precision as a rational exponent; `None` when exact.
    pub fn prec_q(&self) -> Option<Q> {
        self.entries[0].prec_q()
    }

    pub fn get(&self, i: usize, j: usize) -> &PuiseuxSeries {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[PuiseuxSeries] {
        &self.entries
    }

    pub fn set(&mut self, i: usize, j: usize, s: PuiseuxSeries) {
        let n = self.n;
        let mut entries = core::mem::take(&mut self.entries);
        entries[i * n + j] = s;
        *self = Self::from_entries(n, entries);
    }

    pub fn map<F: FnMut(&PuiseuxSeries) -> PuiseuxSeries>(&self, f: F) -> Self {
        Self::from_entries(self.n, self.entries.iter().map(f).collect())
    }

    pub fn with_ramification(&self, e: u32) -> Self {
        self.map(|s| s.with_ramification(e))
    }

    pub fn truncate(&self, prec: Precision) -> Self {
        self.map(|s| s.truncate(prec))
    }

    /// Truncates all entries below the rational exponent `bound`.
    pub fn truncate_q(&self, bound: &Q) -> Self {
        self.map(|s| s.truncate_q(bound))
    }

    /// Substitutes `z = u^e` with `e` the ramification: the result is an
    /// unramified matrix in `u` with the same exponent keys.
    pub fn unramify(&self) -> Self {
        self.map(|s| PuiseuxSeries::from_terms(1, s.precision(), s.terms().iter().map(|(k, c)| (*k, c.clone()))))
    }

    /// Inverse of [`LoopMatrix::unramify`] for an unramified matrix: keys are
    /// read in units of `1/e`.
    pub fn reramify(&self, e: u32) -> Self {
        assert_eq!(self.ram, 1);
        self.map(|s| PuiseuxSeries::from_terms(e, s.precision(), s.terms().iter().map(|(k, c)| (*k, c.clone()))))
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.entries.iter().all(PuiseuxSeries::is_zero_to_precision)
    }

    /// True when every entry is a constant (exponent zero only).
    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(|s| s.terms().keys().all(|k| *k == 0))
    }

    /// Constant-term matrix, row-major.
    pub fn constant_part(&self) -> Vec<Cyclotomic> {
        self.entries
            .iter()
            .map(|s| s.terms().get(&0).cloned().unwrap_or_else(Cyclotomic::zero))
            .collect()
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        let out = self.map(|s| s.scale(c));
        if c.is_zero() {
            return Self::zeros(self.n, self.ram, self.prec);
        }
        out
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        self.scale(&Cyclotomic::from_q(c.clone()))
    }

    pub fn tau(&self) -> Self {
        self.map(PuiseuxSeries::tau)
    }

    pub fn galois(&self) -> Self {
        self.map(PuiseuxSeries::galois)
    }

    /// Multiplies every entry by `z^s`.
    pub fn shift_q(&self, s: &Q) -> Self {
        self.map(|x| x.shift_q(s))
    }

    /// `z^{a} M z^{-a}`: entry `(i, j)` is multiplied by `z^{a_i - a_j}`.
    pub fn shear(&self, a: &[Q]) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(i, j).shift_q(&(&a[i] - &a[j])));
            }
        }
        Self::from_entries(n, entries)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> PuiseuxSeries {
        let mut acc = PuiseuxSeries::exact_zero();
        for i in 0..self.n {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Gauss–Jordan inverse, pivoting on the entry of least valuation.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a: Vec<Vec<PuiseuxSeries>> =
            (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut b: Vec<Vec<PuiseuxSeries>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            PuiseuxSeries::constant(Cyclotomic::one())
                        } else {
                            PuiseuxSeries::exact_zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .filter_map(|r| a[r][col].leading_key().map(|k| (k, r)))
                .min()
                .map(|(_, r)| r)
                .ok_or_else(|| {
                    if a[col..].iter().all(|row| row[col].is_exact_zero()) {
                        Error::NotInvertible(String::from("singular matrix"))
                    } else {
                        Error::InsufficientPrecision(String::from("pivot vanishes to the known precision"))
                    }
                })?;
            a.swap(col, pivot);
            b.swap(col, pivot);
            let inv = a[col][col].invert()?;
            for j in 0..n {
                a[col][j] = &a[col][j] * &inv;
                b[col][j] = &b[col][j] * &inv;
            }
            for r in 0..n {
                if r == col || a[r][col].is_exact_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for j in 0..n {
                    let da = &f * &a[col][j];
                    a[r][j] = &a[r][j] - &da;
                    let db = &f * &b[col][j];
                    b[r][j] = &b[r][j] - &db;
                }
            }
        }
        Ok(Self::from_entries(n, b.into_iter().flatten().collect()))
    }

    /// Determinant by fraction-free expansion over minors; intended for `n <= 8`.
    pub fn determinant(&self) -> PuiseuxSeries {
        let cols: Vec<usize> = (0..self.n).collect();
        self.det_minor(0, &cols)
    }

    fn det_minor(&self, row: usize, cols: &[usize]) -> PuiseuxSeries {
        if cols.is_empty() {
            return PuiseuxSeries::constant(Cyclotomic::one());
        }
        let mut acc = PuiseuxSeries::exact_zero();
        for (idx, &c) in cols.iter().enumerate() {
            let entry = self.get(row, c);
            if entry.is_exact_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = entry * &self.det_minor(row + 1, &rest);
            acc = if idx % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }
}

impl PartialEq for LoopMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.entries == other.entries
    }
}

impl Eq for LoopMatrix {}

impl Add for &LoopMatrix {
    type Output = LoopMatrix;
    fn add(self, rhs: &LoopMatrix) -> LoopMatrix {
        assert_eq!(self.n, rhs.n);
        LoopMatrix::from_entries(self.n, self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &LoopMatrix {
    type Output = LoopMatrix;
    fn sub(self, rhs: &LoopMatrix) -> LoopMatrix {
        assert_eq!(self.n, rhs.n);
        LoopMatrix::from_entries(self.n, self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &LoopMatrix {
    type Output = LoopMatrix;
    fn neg(self) -> LoopMatrix {
        self.map(|s| -s)
    }
}

impl Mul for &LoopMatrix {
    type Output = LoopMatrix;
    fn mul(self, rhs: &LoopMatrix) -> LoopMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc: Option<PuiseuxSeries> = None;
                for k in 0..n {
                    let a = self.get(i, k);
                    let b = rhs.get(k, j);
                    let t = a * b;
                    acc = Some(match acc {
                        None => t,
                        Some(s) => &s + &t,
                    });
                }
                entries.push(acc.unwrap());
            }
        }
        LoopMatrix::from_entries(n, entries)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for LoopMatrix {
            type Output = LoopMatrix;
            fn $method(self, rhs: LoopMatrix) -> LoopMatrix {
                (&self).$method(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl fmt::Display for LoopMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            f.write_str("[")?;
            for j in 0..self.n {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]\n")?;
        }
        Ok(())
    }
}
