//! Truncated Puiseux series `sum c_k z^{k/e}` over `Q(zeta_m)`.
//!
//! Exponents are stored as integers `k` in units of `1/e`, where `e` is the
//! ramification. The precision is exclusive: every coefficient of
//! `z^{k/e}` with `k < prec` is known, nothing at or above it is.
//! Invariant: no stored term is zero and every stored key is `< prec`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::cyclotomic::Cyclotomic;
use super::rational::{lcm_i64, q, Q};
use crate::error::{Error, Result};

/// Exclusive truncation bound, in units of `1/e`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Precision {
    /// The series is a finite Laurent polynomial known exactly.
    Exact,
    Below(i64),
}

impl Precision {
    pub fn min(self, other: Precision) -> Precision {
        match (self, other) {
            (Precision::Exact, p) | (p, Precision::Exact) => p,
            (Precision::Below(a), Precision::Below(b)) => Precision::Below(a.min(b)),
        }
    }

    pub fn shift(self, k: i64) -> Precision {
        match self {
            Precision::Exact => Precision::Exact,
            Precision::Below(a) => Precision::Below(a + k),
        }
    }

    pub fn scale(self, factor: i64) -> Precision {
        match self {
            Precision::Exact => Precision::Exact,
            Precision::Below(a) => Precision::Below(a * factor),
        }
    }

    pub fn admits(self, k: i64) -> bool {
        match self {
            Precision::Exact => true,
            Precision::Below(a) => k < a,
        }
    }
}

impl PartialOrd for Precision {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Precision {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Precision::Exact, Precision::Exact) => Ordering::Equal,
            (Precision::Exact, _) => Ordering::Greater,
            (_, Precision::Exact) => Ordering::Less,
            (Precision::Below(a), Precision::Below(b)) => a.cmp(b),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PuiseuxSeries {
    ram: u32,
    prec: Precision,
    terms: BTreeMap<i64, Cyclotomic>,
}

impl PuiseuxSeries {
    pub fn zero(ram: u32, prec: Precision) -> Self {
        assert!(ram >= 1);
        PuiseuxSeries { ram, prec, terms: BTreeMap::new() }
    }

    pub fn exact_zero() -> Self {
        Self::zero(1, Precision::Exact)
    }

    pub fn constant(c: Cyclotomic) -> Self {
        Self::monomial(c, 0, 1)
    }

    /// `c z^{k/e}`, known exactly.
    pub fn monomial(c: Cyclotomic, k: i64, ram: u32) -> Self {
        let mut out = Self::zero(ram, Precision::Exact);
        if !c.is_zero() {
            out.terms.insert(k, c);
        }
        out
    }

    /// Builds a series from `(k, c)` pairs meaning `c z^{k/e}`; terms at or
    /// above the precision are dropped and repeated keys are summed.
    pub fn from_terms<I: IntoIterator<Item = (i64, Cyclotomic)>>(ram: u32, prec: Precision, terms: I) -> Self {
        let mut out = Self::zero(ram, prec);
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    pub(crate) fn add_term(&mut self, k: i64, c: &Cyclotomic) {
        if c.is_zero() || !self.prec.admits(k) {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(slot) => {
                let s = &*slot + c;
                if s.is_zero() {
                    self.terms.remove(&k);
                } else {
                    *slot = s;
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// The precision as a rational exponent; `None` when exact.
    pub fn prec_q(&self) -> Option<Q> {
        match self.prec {
            Precision::Exact => None,
            Precision::Below(k) => Some(q(k, self.ram as i64)),
        }
    }

    pub fn terms(&self) -> &BTreeMap<i64, Cyclotomic> {
        &self.terms
    }

    /// Iterates over `(exponent, coefficient)` with rational exponents.
    pub fn iter_q(&self) -> impl Iterator<Item = (Q, &Cyclotomic)> + '_ {
        let e = self.ram as i64;
        self.terms.iter().map(move |(k, c)| (q(*k, e), c))
    }

    /// Coefficient of `z^{k/e}`.
    pub fn coeff(&self, k: i64) -> Result<Cyclotomic> {
        if !self.prec.admits(k) {
            return Err(Error::InsufficientPrecision(alloc::format!(
                "coefficient of z^({}/{}) is beyond the truncation",
                k,
                self.ram
            )));
        }
        Ok(self.terms.get(&k).cloned().unwrap_or_else(Cyclotomic::zero))
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec == Precision::Exact
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero_to_precision(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent with a nonzero coefficient, in units of `1/e`.
    pub fn leading_key(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Valuation as a rational exponent. Fails when all known coefficients
    /// vanish, since the true valuation is then undetermined (or infinite).
    pub fn valuation(&self) -> Result<Q> {
        match self.leading_key() {
            Some(k) => Ok(q(k, self.ram as i64)),
            None => Err(Error::InsufficientPrecision(String::from(
                "valuation of a series that vanishes to its precision",
            ))),
        }
    }

    /// Lower bound for the valuation in units of `1/e`: the leading key, or
    /// the precision for a series vanishing to precision. `None` for exact zero.
    fn valuation_bound(&self) -> Option<i64> {
        match (self.leading_key(), self.prec) {
            (Some(k), _) => Some(k),
            (None, Precision::Below(p)) => Some(p),
            (None, Precision::Exact) => None,
        }
    }

    /// Re-embeds into ramification `e` (a multiple of the current one).
    pub fn with_ramification(&self, e: u32) -> Self {
        assert!(e.is_multiple_of(self.ram), "ramification {} does not divide {}", self.ram, e);
        if e == self.ram {
            return self.clone();
        }
        let f = (e / self.ram) as i64;
        PuiseuxSeries {
            ram: e,
            prec: self.prec.scale(f),
            terms: self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect(),
        }
    }

    /// Smallest ramification whose lattice contains every known exponent and
    /// the truncation exponent, so no unknown coefficient is declared zero.
    pub fn reduced_ramification(&self) -> Self {
        let mut g = self.ram as i64;
        for k in self.terms.keys() {
            g = num_integer::gcd(g, *k);
        }
        if let Precision::Below(p) = self.prec {
            g = num_integer::gcd(g, p);
        }
        if g <= 1 {
            return self.clone();
        }
        PuiseuxSeries {
            ram: (self.ram as i64 / g) as u32,
            prec: match self.prec {
                Precision::Exact => Precision::Exact,
                Precision::Below(p) => Precision::Below(p / g),
            },
            terms: self.terms.iter().map(|(k, c)| (k / g, c.clone())).collect(),
        }
    }

    pub(crate) fn common_ram(a: &Self, b: &Self) -> u32 {
        lcm_i64(a.ram as i64, b.ram as i64) as u32
    }

    /// Drops everything at or above `prec` (units of `1/e`).
    pub fn truncate(&self, prec: Precision) -> Self {
        let prec = self.prec.min(prec);
        let terms = match prec {
            Precision::Exact => self.terms.clone(),
            Precision::Below(p) => self.terms.range(..p).map(|(k, c)| (*k, c.clone())).collect(),
        };
        PuiseuxSeries { ram: self.ram, prec, terms }
    }

    /// Truncates below the rational exponent `bound`. Exponents live in
    /// `(1/e)Z`, so this is truncation below `ceil(e * bound)` units.
    pub fn truncate_q(&self, bound: &Q) -> Self {
        let k = (bound * Q::from_integer((self.ram as i64).into())).ceil().to_integer();
        let k: i64 = num_traits::ToPrimitive::to_i64(&k).expect("exponent too large");
        self.truncate(Precision::Below(k))
    }

    pub fn scale(&self, c: &Cyclotomic) -> Self {
        if c.is_zero() {
            return Self::zero(self.ram, Precision::Exact);
        }
        PuiseuxSeries {
            ram: self.ram,
            prec: self.prec,
            terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        self.scale(&Cyclotomic::from_q(c.clone()))
    }

    /// Multiplies by `z^{k/e}`.
    pub fn shift(&self, k: i64) -> Self {
        PuiseuxSeries {
            ram: self.ram,
            prec: self.prec.shift(k),
            terms: self.terms.iter().map(|(j, c)| (j + k, c.clone())).collect(),
        }
    }

    /// Multiplies by `z^s` for rational `s`, re-embedding if needed.
    pub fn shift_q(&self, s: &Q) -> Self {
        let d: u32 = num_traits::ToPrimitive::to_u32(s.denom()).expect("denominator too large");
        let e = lcm_i64(self.ram as i64, d as i64) as u32;
        let lifted = self.with_ramification(e);
        let k = num_traits::ToPrimitive::to_i64(&(s * Q::from_integer((e as i64).into())).to_integer()).unwrap();
        lifted.shift(k)
    }

    /// `tau = z d/dz`, which sends `z^{k/e}` to `(k/e) z^{k/e}`.
    pub fn tau(&self) -> Self {
        let e = self.ram as i64;
        let mut out = Self::zero(self.ram, self.prec);
        for (k, c) in &self.terms {
            if *k != 0 {
                out.terms.insert(*k, c.scale(&q(*k, e)));
            }
        }
        out
    }

    /// Galois action `z^{1/e} -> zeta_e z^{1/e}`.
    pub fn galois(&self) -> Self {
        let e = self.ram;
        PuiseuxSeries {
            ram: e,
            prec: self.prec,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, c * &Cyclotomic::zeta_pow(e, *k)))
                .collect(),
        }
    }

    /// Multiplicative inverse via the geometric series of the normalized tail.
    ///
    /// An exact non-monomial series has no finite inverse; truncate it first.
    pub fn invert(&self) -> Result<Self> {
        let v = self.leading_key().ok_or_else(|| {
            Error::NotInvertible(String::from("series vanishes to its precision"))
        })?;
        let lead_inv = self.terms[&v].inv().unwrap();
        if self.terms.len() == 1 {
            let prec = match self.prec {
                Precision::Exact => Precision::Exact,
                Precision::Below(n) => Precision::Below(n - 2 * v),
            };
            let mut out = Self::zero(self.ram, prec);
            out.add_term(-v, &lead_inv);
            return Ok(out);
        }
        let rel = match self.prec {
            Precision::Exact => {
                return Err(Error::InsufficientPrecision(String::from(
                    "inverse of an exact non-monomial series needs a truncation",
                )))
            }
            Precision::Below(n) => n - v,
        };
        // self = c z^v (1 + h), h of positive valuation known below rel
        let mut h = Self::zero(self.ram, Precision::Below(rel));
        for (k, c) in self.terms.range(v + 1..) {
            h.add_term(k - v, &(c * &lead_inv));
        }
        let mut acc = Self::from_terms(self.ram, Precision::Below(rel), [(0, Cyclotomic::one())]);
        let mut power = acc.clone();
        let neg_h = -&h;
        loop {
            power = (&power * &neg_h).truncate(Precision::Below(rel));
            if power.terms.is_empty() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc.truncate(Precision::Below(rel)).shift(-v).scale(&lead_inv))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(Cyclotomic::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        if self.ram != other.ram {
            let e = Self::common_ram(self, other);
            return self.with_ramification(e).add_impl(&other.with_ramification(e), negate);
        }
        let prec = self.prec.min(other.prec);
        let mut out = self.truncate(prec);
        for (k, c) in &other.terms {
            if negate {
                out.add_term(*k, &-c);
            } else {
                out.add_term(*k, c);
            }
        }
        out
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.ram != other.ram {
            let e = Self::common_ram(self, other);
            return self.with_ramification(e).mul_impl(&other.with_ramification(e));
        }
        let (va, vb) = match (self.valuation_bound(), other.valuation_bound()) {
            (None, _) | (_, None) => return Self::zero(self.ram, Precision::Exact),
            (Some(a), Some(b)) => (a, b),
        };
        let prec = self.prec.shift(vb).min(other.prec.shift(va));
        let mut out = Self::zero(self.ram, prec);
        for (i, a) in &self.terms {
            if !prec.admits(i + vb) {
                break;
            }
            for (j, b) in &other.terms {
                if !prec.admits(i + j) {
                    break;
                }
                out.add_term(i + j, &(a * b));
            }
        }
        out
    }
}

impl PartialEq for PuiseuxSeries {
    /// Equal ramification-independent values and precision.
    fn eq(&self, other: &Self) -> bool {
        if self.ram != other.ram {
            let e = Self::common_ram(self, other);
            return self.with_ramification(e) == other.with_ramification(e);
        }
        self.prec == other.prec && self.terms == other.terms
    }
}

impl Eq for PuiseuxSeries {}

impl Add for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn add(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.add_impl(rhs, false)
    }
}

impl Sub for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn sub(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.add_impl(rhs, true)
    }
}

impl Mul for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn mul(self, rhs: &PuiseuxSeries) -> PuiseuxSeries {
        self.mul_impl(rhs)
    }
}

impl Neg for &PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn neg(self) -> PuiseuxSeries {
        PuiseuxSeries {
            ram: self.ram,
            prec: self.prec,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl fmt::Display for PuiseuxSeries {
    /// Terms as `c*z^(p/q)` joined by ` + ` (or ` - ` before a negative
    /// rational), followed by `+ O(z^(N))` when truncated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.iter_q() {
            let negative = c.as_rational().is_some_and(|v| v < &Q::zero());
            let flipped;
            let c = if !first && negative {
                f.write_str(" - ")?;
                flipped = -c;
                &flipped
            } else {
                if !first {
                    f.write_str(" + ")?;
                }
                c
            };
            first = false;
            let coeff = if c.as_rational().is_some() {
                alloc::format!("{c}")
            } else {
                alloc::format!("({c})")
            };
            if e.is_zero() {
                write!(f, "{coeff}")?;
            } else if c.is_one() {
                write!(f, "z^({e})")?;
            } else {
                write!(f, "{coeff}*z^({e})")?;
            }
        }
        if let Some(p) = self.prec_q() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "O(z^({p}))")?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl One for PuiseuxSeries {
    fn one() -> Self {
        Self::constant(Cyclotomic::one())
    }
}

impl Mul for PuiseuxSeries {
    type Output = PuiseuxSeries;
    fn mul(self, rhs: PuiseuxSeries) -> PuiseuxSeries {
        self.mul_impl(&rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::qi;
    use proptest::prelude::*;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_i64(n)
    }

    #[test]
    fn product_precision_follows_valuations() {
        // (z^-1 + O(z^2)) * (1 + z + O(z^3)) is known below min(2 + 0, 3 - 1)
        let a = PuiseuxSeries::from_terms(1, Precision::Below(2), [(-1, c(1))]);
        let b = PuiseuxSeries::from_terms(1, Precision::Below(3), [(0, c(1)), (1, c(1))]);
        let p = &a * &b;
        assert_eq!(p.precision(), Precision::Below(2));
        assert_eq!(p.coeff(-1).unwrap(), c(1));
        assert_eq!(p.coeff(0).unwrap(), c(1));
        assert!(p.coeff(2).is_err());
    }

    #[test]
    fn tau_scales_by_exponent() {
        let s = PuiseuxSeries::from_terms(2, Precision::Below(6), [(1, c(4)), (0, c(7))]);
        let t = s.tau();
        assert_eq!(t.coeff(1).unwrap(), c(2));
        assert_eq!(t.coeff(0).unwrap(), c(0));
    }

    #[test]
    fn inverse_of_one_minus_z() {
        let s = PuiseuxSeries::from_terms(1, Precision::Below(5), [(0, c(1)), (1, c(-1))]);
        let inv = s.invert().unwrap();
        for k in 0..5 {
            assert_eq!(inv.coeff(k).unwrap(), c(1));
        }
        assert!(inv.coeff(5).is_err());
        let exact = PuiseuxSeries::from_terms(1, Precision::Exact, [(0, c(1)), (1, c(-1))]);
        assert!(matches!(exact.invert(), Err(Error::InsufficientPrecision(_))));
    }

    #[test]
    fn galois_acts_on_fractional_powers() {
        let u = PuiseuxSeries::monomial(c(1), 1, 2);
        let g = u.galois();
        assert_eq!(g.coeff(1).unwrap(), c(-1));
        assert_eq!(u.valuation().unwrap(), Q::new(1.into(), 2.into()));
        assert_eq!(u.pow(2), PuiseuxSeries::monomial(c(1), 1, 1));
        assert_eq!(qi(1), Q::one());
    }

    fn arb_series() -> impl Strategy<Value = PuiseuxSeries> {
        (
            prop::sample::select(vec![1u32, 2, 3]),
            prop::collection::vec((-4i64..8, -3i64..4), 1..5),
        )
            .prop_map(|(e, ts)| {
                PuiseuxSeries::from_terms(e, Precision::Below(10 * e as i64), ts.into_iter().map(|(k, v)| (k, c(v))))
            })
    }

    proptest! {
        #[test]
        fn inverse_round_trip(s in arb_series()) {
            prop_assume!(!s.is_zero_to_precision());
            let inv = s.invert().unwrap();
            let one = &s * &inv;
            let v = s.leading_key().unwrap();
            prop_assert_eq!(one.terms().len(), 1);
            prop_assert_eq!(one.coeff(0).unwrap(), c(1));
            prop_assert_eq!(one.precision(), s.precision().shift(-v));
        }

        #[test]
        fn tau_is_a_derivation(a in arb_series(), b in arb_series()) {
            let lhs = (&a * &b).tau();
            let rhs = &(&a.tau() * &b) + &(&a * &b.tau());
            let p = lhs.precision().min(rhs.precision());
            prop_assert_eq!(lhs.truncate(p), rhs.truncate(p));
        }
    }
}
