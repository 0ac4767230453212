//! Univariate polynomials over `Q(zeta_m)`, constant term first.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyclotomic::Cyclotomic;
use super::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Cyclotomic>,
}

impl Poly {
    /// Trailing zero coefficients are stripped.
    pub fn new(mut coeffs: Vec<Cyclotomic>) -> Self {
        while coeffs.last().is_some_and(Cyclotomic::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Cyclotomic) -> Cyclotomic {
        self.coeffs.iter().rev().fold(Cyclotomic::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&Q::from_integer(BigInt::from(k))))
                .collect(),
        )
    }

    fn monic(&self) -> Poly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.inv().unwrap();
                Poly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.coeffs[dd].inv().unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let k = r.len() - 1;
            let f = &r[k] * &lead_inv;
            if !f.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    let v = &r[k - dd + i] - &(&f * c);
                    r[k - dd + i] = v;
                }
            }
            r.pop();
            while r.last().is_some_and(Cyclotomic::is_zero) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// True when the polynomial has no repeated root over the algebraic closure.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Roots in the coefficient field found among rational numbers.
    ///
    /// Only polynomials with rational coefficients are searched; roots are
    /// returned with multiplicity.
    pub fn rational_roots(&self) -> Option<Vec<Q>> {
        let mut qs: Vec<Q> = Vec::new();
        for c in &self.coeffs {
            qs.push(c.as_rational()?.clone());
        }
        let mut roots = Vec::new();
        // strip zero roots
        while qs.len() > 1 && qs[0].is_zero() {
            roots.push(Q::zero());
            qs.remove(0);
        }
        if qs.len() <= 1 {
            return Some(roots);
        }
        // clear denominators
        let l = qs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut ints: Vec<BigInt> = qs.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
        loop {
            if ints.len() <= 1 {
                break;
            }
            let a0 = ints[0].abs();
            let an = ints.last().unwrap().abs();
            let mut found = None;
            'search: for p in small_divisors(&a0) {
                for qd in small_divisors(&an) {
                    for sign in [1i64, -1] {
                        let cand = Q::new(&p * BigInt::from(sign), qd.clone());
                        if eval_int_poly(&ints, &cand).is_zero() {
                            found = Some(cand);
                            break 'search;
                        }
                    }
                }
            }
            match found {
                Some(r) => {
                    roots.push(r.clone());
                    ints = deflate(&ints, &r);
                }
                None => break,
            }
        }
        Some(roots)
    }
}

fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.to_u64().expect("coefficient too large for rational root search");
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(BigInt::from(d));
            if d != n / d {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    out
}

fn eval_int_poly(ints: &[BigInt], x: &Q) -> Q {
    ints.iter().rev().fold(Q::zero(), |acc, c| acc * x + Q::from_integer(c.clone()))
}

/// Divides by `(x - r)` and rescales to integer coefficients.
fn deflate(ints: &[BigInt], r: &Q) -> Vec<BigInt> {
    let n = ints.len() - 1;
    let mut quo = vec![Q::zero(); n];
    let mut carry = Q::zero();
    for k in (0..n).rev() {
        carry = carry * r + Q::from_integer(ints[k + 1].clone());
        quo[k] = carry.clone();
    }
    let l = quo.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    quo.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect()
}
