//! Elements of `Q(zeta_m)` in the power basis of a primitive `m`-th root.
//!
//! Roots of unity of different orders are chosen coherently:
//! `zeta_{ab}^a = zeta_b`. Binary operations lift both operands to the
//! field of order `lcm(m1, m2)`. A rational value is always stored with
//! order 1, so the common rational case never touches polynomial reduction.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{lcm_i64, Q};

#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<Q>,
}

/// Coefficients of the `m`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    assert!(m >= 1);
    let m = m as usize;
    // Phi_m = prod_{d | m} (x^d - 1)^{mu(m/d)}
    let mut num: Vec<i64> = vec![1];
    let mut den: Vec<i64> = vec![1];
    for d in 1..=m {
        if !m.is_multiple_of(d) {
            continue;
        }
        let mut factor = vec![0i64; d + 1];
        factor[0] = -1;
        factor[d] = 1;
        match moebius(m / d) {
            1 => num = mul_int_poly(&num, &factor),
            -1 => den = mul_int_poly(&den, &factor),
            _ => {}
        }
    }
    div_int_poly_exact(&num, &den)
}

fn moebius(mut n: usize) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn mul_int_poly(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn div_int_poly_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // den is monic up to sign
    let lead = *den.last().unwrap();
    let mut rem = num.to_vec();
    let dq = num.len() - den.len();
    let mut quo = vec![0i64; dq + 1];
    for k in (0..=dq).rev() {
        let c = rem[k + den.len() - 1] / lead;
        quo[k] = c;
        for (i, d) in den.iter().enumerate() {
            rem[k + i] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quo
}

/// Reduces a polynomial in `zeta_m` of arbitrary degree to the power basis.
fn reduce_mod_phi(mut poly: Vec<Q>, m: u32) -> Vec<Q> {
    let phi = cyclotomic_polynomial(m);
    let deg = phi.len() - 1;
    if poly.len() > deg {
        for k in (deg..poly.len()).rev() {
            if poly[k].is_zero() {
                continue;
            }
            let c = core::mem::replace(&mut poly[k], Q::zero());
            for (i, p) in phi.iter().enumerate().take(deg) {
                if *p != 0 {
                    poly[k - deg + i] -= &c * Q::from_integer((*p).into());
                }
            }
        }
    }
    poly.resize(deg, Q::zero());
    poly
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Self::from_q(Q::zero())
    }

    pub fn one() -> Self {
        Self::from_q(Q::one())
    }

    pub fn from_q(c: Q) -> Self {
        Cyclotomic { order: 1, coeffs: vec![c] }
    }

    pub fn from_i64(c: i64) -> Self {
        Self::from_q(Q::from_integer(c.into()))
    }

    /// `zeta_m^k`.
    pub fn zeta_pow(m: u32, k: i64) -> Self {
        assert!(m >= 1);
        let k = k.rem_euclid(m as i64) as usize;
        let mut poly = vec![Q::zero(); k + 1];
        poly[k] = Q::one();
        Self::from_poly(m, poly)
    }

    pub fn zeta(m: u32) -> Self {
        Self::zeta_pow(m, 1)
    }

    /// Builds `sum coeffs[i] zeta_m^i`, reducing modulo the cyclotomic polynomial.
    pub fn from_poly(m: u32, poly: Vec<Q>) -> Self {
        let coeffs = reduce_mod_phi(poly, m);
        let mut out = Cyclotomic { order: m, coeffs };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if self.order != 1 && self.coeffs.iter().skip(1).all(Zero::is_zero) {
            let c = self.coeffs.swap_remove(0);
            self.order = 1;
            self.coeffs = vec![c];
        }
    }

    /// Order of the cyclotomic field the element is currently written in.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Power-basis coefficients in `zeta_{order}`.
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&Q> {
        (self.order == 1).then(|| &self.coeffs[0])
    }

    /// Rewrites the element in `Q(zeta_target)`; `order` must divide `target`.
    pub fn lift(&self, target: u32) -> Vec<Q> {
        assert!(target.is_multiple_of(self.order), "cannot lift order {} to {}", self.order, target);
        if target == self.order {
            return self.coeffs.clone();
        }
        let step = (target / self.order) as usize;
        let mut poly = vec![Q::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        reduce_mod_phi(poly, target)
    }

    fn common_order(&self, other: &Self) -> u32 {
        lcm_i64(self.order as i64, other.order as i64) as u32
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        };
        out.normalize();
        out
    }

    fn add_impl(&self, other: &Self, sign: bool) -> Self {
        if self.order == other.order {
            let coeffs = self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| if sign { a - b } else { a + b })
                .collect();
            let mut out = Cyclotomic { order: self.order, coeffs };
            out.normalize();
            return out;
        }
        let m = self.common_order(other);
        let a = self.lift(m);
        let b = other.lift(m);
        let coeffs = a
            .iter()
            .zip(&b)
            .map(|(x, y)| if sign { x - y } else { x + y })
            .collect();
        let mut out = Cyclotomic { order: m, coeffs };
        out.normalize();
        out
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if let Some(c) = self.as_rational() {
            return other.scale(c);
        }
        if let Some(c) = other.as_rational() {
            return self.scale(c);
        }
        let m = self.common_order(other);
        let a = self.lift(m);
        let b = other.lift(m);
        let mut prod = vec![Q::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        Self::from_poly(m, prod)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(c) = self.as_rational() {
            return Some(Self::from_q(c.recip()));
        }
        // Solve (multiplication by self) * b = 1 in the power basis.
        let m = self.order;
        let d = self.coeffs.len();
        let mut rows: Vec<Vec<Q>> = vec![vec![Q::zero(); d + 1]; d];
        for j in 0..d {
            let col = self.mul_impl(&Self::zeta_pow(m, j as i64)).lift(m);
            for i in 0..d {
                rows[i][j] = col[i].clone();
            }
        }
        rows[0][d] = Q::one();
        let sol = solve_rational_square(rows)?;
        let mut out = Cyclotomic { order: m, coeffs: sol };
        out.normalize();
        Some(out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Applies the Galois automorphism `zeta_order -> zeta_order^k` of the
    /// field of order `field` (which must contain the element).
    pub fn galois(&self, field: u32, k: i64) -> Self {
        let coeffs = self.lift(field);
        let mut poly = vec![Q::zero(); field as usize];
        for (i, c) in coeffs.into_iter().enumerate() {
            let j = ((i as i64) * k).rem_euclid(field as i64) as usize;
            poly[j] += c;
        }
        Self::from_poly(field, poly)
    }

    /// Integer `m` for which every coefficient is expressible in `Q(zeta_m)`.
    pub fn field_order<'a, I: IntoIterator<Item = &'a Cyclotomic>>(items: I) -> u32 {
        items
            .into_iter()
            .fold(1u32, |acc, c| lcm_i64(acc as i64, c.order as i64) as u32)
    }
}

/// Gaussian elimination on an augmented `d x (d+1)` rational system.
fn solve_rational_square(mut rows: Vec<Vec<Q>>) -> Option<Vec<Q>> {
    let d = rows.len();
    for col in 0..d {
        let pivot = (col..d).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, pivot);
        let inv = rows[col][col].recip();
        for x in rows[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..d {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=d {
                    let delta = &f * &rows[col][c];
                    rows[r][c] -= delta;
                }
            }
        }
    }
    Some(rows.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let m = self.common_order(other);
        self.lift(m) == other.lift(m)
    }
}

impl Eq for Cyclotomic {}

impl From<Q> for Cyclotomic {
    fn from(c: Q) -> Self {
        Self::from_q(c)
    }
}

impl From<i64> for Cyclotomic {
    fn from(c: i64) -> Self {
        Self::from_i64(c)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl<'a> $tr<&'a Cyclotomic> for &'a Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &'a Cyclotomic) -> Cyclotomic {
                let f: fn(&Cyclotomic, &Cyclotomic) -> Cyclotomic = $body;
                f(self, rhs)
            }
        }
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: &'a Cyclotomic) -> Cyclotomic {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_impl(b, false));
forward_binop!(Sub, sub, |a, b| a.add_impl(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));
forward_binop!(Div, div, |a, b| a.mul_impl(&b.inv().expect("division by zero")));

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    /// Rationals print as `p/q`; other values as `a + b*zeta_m^k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.as_rational() {
            return write!(f, "{c}");
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = *c < Q::zero();
            let mag = if negative { -c } else { c.clone() };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let unit = match k {
                0 => String::new(),
                1 => alloc::format!("zeta_{}", self.order),
                _ => alloc::format!("zeta_{}^{}", self.order, k),
            };
            if k == 0 {
                out.push_str(&alloc::format!("{mag}"));
            } else if mag.is_one() {
                out.push_str(&unit);
            } else {
                out.push_str(&alloc::format!("{mag}*{unit}"));
            }
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::q;
    use proptest::prelude::*;

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(15).len() - 1, 8);
    }

    #[test]
    fn roots_of_unity_are_coherent() {
        let z6 = Cyclotomic::zeta(6);
        assert_eq!(z6.pow(2), Cyclotomic::zeta(3));
        assert_eq!(z6.pow(3), Cyclotomic::from_i64(-1));
        assert_eq!(Cyclotomic::zeta(4).pow(2), Cyclotomic::from_i64(-1));
        assert_eq!(Cyclotomic::zeta(12).pow(4), Cyclotomic::zeta(3));
        assert!(Cyclotomic::zeta(5).pow(5).is_one());
    }

    #[test]
    fn sum_of_cube_roots_vanishes() {
        let z = Cyclotomic::zeta(3);
        let s = Cyclotomic::one() + z.clone() + z.pow(2);
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_and_display() {
        let a = Cyclotomic::from_i64(1) + Cyclotomic::zeta(3).scale(&q(2, 1));
        let b = a.inv().unwrap();
        assert!((a.clone() * b).is_one());
        assert_eq!(alloc::format!("{a}"), "1 + 2*zeta_3");
        assert_eq!(alloc::format!("{}", Cyclotomic::from_q(q(-3, 4))), "-3/4");
    }

    #[test]
    fn galois_conjugation() {
        let z = Cyclotomic::zeta(5);
        assert_eq!(z.galois(5, 2), z.pow(2));
        assert_eq!(Cyclotomic::zeta(4).galois(4, 3), -Cyclotomic::zeta(4));
    }

    fn arb_cyclo() -> impl Strategy<Value = Cyclotomic> {
        (prop::sample::select(vec![1u32, 3, 4, 5, 6, 8, 12]), prop::collection::vec(-5i64..5, 1..6)).prop_map(
            |(m, cs)| {
                let poly = cs.into_iter().map(|c| q(c, 2)).collect();
                Cyclotomic::from_poly(m, poly)
            },
        )
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_cyclo(), b in arb_cyclo(), c in arb_cyclo()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
            }
        }
    }
}
