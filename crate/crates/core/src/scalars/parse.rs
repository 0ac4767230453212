//! Parser for the literal syntax used by the `Display` impls: sums of terms
//! such as `3/2*z^(-1/2) + (1 + zeta_3)*z - z^2 + O(z^(5/2))`.
//!
//! Products and parenthesized sums are accepted anywhere, so the printed form
//! of every series and scalar parses back to the same value.

use alloc::format;
use alloc::string::String;

use num_bigint::BigInt;
use num_traits::One;

use super::{Cyclotomic, Precision, PuiseuxSeries, Q};
use crate::error::{Error, Result};

/// Parses a Puiseux series literal.
pub fn parse_series(src: &str) -> Result<PuiseuxSeries> {
    let mut p = Parser { s: src.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(v.reduced_ramification())
}

/// Parses an exact constant, such as `-2/3` or `1/2 - zeta_4`.
pub fn parse_scalar(src: &str) -> Result<Cyclotomic> {
    let s = parse_series(src)?;
    if s.precision() != Precision::Exact || s.terms().keys().any(|k| *k != 0) {
        return Err(Error::Invalid(format!("`{src}` is not a constant")));
    }
    Ok(s.terms().get(&0).cloned().unwrap_or_else(Cyclotomic::zero))
}

/// Parses a rational `p` or `p/q`, with optional sign.
pub fn parse_rational(src: &str) -> Result<Q> {
    let c = parse_scalar(src)?;
    c.as_rational().cloned().ok_or_else(|| Error::Invalid(format!("`{src}` is not rational")))
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        Error::Invalid(format!("{what} at offset {} in `{}`", self.pos, String::from_utf8_lossy(self.s)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<PuiseuxSeries> {
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<PuiseuxSeries> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<PuiseuxSeries> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.rational()?;
                Ok(PuiseuxSeries::constant(Cyclotomic::from_q(v)))
            }
            Some(b'O') => {
                self.pos += 1;
                self.expect(b'(')?;
                self.expect(b'z')?;
                let e = self.exponent()?;
                self.expect(b')')?;
                let ram = u32::try_from(e.denom().clone()).map_err(|_| self.error("exponent denominator too large"))?;
                let k = i64::try_from(e.numer().clone()).map_err(|_| self.error("exponent too large"))?;
                Ok(PuiseuxSeries::zero(ram, Precision::Below(k)))
            }
            Some(b'z') if self.s[self.pos..].starts_with(b"zeta_") => {
                self.pos += 5;
                let m = self.integer()?;
                let k = if self.eat(b'^') { self.signed_integer()? } else { 1 };
                let m = u32::try_from(m).ok().filter(|m| *m > 0).ok_or_else(|| self.error("bad root of unity order"))?;
                Ok(PuiseuxSeries::constant(Cyclotomic::zeta_pow(m, k)))
            }
            Some(b'z') => {
                self.pos += 1;
                let e = self.exponent()?;
                let ram = u32::try_from(e.denom().clone()).map_err(|_| self.error("exponent denominator too large"))?;
                let k = i64::try_from(e.numer().clone()).map_err(|_| self.error("exponent too large"))?;
                Ok(PuiseuxSeries::monomial(Cyclotomic::one(), k, ram))
            }
            _ => Err(self.error("expected a term")),
        }
    }

    /// Optional `^k`, `^-k` or `^(p/q)` after `z`; defaults to 1.
    fn exponent(&mut self) -> Result<Q> {
        if !self.eat(b'^') {
            return Ok(Q::one());
        }
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            if !neg {
                self.eat(b'+');
            }
            let v = self.rational()?;
            self.expect(b')')?;
            return Ok(if neg { -v } else { v });
        }
        Ok(Q::from_integer(BigInt::from(self.signed_integer()?)))
    }

    fn rational(&mut self) -> Result<Q> {
        let n = self.integer()?;
        // a `/` directly followed by digits is part of the number
        let save = self.pos;
        if self.eat(b'/') && self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let d = self.integer()?;
            if d == 0 {
                return Err(self.error("zero denominator"));
            }
            return Ok(Q::new(BigInt::from(n), BigInt::from(d)));
        }
        self.pos = save;
        Ok(Q::from_integer(BigInt::from(n)))
    }

    fn signed_integer(&mut self) -> Result<i64> {
        let neg = self.eat(b'-');
        let v = self.integer()?;
        Ok(if neg { -v } else { v })
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        let text = core::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        text.parse::<i64>().map_err(|_| self.error("integer too large"))
    }
}
