use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

pub type Q = num_rational::BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

/// Panics if the value does not fit; all exponents handled here are small.
pub fn floor_i64(x: &Q) -> i64 {
    x.floor().to_integer().to_i64().expect("exponent out of range")
}

pub fn ceil_i64(x: &Q) -> i64 {
    x.ceil().to_integer().to_i64().expect("exponent out of range")
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Q) -> Q {
    x - x.floor()
}

pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

pub fn lcm_i64(a: i64, b: i64) -> i64 {
    if a.is_zero() || b.is_zero() {
        return 0;
    }
    a.lcm(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_and_frac_of_negative_values() {
        assert_eq!(floor_i64(&q(-1, 2)), -1);
        assert_eq!(ceil_i64(&q(-1, 2)), 0);
        assert_eq!(frac(&q(-1, 3)), q(2, 3));
        assert_eq!(frac(&qi(4)), qi(0));
    }
}
