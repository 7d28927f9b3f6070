//! Exact rational numbers and `p/q` formatting shared by all modules.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational; always reduced, denominator positive.
pub type Rational = num_rational::BigRational;

/// Shorthand for `p/q` from machine integers.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Shorthand for an integer rational.
pub fn int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Renders a rational as `p/q`, or just `p` when the denominator is 1.
pub fn fmt_rat(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p/q` or `p` (arbitrary precision, any sign on the numerator).
pub fn parse_rat(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Ceiling of a rational as a `BigInt`.
pub fn ceil_big(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// True if `x` is a non-negative integer small enough for `u32`.
pub fn as_u32(x: &Rational) -> Option<u32> {
    if !x.denom().is_one() || x.is_negative() {
        return None;
    }
    u32::try_from(x.numer().clone()).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_reduced() {
        assert_eq!(fmt_rat(&rat(75, 34)), "75/34");
        assert_eq!(fmt_rat(&rat(10, 5)), "2");
        assert_eq!(fmt_rat(&rat(-3, 6)), "-1/2");
    }

    #[test]
    fn parses_back() {
        for s in ["5/3", "-7/2", "0", "12"] {
            let v = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&v), s);
        }
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }
}
