//! Exact rational scalars and their text form.
//!
//! Every coordinate, matrix entry and stress coefficient in this crate is a
//! [`Rational`]. The on-disk text form is `"a"` or `"a/b"` with decimal digits
//! and an optional leading sign; no floating point anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational number. Always stored reduced, denominator positive.
pub type Rational = BigRational;

/// Errors from [`parse_rational`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer literal `{0}`")]
    InvalidInteger(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// The rational `v`.
pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// The rational `num/den`. Panics if `den == 0`; meant for literals in code.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "rational literal with zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"a"` or `"a/b"` (decimal digits, optional leading `-` or `+`).
///
/// Rejects empty input, zero denominators, embedded whitespace and anything
/// that is not an integer on each side of the single `/`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let parse_int = |part: &str| -> Result<BigInt, ParseRationalError> {
        part.parse::<BigInt>()
            .map_err(|_| ParseRationalError::InvalidInteger(part.to_string()))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(s.to_string()));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Formats as `"a"` when the denominator is 1, else `"a/b"`. Inverse of
/// [`parse_rational`] on reduced values.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Least common multiple of two positive integers.
pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    num_integer::Integer::lcm(a, b)
}

/// Clears denominators and divides by the content: the unique primitive
/// integer vector that is a positive multiple of `v`, with the extra rule that
/// the first nonzero entry is made positive. Returns all zeros for the zero
/// vector.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let mut scale = BigInt::one();
    for x in v {
        scale = lcm(&scale, x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&scale / x.denom())).collect();
    let mut content = BigInt::zero();
    for x in &ints {
        content = num_integer::Integer::gcd(&content, x);
    }
    if content.is_zero() {
        return ints;
    }
    for x in &mut ints {
        *x = &*x / &content;
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in &mut ints {
                *x = -&*x;
            }
        }
    }
    ints
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("7").unwrap(), rat_int(7));
        assert_eq!(parse_rational("-3").unwrap(), rat_int(-3));
        assert_eq!(parse_rational("7/5").unwrap(), rat(7, 5));
        assert_eq!(parse_rational("-14/10").unwrap(), rat(-7, 5));
        assert_eq!(parse_rational("4/-6").unwrap(), rat(-2, 3));
    }

    #[test]
    fn rejects_malformed_literals() {
        assert_eq!(parse_rational(""), Err(ParseRationalError::Empty));
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        for bad in ["1.5", "1/2/3", " 1", "1 ", "a", "1/ 2", "--2"] {
            assert!(parse_rational(bad).is_err(), "accepted `{bad}`");
        }
    }

    #[test]
    fn formats_reduced_form() {
        assert_eq!(format_rational(&rat(7, 5)), "7/5");
        assert_eq!(format_rational(&rat(-14, 10)), "-7/5");
        assert_eq!(format_rational(&rat_int(0)), "0");
        assert_eq!(format_rational(&rat(6, 3)), "2");
    }

    #[test]
    fn parse_format_round_trip() {
        for s in ["0", "17", "-4", "7/5", "-1073741824", "355/113"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
    }

    #[test]
    fn primitive_vector_normalization() {
        let v = vec![rat(-2, 3), rat_int(4), rat(1, 6)];
        let p = primitive_integer_vector(&v);
        let expect: Vec<BigInt> = [4i64, -24, -1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(p, expect);

        let zeros = vec![rat_int(0), rat_int(0)];
        assert!(primitive_integer_vector(&zeros).iter().all(|x| x.is_zero()));

        let v = vec![rat_int(0), rat(-5, 7)];
        let p = primitive_integer_vector(&v);
        assert_eq!(p, vec![BigInt::from(0), BigInt::from(1)]);
    }
}
