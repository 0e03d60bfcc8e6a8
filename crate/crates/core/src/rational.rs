//! Exact rationals and their canonical `"p/q"` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision rational in reduced form with positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d`, reduced. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Formats as `numerator/denominator`, always including the denominator.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRatError {
    #[error("empty rational")]
    Empty,
    #[error("invalid integer `{0}`")]
    BadInteger(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

/// Parses `p/q` or a bare integer `p`. Whitespace around the parts is not accepted.
pub fn parse_rat(s: &str) -> Result<Rat, ParseRatError> {
    if s.is_empty() {
        return Err(ParseRatError::Empty);
    }
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num = parse_int(n)?;
    let den = match d {
        Some(d) => parse_int(d)?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(ParseRatError::ZeroDenominator);
    }
    Ok(Rat::new(num, den))
}

fn parse_int(s: &str) -> Result<BigInt, ParseRatError> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ParseRatError::BadInteger(s.to_string()));
    }
    s.parse::<BigInt>()
        .map_err(|_| ParseRatError::BadInteger(s.to_string()))
}

/// `1/k!` as an exact rational.
pub(crate) fn inv_factorial(k: u32) -> Rat {
    let mut f = BigInt::one();
    for i in 2..=k {
        f *= i;
    }
    Rat::new(BigInt::one(), f)
}

/// Integer power of a rational, negative exponents allowed for nonzero bases.
pub(crate) fn rat_pow(r: &Rat, e: i32) -> Rat {
    if e >= 0 {
        num_traits::pow(r.clone(), e as usize)
    } else {
        num_traits::pow(r.recip(), (-e) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_with_denominator() {
        assert_eq!(format_rat(&rat(2875)), "2875/1");
        assert_eq!(format_rat(&ratio(-45, 8)), "-45/8");
        assert_eq!(format_rat(&ratio(2, -4)), "-1/2");
    }

    #[test]
    fn parses_both_forms() {
        assert_eq!(parse_rat("1/8").unwrap(), ratio(1, 8));
        assert_eq!(parse_rat("-6").unwrap(), rat(-6));
        assert_eq!(parse_rat("4/-2").unwrap(), rat(-2));
        assert_eq!(parse_rat("1/0"), Err(ParseRatError::ZeroDenominator));
        assert!(parse_rat("").is_err());
        assert!(parse_rat("1/").is_err());
        assert!(parse_rat("+3").is_err());
        assert!(parse_rat("1.5").is_err());
    }

    #[test]
    fn inverse_factorials() {
        assert_eq!(inv_factorial(0), rat(1));
        assert_eq!(inv_factorial(5), ratio(1, 120));
    }
}
