//! Exact rational scalars. All stoichiometric data is kept as
//! arbitrary-precision rationals; nothing in this crate touches floating
//! point when computing verdicts.

use std::cmp::Ordering;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational scalar used for all matrix entries and derived values.
pub type Rational = num_rational::BigRational;

/// Convenience constructor for integer-valued rationals.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Convenience constructor for `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty numeric token")]
    Empty,
    #[error("invalid numeric token `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses an integer (`-3`) or fraction (`5/2`) token into an exact rational.
///
/// This is deliberately strict: no whitespace, no decimals, at most one `/`.
pub fn parse_rational(token: &str) -> Result<Rational, RationalParseError> {
    if token.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let invalid = || RationalParseError::Invalid(token.to_string());
    let mut parts = token.splitn(2, '/');
    let numer: BigInt = parts.next().unwrap().parse().map_err(|_| invalid())?;
    match parts.next() {
        None => Ok(Rational::from_integer(numer)),
        Some(denom_str) => {
            let denom: BigInt = denom_str.parse().map_err(|_| invalid())?;
            if denom.is_zero() {
                return Err(RationalParseError::ZeroDenominator(token.to_string()));
            }
            Ok(Rational::new(numer, denom))
        }
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise (always reduced).
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Sign of a nonzero quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Sign of a rational; `None` for zero.
    pub fn of(r: &Rational) -> Option<Sign> {
        match r.numer().sign() {
            num_bigint::Sign::Plus => Some(Sign::Plus),
            num_bigint::Sign::Minus => Some(Sign::Minus),
            num_bigint::Sign::NoSign => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_int(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// `(-1)^k`.
    pub fn neg_one_pow(k: usize) -> Sign {
        if k.is_multiple_of(2) {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Multiplies a rational by this sign.
    pub fn apply(self, r: &Rational) -> Rational {
        match self {
            Sign::Plus => r.clone(),
            Sign::Minus => -r.clone(),
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

/// Total order helper so exact values can key deterministic sorts.
pub fn cmp_rational(a: &Rational, b: &Rational) -> Ordering {
    a.cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), rat(3));
        assert_eq!(parse_rational("-7").unwrap(), rat(-7));
        assert_eq!(parse_rational("5/2").unwrap(), ratio(5, 2));
        assert_eq!(parse_rational("-4/6").unwrap(), ratio(-2, 3));
    }

    #[test]
    fn rejects_bad_tokens() {
        assert_eq!(parse_rational(""), Err(RationalParseError::Empty));
        assert!(matches!(
            parse_rational("1.5"),
            Err(RationalParseError::Invalid(_))
        ));
        assert!(matches!(
            parse_rational("3/0"),
            Err(RationalParseError::ZeroDenominator(_))
        ));
        assert!(matches!(
            parse_rational("1/2/3"),
            Err(RationalParseError::Invalid(_))
        ));
        assert!(matches!(
            parse_rational("/2"),
            Err(RationalParseError::Invalid(_))
        ));
        assert!(matches!(
            parse_rational("2/"),
            Err(RationalParseError::Invalid(_))
        ));
    }

    #[test]
    fn canonical_text() {
        assert_eq!(rational_to_string(&rat(3)), "3");
        assert_eq!(rational_to_string(&rat(-2)), "-2");
        assert_eq!(rational_to_string(&ratio(4, 6)), "2/3");
        assert_eq!(rational_to_string(&ratio(-1, 2)), "-1/2");
    }

    #[test]
    fn sign_arithmetic() {
        assert_eq!(Sign::of(&rat(5)), Some(Sign::Plus));
        assert_eq!(Sign::of(&rat(-5)), Some(Sign::Minus));
        assert_eq!(Sign::of(&rat(0)), None);
        assert_eq!(Sign::Plus * Sign::Minus, Sign::Minus);
        assert_eq!(Sign::Minus * Sign::Minus, Sign::Plus);
        assert_eq!(Sign::neg_one_pow(0), Sign::Plus);
        assert_eq!(Sign::neg_one_pow(3), Sign::Minus);
        assert_eq!(Sign::Minus.apply(&rat(4)), rat(-4));
    }
}
