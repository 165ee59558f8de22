//! The coefficient field every module computes over.
//!
//! The exact pipeline runs on [`crate::Rational`]; the same code also
//! instantiates at `f64` (and `f32`) for quick numerical exploration.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::Rational;

/// A field element usable as a polynomial coefficient.
///
/// Blanket-implemented for every type with the right arithmetic, so
/// `BigRational`, `f64` and `f32` all qualify without ceremony.
pub trait Scalar:
    Num
    + Signed
    + Clone
    + PartialOrd
    + Debug
    + Display
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn from_int(n: i64) -> Self {
        <Self as FromPrimitive>::from_i64(n).expect("every i64 embeds in the scalar field")
    }

    /// `p / q` in the field. Panics on `q == 0`.
    fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator in Scalar::ratio");
        Self::from_int(p) / Self::from_int(q)
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl<T> Scalar for T where
    T: Num
        + Signed
        + Clone
        + PartialOrd
        + Debug
        + Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

/// Parses `"p/q"` or an integer string into an exact rational.
///
/// Decimal notation is rejected on purpose: `0.1` has no exact binary
/// meaning and would silently leave the exact pipeline.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::InvalidRational(text.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let is_int = |t: &str, signed: bool| {
        let digits = if signed {
            t.strip_prefix(['-', '+']).unwrap_or(t)
        } else {
            t
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !is_int(num, true) {
        return Err(bad());
    }
    let numer: BigInt = num.trim_start_matches('+').parse().map_err(|_| bad())?;
    let denom: BigInt = match den {
        Some(d) if is_int(d, false) => d.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("1/2").unwrap(), Rational::ratio(1, 2));
        assert_eq!(parse_rational("-1/2").unwrap(), Rational::ratio(-1, 2));
        assert_eq!(parse_rational(" 4/6 ").unwrap(), Rational::ratio(2, 3));
        assert_eq!(parse_rational("3").unwrap(), Rational::from_int(3));
        assert_eq!(parse_rational("+3").unwrap(), Rational::from_int(3));
    }

    #[test]
    fn rejects_decimals_and_garbage() {
        for s in ["0.5", "1e3", "", "1/", "/2", "1/0", "a/b", "1/-2", "--1"] {
            assert!(parse_rational(s).is_err(), "{s:?} should be rejected");
        }
    }

    #[test]
    fn generic_helpers_agree_across_fields() {
        assert_eq!(f64::ratio(1, 4), 0.25);
        assert_eq!(Rational::ratio(1, 4).to_f64_lossy(), 0.25);
        assert_eq!(Rational::ratio(-3, 2).square(), Rational::ratio(9, 4));
    }
}
