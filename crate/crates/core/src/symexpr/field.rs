//! Exact coefficient fields.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// A field with exact equality, usable as polynomial coefficients.
///
/// Every `Num + Signed` type with primitive conversions qualifies; in practice
/// this is `BigRational` (the default) or `Rational64` for small tests.
pub trait Field:
    Num + Signed + FromPrimitive + ToPrimitive + Clone + Debug + Display + Send + Sync + 'static
{
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer fits the coefficient field")
    }

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_int(n) / Self::from_int(d)
    }

    fn to_float(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Field for T where
    T: Num + Signed + FromPrimitive + ToPrimitive + Clone + Debug + Display + Send + Sync + 'static
{
}

/// Build an exact rational from a numerator/denominator pair.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse an unsigned decimal integer literal into a rational.
pub fn rat_from_digits(digits: &str) -> Option<BigRational> {
    digits.parse::<BigInt>().ok().map(BigRational::from_integer)
}
