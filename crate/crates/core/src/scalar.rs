//! Arithmetic shared by the floating and exact-rational code paths.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::exactla::Rational;

/// Ordered field used by the Bell-specific modules.
///
/// `f64` is used for direction-derived marginals, [`Rational`] for exact
/// runs. The structural matrices are always exact and get converted with
/// [`Scalar::from_rational`].
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// Exact conversion of a float (rationals keep the full binary expansion).
    fn from_f64(v: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs(&self) -> Self;

    /// Picks the precomputed representation of a structural matrix that
    /// matches this scalar type.
    fn select_entries<'a>(exact: &'a [Rational], float: &'a [f64]) -> &'a [Self];

    fn one() -> Self {
        Self::from_i64(1)
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn select_entries<'a>(_: &'a [Rational], float: &'a [f64]) -> &'a [Self] {
        float
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn from_f64(v: f64) -> Self {
        <Rational as FromPrimitive>::from_f64(v).expect("finite float")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn select_entries<'a>(exact: &'a [Rational], _: &'a [f64]) -> &'a [Self] {
        exact
    }
}

/// Nearest fraction with the given denominator (ties away from zero).
pub fn rationalize(v: f64, denominator: i64) -> Rational {
    let scaled = (v * denominator as f64).round();
    Rational::new(
        BigInt::from_f64(scaled).expect("finite float"),
        BigInt::from(denominator),
    )
}

/// Denominator used whenever float inputs are rationalized for exact runs.
pub const RATIONALIZE_DENOMINATOR: i64 = 1_000_000;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationalize_rounds_to_grid() {
        assert_eq!(
            rationalize(0.5, 1_000_000),
            Rational::new(1.into(), 2.into())
        );
        assert_eq!(
            rationalize(-0.1234567, 1_000_000),
            Rational::new((-123457).into(), 1_000_000.into())
        );
        assert_eq!(rationalize(1.0 / 3.0, 3), Rational::new(1.into(), 3.into()));
        assert_eq!(rationalize(0.24, 2), Rational::from_integer(0.into()));
    }

    #[test]
    fn from_f64_is_exact() {
        let r = <Rational as Scalar>::from_f64(0.1);
        assert_eq!(Scalar::to_f64(&r), 0.1);
        assert_ne!(r, Rational::new(1.into(), 10.into()));
    }
}
