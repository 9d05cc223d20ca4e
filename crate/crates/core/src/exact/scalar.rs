use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::Rational;

/// A field of exact scalars usable as power-series coefficients.
///
/// Values carry enough context (for instance the radicand of a quadratic
/// field) to build the neutral elements from an existing value.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_scalar(&self) -> bool;
    fn inverse(&self) -> Option<Self>;
    fn from_rational_like(&self, r: &Rational) -> Self;

    fn scale(&self, r: &Rational) -> Self {
        self.clone() * self.from_rational_like(r)
    }

    /// Exact sign under the designated real embedding.
    fn signum_scalar(&self) -> i32;

    /// The value as a rational, if it is one.
    fn as_rational(&self) -> Option<Rational>;
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }

    fn one_like(&self) -> Self {
        Rational::one()
    }

    fn is_zero_scalar(&self) -> bool {
        self.is_zero()
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_rational_like(&self, r: &Rational) -> Self {
        r.clone()
    }

    fn scale(&self, r: &Rational) -> Self {
        self * r
    }

    fn signum_scalar(&self) -> i32 {
        use num_traits::Signed;
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}
