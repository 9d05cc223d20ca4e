use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Rational, Scalar};

/// `a + b·√d` for a fixed squarefree `d > 1`, evaluated under the embedding
/// that sends `√d` to the positive real root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadScalar {
    pub a: Rational,
    pub b: Rational,
    pub d: i64,
}

impl QuadScalar {
    pub fn new(a: Rational, b: Rational, d: i64) -> Self {
        assert!(d > 1, "radicand must exceed 1");
        QuadScalar { a, b, d }
    }

    pub fn rational(a: Rational, d: i64) -> Self {
        Self::new(a, Rational::zero(), d)
    }

    pub fn sqrt_d(d: i64) -> Self {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    /// Image under the other embedding (`√d ↦ -√d`).
    pub fn conjugate(&self) -> Self {
        QuadScalar { a: self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// Field norm `a² − d·b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(self.d))
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.a
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn sign(&self) -> i32 {
        quad_sign(self)
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.d, other.d, "mixing different quadratic fields");
    }

    /// Decimal approximation, only used for diagnostics and tests.
    pub fn to_f64(&self) -> f64 {
        let f = |r: &Rational| {
            use num_traits::ToPrimitive;
            r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
        };
        f(&self.a) + f(&self.b) * (self.d as f64).sqrt()
    }
}

/// Exact sign of `a + b√d` under the positive embedding.
pub fn quad_sign(x: &QuadScalar) -> i32 {
    let sa = sgn(&x.a);
    let sb = sgn(&x.b);
    if sa >= 0 && sb >= 0 {
        return if sa == 0 && sb == 0 { 0 } else { 1 };
    }
    if sa <= 0 && sb <= 0 {
        return -1;
    }
    // Mixed signs: compare a² with b²d.
    let a2 = &x.a * &x.a;
    let b2d = &x.b * &x.b * Rational::from_integer(BigInt::from(x.d));
    match a2.cmp(&b2d) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        // d squarefree and > 1 rules out a² = b²d with b ≠ 0.
        Ordering::Equal => unreachable!("√d irrational"),
    }
}

fn sgn(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√{}", self.a, self.b, self.d)
    }
}

impl Add for QuadScalar {
    type Output = QuadScalar;
    fn add(self, o: QuadScalar) -> QuadScalar {
        self.check(&o);
        QuadScalar { a: self.a + o.a, b: self.b + o.b, d: self.d }
    }
}

impl Sub for QuadScalar {
    type Output = QuadScalar;
    fn sub(self, o: QuadScalar) -> QuadScalar {
        self.check(&o);
        QuadScalar { a: self.a - o.a, b: self.b - o.b, d: self.d }
    }
}

impl Mul for QuadScalar {
    type Output = QuadScalar;
    fn mul(self, o: QuadScalar) -> QuadScalar {
        self.check(&o);
        let d = Rational::from_integer(BigInt::from(self.d));
        QuadScalar {
            a: &self.a * &o.a + &self.b * &o.b * d,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d,
        }
    }
}

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Scalar for QuadScalar {
    fn zero_like(&self) -> Self {
        QuadScalar::rational(Rational::zero(), self.d)
    }

    fn one_like(&self) -> Self {
        QuadScalar::rational(Rational::one(), self.d)
    }

    fn is_zero_scalar(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(QuadScalar { a: &self.a / &n, b: -(&self.b / &n), d: self.d })
    }

    fn from_rational_like(&self, r: &Rational) -> Self {
        QuadScalar::rational(r.clone(), self.d)
    }

    fn scale(&self, r: &Rational) -> Self {
        QuadScalar { a: &self.a * r, b: &self.b * r, d: self.d }
    }

    fn signum_scalar(&self) -> i32 {
        quad_sign(self)
    }

    fn as_rational(&self) -> Option<Rational> {
        self.b.is_zero().then(|| self.a.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn sign_examples() {
        assert_eq!(quad_sign(&QuadScalar::new(int(1), int(0), 5)), 1);
        assert_eq!(quad_sign(&QuadScalar::new(int(-2), int(1), 5)), 1);
        assert_eq!(quad_sign(&QuadScalar::new(int(2), int(-1), 3)), 1);
        assert_eq!(quad_sign(&QuadScalar::new(int(0), int(0), 3)), 0);
        assert_eq!(quad_sign(&QuadScalar::new(int(-3), int(1), 7)), -1);
    }

    #[test]
    fn inverse_multiplies_to_one() {
        let x = QuadScalar::new(rat(3, 2), rat(-1, 2), 5);
        let y = x.inverse().unwrap();
        assert_eq!(x * y, QuadScalar::rational(int(1), 5));
    }
}
