use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::{reduce_mod, Rational};

/// Fixed-modulus arithmetic in `ℤ/p^M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicCtx {
    pub p: u64,
    pub m: u32,
    pub modulus: u64,
}

impl PadicCtx {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        if p < 2 || !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        let modulus = p
            .checked_pow(m)
            .filter(|&x| x < (1u64 << 62))
            .ok_or_else(|| Error::PrecisionExhausted(format!("{p}^{m} exceeds the supported modulus")))?;
        Ok(PadicCtx { p, m, modulus })
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.modulus {
            s - self.modulus
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = a % self.modulus;
        let mut acc = 1 % self.modulus;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.modulus as i64) as u64
    }

    pub fn from_bigint(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.modulus)).to_u64().unwrap()
    }

    /// Reduction of a `p`-integral rational.
    pub fn from_rational(&self, r: &Rational) -> Option<u64> {
        reduce_mod(r, &BigInt::from(self.modulus)).map(|x| x.to_u64().unwrap())
    }

    pub fn inverse(&self, a: u64) -> Option<u64> {
        let e = BigInt::from(a).extended_gcd(&BigInt::from(self.modulus));
        if e.gcd != BigInt::from(1) {
            return None;
        }
        Some(self.from_bigint(&e.x))
    }

    /// `v_p(a)`, or `m` for zero.
    pub fn valuation(&self, mut a: u64) -> u32 {
        if a == 0 {
            return self.m;
        }
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        v
    }

    /// Teichmüller representative `ω(a) = lim a^{p^k}`.
    pub fn teichmuller(&self, a: u64) -> u64 {
        let mut x = a % self.modulus;
        for _ in 0..self.m {
            x = self.pow(x, self.p);
        }
        x
    }

    pub fn scalar(&self, value: u64) -> PadicScalar {
        PadicScalar { value: value % self.modulus, p: self.p, precision: self.m }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Residue modulo `p^precision`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    pub value: u64,
    pub p: u64,
    pub precision: u32,
}

impl PadicScalar {
    pub fn new(value: u64, p: u64, precision: u32) -> Self {
        let modulus = p.pow(precision);
        PadicScalar { value: value % modulus, p, precision }
    }

    pub fn from_rational(r: &Rational, p: u64, precision: u32) -> Option<Self> {
        let modulus = BigInt::from(p).pow(precision);
        reduce_mod(r, &modulus).map(|x| PadicScalar { value: x.to_u64().unwrap(), p, precision })
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.precision)
    }

    /// Same residue at a lower precision.
    pub fn reduce(&self, precision: u32) -> Self {
        let precision = precision.min(self.precision);
        PadicScalar::new(self.value, self.p, precision)
    }

    pub fn valuation(&self) -> u32 {
        PadicCtx { p: self.p, m: self.precision, modulus: self.modulus() }.valuation(self.value)
    }

    /// Whether the rational `r` is congruent to `self` modulo `p^digits`
    /// (`digits` is capped at the precision).
    pub fn agrees_with(&self, r: &Rational, digits: u32) -> bool {
        let d = digits.min(self.precision);
        match PadicScalar::from_rational(r, self.p, d) {
            Some(x) => x.value == self.value % self.p.pow(d),
            None => false,
        }
    }

    pub fn agrees_with_scalar(&self, o: &PadicScalar, digits: u32) -> bool {
        let d = digits.min(self.precision).min(o.precision);
        let m = self.p.pow(d);
        self.p == o.p && self.value % m == o.value % m
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({}^{})", self.value, self.p, self.precision)
    }
}
