//! Exact scalar arithmetic: big rationals, real quadratic irrationals with an
//! exact sign test, Bernoulli numbers and truncated multivariate power series.

mod bernoulli;
mod quad;
mod scalar;
mod series;

pub use bernoulli::{bernoulli_number, bernoulli_numbers, bernoulli_polynomial, binomial, factorial};
pub use quad::{quad_sign, QuadScalar};
pub use scalar::Scalar;
pub use series::TruncSeries;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Reduced fraction of arbitrary-precision integers with positive denominator.
pub type Rational = BigRational;

/// Shorthand for the rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"a"`, `"-a/b"` style strings.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// Formats a rational as `"num/den"`, or `"num"` when integral.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `p`-adic valuation of a nonzero rational; `None` for zero.
pub fn valuation(r: &Rational, p: u64) -> Option<i64> {
    if r.numer() == &BigInt::from(0) {
        return None;
    }
    Some(int_valuation(r.numer(), p) as i64 - int_valuation(r.denom(), p) as i64)
}

/// Exponent of `p` in a nonzero integer.
pub fn int_valuation(n: &BigInt, p: u64) -> u32 {
    use num_integer::Integer;
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if r != BigInt::from(0) || q == BigInt::from(0) {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn is_p_integral(r: &Rational, p: u64) -> bool {
    use num_integer::Integer;
    r.denom().gcd(&BigInt::from(p)) == BigInt::from(1)
}

/// Representative in `[0, modulus)` of a rational whose denominator is prime
/// to `modulus`.
pub fn reduce_mod(r: &Rational, modulus: &BigInt) -> Option<BigInt> {
    let inv = mod_inverse(r.denom(), modulus)?;
    let x = r.numer() * inv;
    Some(((x % modulus) + modulus) % modulus)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    use num_integer::Integer;
    let one = BigInt::from(1);
    if m == &one {
        return Some(BigInt::from(0));
    }
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd != one {
        return None;
    }
    Some(e.x.mod_floor(m))
}
