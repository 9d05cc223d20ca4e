use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `C(n, k)` for nonnegative integers, zero when `k > n`.
pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `B_0, …, B_n` with the convention `B_1 = -1/2`, so that
/// `ζ(-k) = -B_{k+1}/(k+1)`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    b.push(Rational::one());
    for m in 1..=n {
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binomial(m as u32 + 1, j as u32)) * bj;
        }
        b.push(-acc / Rational::from_integer(BigInt::from(m + 1)));
    }
    b
}

pub fn bernoulli_number(k: usize) -> Rational {
    bernoulli_numbers(k).pop().unwrap()
}

/// `B_k(x) = Σ_j C(k, j) B_j x^{k-j}`.
pub fn bernoulli_polynomial(k: usize, x: &Rational) -> Rational {
    let b = bernoulli_numbers(k);
    let mut acc = Rational::zero();
    let mut xpow = Rational::one();
    // Horner-free accumulation from the top coefficient down.
    for j in (0..=k).rev() {
        acc += Rational::from_integer(binomial(k as u32, j as u32)) * &b[j] * &xpow;
        xpow *= x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn small_values() {
        assert_eq!(bernoulli_number(0), int(1));
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(2), rat(1, 6));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
    }

    #[test]
    fn odd_indices_vanish() {
        let b = bernoulli_numbers(21);
        for k in 1..=10 {
            assert!(b[2 * k + 1].is_zero(), "B_{} != 0", 2 * k + 1);
        }
    }

    #[test]
    fn polynomial_examples() {
        assert_eq!(bernoulli_polynomial(1, &int(0)), rat(-1, 2));
        assert_eq!(bernoulli_polynomial(2, &rat(1, 3)), rat(-1, 18));
        assert_eq!(bernoulli_polynomial(0, &rat(7, 3)), int(1));
    }

    #[test]
    fn difference_equation() {
        for k in 1..=8usize {
            for (n, d) in [(0, 1), (1, 3), (-5, 7), (9, 2), (2, 1)] {
                let x = rat(n, d);
                let lhs = bernoulli_polynomial(k, &(&x + int(1))) - bernoulli_polynomial(k, &x);
                let mut rhs = int(k as i64);
                for _ in 0..k - 1 {
                    rhs *= &x;
                }
                assert_eq!(lhs, rhs, "k={k} x={x}");
            }
        }
    }
}
