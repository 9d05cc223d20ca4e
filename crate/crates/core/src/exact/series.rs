use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{factorial, Rational, Scalar};
use crate::error::{Error, Result};

/// Truncated power series in `n` variables with a separate degree cap per
/// variable. Exponent tuples beyond a cap are dropped; absent keys are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<S: Scalar> {
    caps: Vec<u32>,
    coeffs: BTreeMap<Vec<u32>, S>,
    zero: S,
}

impl<S: Scalar> TruncSeries<S> {
    /// The zero series; `proto` is any scalar of the coefficient field.
    pub fn zero(caps: Vec<u32>, proto: &S) -> Self {
        TruncSeries { caps, coeffs: BTreeMap::new(), zero: proto.zero_like() }
    }

    pub fn constant(caps: Vec<u32>, c: S) -> Self {
        let mut s = Self::zero(caps, &c);
        let key = vec![0; s.caps.len()];
        s.set(key, c);
        s
    }

    pub fn one(caps: Vec<u32>, proto: &S) -> Self {
        Self::constant(caps, proto.one_like())
    }

    pub fn nvars(&self) -> usize {
        self.caps.len()
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn proto(&self) -> &S {
        &self.zero
    }

    fn in_caps(&self, e: &[u32]) -> bool {
        e.iter().zip(&self.caps).all(|(a, c)| a <= c)
    }

    /// Sets a coefficient; exponents outside the caps are ignored.
    pub fn set(&mut self, e: Vec<u32>, c: S) {
        assert_eq!(e.len(), self.caps.len());
        if !self.in_caps(&e) {
            return;
        }
        if c.is_zero_scalar() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
    }

    pub fn add_to(&mut self, e: Vec<u32>, c: S) {
        if !self.in_caps(&e) {
            return;
        }
        let cur = self.coeffs.remove(&e).unwrap_or_else(|| self.zero.clone());
        let next = cur + c;
        if !next.is_zero_scalar() {
            self.coeffs.insert(e, next);
        }
    }

    pub fn coeff(&self, e: &[u32]) -> S {
        self.coeffs.get(e).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &S)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&vec![0; self.caps.len()])
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.caps, other.caps);
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_to(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            caps: self.caps.clone(),
            coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn scale(&self, k: &S) -> Self {
        let mut out = Self::zero(self.caps.clone(), &self.zero);
        for (e, c) in &self.coeffs {
            out.set(e.clone(), c.clone() * k.clone());
        }
        out
    }

    /// Truncated product; valid to the common caps.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.caps, other.caps);
        let n = self.caps.len();
        let mut acc: BTreeMap<Vec<u32>, S> = BTreeMap::new();
        let mut key = vec![0u32; n];
        for (ea, ca) in &self.coeffs {
            'inner: for (eb, cb) in &other.coeffs {
                for i in 0..n {
                    let s = ea[i] + eb[i];
                    if s > self.caps[i] {
                        continue 'inner;
                    }
                    key[i] = s;
                }
                let prod = ca.clone() * cb.clone();
                match acc.get_mut(&key) {
                    Some(v) => *v = v.clone() + prod,
                    None => {
                        acc.insert(key.clone(), prod);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero_scalar());
        TruncSeries { caps: self.caps.clone(), coeffs: acc, zero: self.zero.clone() }
    }

    /// Multiplicative inverse up to the caps; the constant term must be a unit.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let c0_inv = c0.inverse().ok_or(Error::ZeroConstantTerm)?;
        // self = c0 (1 + t) with t free of constant term.
        let mut t = self.scale(&c0_inv);
        t.set(vec![0; self.caps.len()], self.zero.clone());
        let neg_t = t.neg();
        let max_deg: u32 = self.caps.iter().sum();
        let mut acc = Self::one(self.caps.clone(), &self.zero);
        let mut power = Self::one(self.caps.clone(), &self.zero);
        for _ in 0..max_deg {
            power = power.mul(&neg_t);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.scale(&c0_inv))
    }

    /// `exp(Σ c_i x_i)` truncated: the coefficient of `x^α` is `Π c_i^{α_i} / α_i!`.
    pub fn exp_linear_form(coeffs: &[S], caps: Vec<u32>) -> Self {
        assert_eq!(coeffs.len(), caps.len());
        let proto = coeffs.first().expect("at least one variable").clone();
        // Per-variable one-dimensional rows, then their tensor product.
        let rows: Vec<Vec<S>> = coeffs
            .iter()
            .zip(&caps)
            .map(|(c, &cap)| {
                let mut row = Vec::with_capacity(cap as usize + 1);
                let mut pow = proto.one_like();
                for a in 0..=cap {
                    let inv_fact = Rational::new(BigInt::from(1), factorial(a));
                    row.push(pow.scale(&inv_fact));
                    pow = pow * c.clone();
                }
                row
            })
            .collect();
        let mut out = Self::zero(caps.clone(), &proto);
        let mut idx = vec![0u32; caps.len()];
        loop {
            let mut c = proto.one_like();
            for (i, &a) in idx.iter().enumerate() {
                c = c * rows[i][a as usize].clone();
            }
            out.set(idx.clone(), c);
            if !next_multi_index(&mut idx, &caps) {
                break;
            }
        }
        out
    }
}

/// Advances `idx` through the box `0..=caps` in odometer order; `false` once exhausted.
pub(crate) fn next_multi_index(idx: &mut [u32], caps: &[u32]) -> bool {
    for i in 0..idx.len() {
        if idx[i] < caps[i] {
            idx[i] += 1;
            return true;
        }
        idx[i] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, QuadScalar};
    use num_traits::Zero;

    #[test]
    fn invert_geometric() {
        let mut s = TruncSeries::one(vec![3], &int(0));
        s.set(vec![1], int(-1));
        let inv = s.invert().unwrap();
        for k in 0..=3 {
            assert_eq!(inv.coeff(&[k]), int(1));
        }
    }

    #[test]
    fn invert_constant_and_zero() {
        let s = TruncSeries::constant(vec![2, 2], int(2));
        assert_eq!(s.invert().unwrap().constant_term(), rat(1, 2));
        let z = TruncSeries::zero(vec![2], &int(0));
        assert!(matches!(z.invert(), Err(Error::ZeroConstantTerm)));
    }

    #[test]
    fn exp_inverse_is_exp_of_negation() {
        let e = TruncSeries::exp_linear_form(&[int(1)], vec![6]);
        let inv = e.invert().unwrap();
        let expected = TruncSeries::exp_linear_form(&[int(-1)], vec![6]);
        assert_eq!(inv, expected);
        let prod = e.mul(&inv);
        assert_eq!(prod, TruncSeries::one(vec![6], &int(0)));
    }

    #[test]
    fn exp_small_cases() {
        let e = TruncSeries::exp_linear_form(&[int(0), int(0)], vec![3, 3]);
        assert_eq!(e, TruncSeries::one(vec![3, 3], &int(0)));
        let e = TruncSeries::exp_linear_form(&[int(1)], vec![2]);
        assert_eq!(e.coeff(&[2]), rat(1, 2));
    }

    #[test]
    fn galois_symmetric_exponential_has_rational_symmetric_part() {
        // φ and its conjugate; the symmetrised coefficients are rational.
        let phi = QuadScalar::new(rat(1, 2), rat(1, 2), 5);
        let e = TruncSeries::exp_linear_form(&[phi.clone(), phi.conjugate()], vec![4, 4]);
        for i in 0..=4u32 {
            for j in 0..=4u32 {
                let s = e.coeff(&[i, j]) + e.coeff(&[j, i]);
                assert!(s.b.is_zero(), "({i},{j}) symmetric part irrational");
                if i == j {
                    assert!(e.coeff(&[i, i]).b.is_zero());
                }
            }
        }
        assert!(!Rational::is_zero(&e.coeff(&[1, 0]).b));
    }
}
