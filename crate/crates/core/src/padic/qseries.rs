use std::collections::HashMap;

use num_traits::{One, Zero};

use super::scalar::{PadicCtx, PadicScalar};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// Truncated power series in `T₁,…,Tₙ` (`Tᵢ = qᵢ − 1`) with coefficients in
/// `ℤ/p^M`, stored densely with a degree cap per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    ctx: PadicCtx,
    caps: Vec<u32>,
    strides: Vec<usize>,
    data: Vec<u64>,
}

fn strides_for(caps: &[u32]) -> (Vec<usize>, usize) {
    let mut strides = vec![0; caps.len()];
    let mut size = 1usize;
    for i in (0..caps.len()).rev() {
        strides[i] = size;
        size *= caps[i] as usize + 1;
    }
    (strides, size)
}

impl QSeries {
    pub fn zero(ctx: PadicCtx, caps: Vec<u32>) -> Self {
        let (strides, size) = strides_for(&caps);
        QSeries { ctx, caps, strides, data: vec![0; size] }
    }

    pub fn constant(ctx: PadicCtx, caps: Vec<u32>, c: u64) -> Self {
        let mut s = Self::zero(ctx, caps);
        s.data[0] = c % ctx.modulus;
        s
    }

    pub fn one(ctx: PadicCtx, caps: Vec<u32>) -> Self {
        Self::constant(ctx, caps, 1)
    }

    pub fn ctx(&self) -> PadicCtx {
        self.ctx
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    pub fn nvars(&self) -> usize {
        self.caps.len()
    }

    fn index(&self, e: &[u32]) -> Option<usize> {
        let mut idx = 0;
        for ((&x, &c), &s) in e.iter().zip(&self.caps).zip(&self.strides) {
            if x > c {
                return None;
            }
            idx += x as usize * s;
        }
        Some(idx)
    }

    fn exponent(&self, mut idx: usize) -> Vec<u32> {
        self.strides
            .iter()
            .map(|&s| {
                let x = idx / s;
                idx %= s;
                x as u32
            })
            .collect()
    }

    pub fn get(&self, e: &[u32]) -> u64 {
        self.index(e).map_or(0, |i| self.data[i])
    }

    pub fn set(&mut self, e: &[u32], v: u64) {
        if let Some(i) = self.index(e) {
            self.data[i] = v % self.ctx.modulus;
        }
    }

    /// Mahler coefficient `∫ binom(x, k) dμ`.
    pub fn coefficient(&self, e: &[u32]) -> Result<PadicScalar> {
        if e.len() != self.caps.len() {
            return Err(Error::DimensionMismatch("exponent length".into()));
        }
        let i = self.index(e).ok_or_else(|| Error::OutOfCaps(e.to_vec()))?;
        Ok(self.ctx.scalar(self.data[i]))
    }

    pub fn constant_term(&self) -> u64 {
        self.data[0]
    }

    pub fn terms(&self) -> impl Iterator<Item = (Vec<u32>, u64)> + '_ {
        self.data.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (self.exponent(i), c))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0)
    }

    /// Same series at smaller caps.
    pub fn truncate(&self, caps: &[u32]) -> QSeries {
        assert!(caps.iter().zip(&self.caps).all(|(a, b)| a <= b), "truncate can only lower caps");
        let mut out = QSeries::zero(self.ctx, caps.to_vec());
        for i in 0..out.data.len() {
            let e = out.exponent(i);
            out.data[i] = self.get(&e);
        }
        out
    }

    pub fn add(&self, o: &QSeries) -> QSeries {
        assert_eq!(self.caps, o.caps);
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&o.data) {
            *a = self.ctx.add(*a, b);
        }
        out
    }

    pub fn add_scaled(&mut self, o: &QSeries, k: u64) {
        assert_eq!(self.caps, o.caps);
        if k == 0 {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&o.data) {
            if b != 0 {
                *a = self.ctx.add(*a, self.ctx.mul(b, k));
            }
        }
    }

    pub fn sub(&self, o: &QSeries) -> QSeries {
        assert_eq!(self.caps, o.caps);
        let mut out = self.clone();
        for (a, &b) in out.data.iter_mut().zip(&o.data) {
            *a = self.ctx.sub(*a, b);
        }
        out
    }

    pub fn neg(&self) -> QSeries {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = self.ctx.neg(*a);
        }
        out
    }

    pub fn scale(&self, k: u64) -> QSeries {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a = self.ctx.mul(*a, k);
        }
        out
    }

    /// Truncated product.
    pub fn mul(&self, o: &QSeries) -> QSeries {
        assert_eq!(self.caps, o.caps);
        let n = self.caps.len();
        let mut out = QSeries::zero(self.ctx, self.caps.clone());
        let modulus = self.ctx.modulus as u128;
        let mut acc = vec![0u128; out.data.len()];
        let nz_b: Vec<(Vec<u32>, usize, u64)> =
            o.data.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (o.exponent(i), i, c)).collect();
        for (ia, &ca) in self.data.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            let ea = self.exponent(ia);
            'b: for (eb, ib, cb) in &nz_b {
                for k in 0..n {
                    if ea[k] + eb[k] > self.caps[k] {
                        continue 'b;
                    }
                }
                let slot = &mut acc[ia + ib];
                *slot += ca as u128 * *cb as u128;
                if *slot >= (1u128 << 120) {
                    *slot %= modulus;
                }
            }
        }
        for (d, a) in out.data.iter_mut().zip(acc) {
            *d = (a % modulus) as u64;
        }
        out
    }

    /// Inverse when the constant term is a unit.
    pub fn invert(&self) -> Result<QSeries> {
        let c0 = self.ctx.inverse(self.data[0]).ok_or(Error::ZeroConstantTerm)?;
        let mut t = self.scale(c0);
        t.data[0] = 0;
        let neg_t = t.neg();
        let mut acc = QSeries::one(self.ctx, self.caps.clone());
        let mut power = acc.clone();
        let max_deg: u32 = self.caps.iter().sum();
        for _ in 0..max_deg {
            power = power.mul(&neg_t);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.scale(c0))
    }

    /// `Σ_k binom(e, k) T_var^k` for a `p`-integral exponent `e`.
    pub fn binomial_power(ctx: PadicCtx, caps: Vec<u32>, var: usize, e: &Rational) -> Result<QSeries> {
        let row = binomial_row(ctx, e, caps[var])?;
        let mut out = QSeries::zero(ctx, caps);
        let mut ex = vec![0u32; out.caps.len()];
        for (k, c) in row.into_iter().enumerate() {
            ex[var] = k as u32;
            out.set(&ex, c);
        }
        Ok(out)
    }

    /// `q^x = Π (1+Tⱼ)^{xⱼ}`.
    pub fn q_power(ctx: PadicCtx, caps: Vec<u32>, x: &[Rational]) -> Result<QSeries> {
        let rows: Vec<Vec<u64>> =
            x.iter().zip(&caps).map(|(e, &c)| binomial_row(ctx, e, c)).collect::<Result<_>>()?;
        Ok(QSeries::outer(ctx, caps, &rows))
    }

    /// `Π_j rowⱼ(Tⱼ)` for univariate rows.
    pub fn outer(ctx: PadicCtx, caps: Vec<u32>, rows: &[Vec<u64>]) -> QSeries {
        let mut out = QSeries::zero(ctx, caps);
        for i in 0..out.data.len() {
            let e = out.exponent(i);
            let mut c = 1;
            for (j, &k) in e.iter().enumerate() {
                c = ctx.mul(c, rows[j][k as usize]);
                if c == 0 {
                    break;
                }
            }
            out.data[i] = c;
        }
        out
    }

    /// Exact quotient by `T_var`, lowering that cap by one.
    pub fn divide_by_var(&self, var: usize) -> Result<QSeries> {
        let mut caps = self.caps.clone();
        if caps[var] == 0 {
            return Err(Error::PrecisionExhausted("cannot divide a degree-0 truncation".into()));
        }
        caps[var] -= 1;
        let mut out = QSeries::zero(self.ctx, caps);
        for i in 0..self.data.len() {
            let mut e = self.exponent(i);
            if e[var] == 0 {
                if self.data[i] != 0 {
                    return Err(Error::PoleDetected(var));
                }
                continue;
            }
            e[var] -= 1;
            out.set(&e, self.data[i]);
        }
        Ok(out)
    }

    /// `(1+T_j)∂/∂T_j`, which sends `q^v` to `v_j q^v`; lowers cap `j` by one.
    pub fn theta(&self, j: usize) -> Result<QSeries> {
        let mut caps = self.caps.clone();
        if caps[j] == 0 {
            return Err(Error::PrecisionExhausted("series caps too small for the moment".into()));
        }
        caps[j] -= 1;
        let mut out = QSeries::zero(self.ctx, caps);
        for i in 0..out.data.len() {
            let mut e = out.exponent(i);
            let k = e[j] as u64;
            let a = self.get(&e);
            e[j] += 1;
            let b = self.get(&e);
            out.data[i] = self.ctx.add(self.ctx.mul(a, k % self.ctx.modulus), self.ctx.mul(b, (k + 1) % self.ctx.modulus));
        }
        Ok(out)
    }

    /// `F(S₁,…,S_r)` with each `Sᵢ` replaced by a series without constant
    /// term; `self` is in the `S` variables, the result has the caps of
    /// the substitutes.
    pub fn substitute(&self, subs: &[QSeries]) -> QSeries {
        assert_eq!(subs.len(), self.caps.len());
        let target = subs[0].caps.clone();
        let max_total: u32 = target.iter().sum();
        // Powers Sᵢ^k for the leaf variable, Horner for the others.
        let last = self.caps.len() - 1;
        let leaf_cap = self.caps[last].min(max_total);
        let mut leaf_pows = vec![QSeries::one(self.ctx, target.clone())];
        for k in 1..=leaf_cap as usize {
            let next = leaf_pows[k - 1].mul(&subs[last]);
            leaf_pows.push(next);
        }
        let mut prefix = Vec::with_capacity(last);
        self.substitute_rec(subs, &leaf_pows, &mut prefix, 0, max_total)
    }

    fn substitute_rec(
        &self,
        subs: &[QSeries],
        leaf_pows: &[QSeries],
        prefix: &mut Vec<u32>,
        var: usize,
        budget: u32,
    ) -> QSeries {
        let target = subs[0].caps.clone();
        let last = self.caps.len() - 1;
        if var == last {
            let mut out = QSeries::zero(self.ctx, target);
            let mut e = prefix.clone();
            e.push(0);
            for k in 0..=self.caps[last].min(budget) {
                e[last] = k;
                let c = self.get(&e);
                if c != 0 {
                    out.add_scaled(&leaf_pows[k as usize], c);
                }
            }
            return out;
        }
        let top = self.caps[var].min(budget);
        let mut acc = QSeries::zero(self.ctx, target);
        for k in (0..=top).rev() {
            prefix.push(k);
            let inner = self.substitute_rec(subs, leaf_pows, prefix, var + 1, budget - k);
            prefix.pop();
            acc = acc.mul(&subs[var]).add(&inner);
        }
        acc
    }
}

/// `binom(e, k) mod p^M` for `k = 0..=cap`, computed exactly.
pub fn binomial_row(ctx: PadicCtx, e: &Rational, cap: u32) -> Result<Vec<u64>> {
    let mut row = Vec::with_capacity(cap as usize + 1);
    let mut c = Rational::one();
    for k in 0..=cap {
        if k > 0 {
            c = c * (e - Rational::from_integer((k - 1).into())) / Rational::from_integer(k.into());
        }
        if c.is_zero() {
            row.push(0);
            continue;
        }
        row.push(ctx.from_rational(&c).ok_or_else(|| Error::InvalidInput(format!("exponent {e} is not p-integral")))?);
    }
    Ok(row)
}

/// Memoized binomial rows keyed by exponent.
#[derive(Default)]
pub struct BinomialCache {
    rows: HashMap<(Rational, u32), Vec<u64>>,
}

impl BinomialCache {
    pub fn row(&mut self, ctx: PadicCtx, e: &Rational, cap: u32) -> Result<&Vec<u64>> {
        let key = (e.clone(), cap);
        if !self.rows.contains_key(&key) {
            let r = binomial_row(ctx, e, cap)?;
            self.rows.insert(key.clone(), r);
        }
        Ok(&self.rows[&key])
    }
}
