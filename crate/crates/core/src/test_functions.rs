//! Test functions: finite integer combinations of indicators of affine
//! lattices in `ℚⁿ`, with Haar measure, line projections, the vanishing
//! hypothesis and restriction to `p`-adic level sets.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{int_valuation, is_p_integral, reduce_mod, valuation, Rational};
use crate::linalg::{
    affine_preimage, coset_representatives, covolume, in_lattice, lattice_from_generators, lattice_intersection,
    vec_add, vec_sub, QMatrix, QVec,
};

/// Largest coset enumeration attempted by the finite decision procedures.
pub const ENUMERATION_GUARD: u128 = 1_000_000;

/// `coeff · [offset + lattice·ℤⁿ]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineLatticeTerm {
    pub coeff: i64,
    pub offset: QVec,
    pub lattice: QMatrix,
    inverse: QMatrix,
}

impl AffineLatticeTerm {
    pub fn new(coeff: i64, offset: QVec, lattice: QMatrix) -> Result<Self> {
        if !lattice.is_square() || lattice.rows() != offset.len() {
            return Err(Error::DimensionMismatch("lattice term".into()));
        }
        let inverse = lattice.inverse()?;
        Ok(AffineLatticeTerm { coeff, offset, lattice, inverse })
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        in_lattice(&self.inverse, &vec_sub(v, &self.offset))
    }

    pub fn lattice_inverse(&self) -> &QMatrix {
        &self.inverse
    }

    /// Whether the `p`-adic closure of the term is the whole of `ℤ_pⁿ`.
    fn certified_at(&self, p: u64) -> bool {
        let det = self.lattice.det();
        self.lattice.columns().iter().flatten().all(|x| is_p_integral(x, p))
            && valuation(&det, p) == Some(0)
            && self.offset.iter().all(|x| is_p_integral(x, p))
    }
}

/// Finite `ℤ`-combination of affine-lattice indicators on `ℚⁿ`.
///
/// With `away_from_p = Some(p)` every term is certified to have `p`-adic
/// closure `ℤ_pⁿ`, so the function is `f′ ⊗ [ℤ_pⁿ]` for a test function `f′`
/// away from `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TestFunction {
    dim: usize,
    terms: Vec<AffineLatticeTerm>,
    away_from_p: Option<u64>,
}

impl TestFunction {
    pub fn zero(dim: usize) -> Self {
        TestFunction { dim, terms: Vec::new(), away_from_p: None }
    }

    pub fn from_terms(dim: usize, terms: Vec<AffineLatticeTerm>) -> Result<Self> {
        if terms.iter().any(|t| t.dim() != dim) {
            return Err(Error::DimensionMismatch("test function terms".into()));
        }
        Ok(TestFunction { dim, terms, away_from_p: None })
    }

    /// `[offset + lattice·ℤⁿ]`.
    pub fn indicator(offset: QVec, lattice: QMatrix) -> Result<Self> {
        let dim = offset.len();
        Self::from_terms(dim, vec![AffineLatticeTerm::new(1, offset, lattice)?])
    }

    /// `[ℤⁿ]`.
    pub fn standard_lattice(n: usize) -> Self {
        Self::indicator(vec![Rational::zero(); n], QMatrix::identity(n)).unwrap()
    }

    /// One-dimensional `[a + fℤ]`.
    pub fn progression(a: Rational, f: Rational) -> Result<Self> {
        Self::indicator(vec![a], QMatrix::from_rows(vec![vec![f]]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[AffineLatticeTerm] {
        &self.terms
    }

    pub fn away_from_p(&self) -> Option<u64> {
        self.away_from_p
    }

    /// Attaches the away-from-`p` certificate, checking every term.
    pub fn certify_away_from(mut self, p: u64) -> Result<Self> {
        if self.terms.iter().all(|t| t.certified_at(p)) {
            self.away_from_p = Some(p);
            Ok(self)
        } else {
            Err(Error::NotAwayFromP(p))
        }
    }

    pub fn add(&self, other: &TestFunction) -> TestFunction {
        assert_eq!(self.dim, other.dim);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        let away = if self.away_from_p == other.away_from_p { self.away_from_p } else { None };
        TestFunction { dim: self.dim, terms, away_from_p: away }
    }

    pub fn scale(&self, k: i64) -> TestFunction {
        let terms = self
            .terms
            .iter()
            .map(|t| AffineLatticeTerm { coeff: t.coeff * k, ..t.clone() })
            .filter(|t| t.coeff != 0)
            .collect();
        TestFunction { dim: self.dim, terms, away_from_p: self.away_from_p }
    }

    pub fn sub(&self, other: &TestFunction) -> TestFunction {
        self.add(&other.scale(-1))
    }

    /// `v ↦ f(v − t)`.
    pub fn translate(&self, t: &[Rational]) -> TestFunction {
        let terms = self
            .terms
            .iter()
            .map(|x| AffineLatticeTerm { offset: vec_add(&x.offset, t), ..x.clone() })
            .collect();
        TestFunction { dim: self.dim, terms, away_from_p: None }
    }

    pub fn eval(&self, v: &[Rational]) -> i64 {
        self.terms.iter().filter(|t| t.contains(v)).map(|t| t.coeff).sum()
    }

    pub fn is_identically_zero(&self) -> Result<bool> {
        if self.terms.is_empty() {
            return Ok(true);
        }
        let (reps, _) = self.support_cosets()?;
        Ok(reps.iter().all(|v| self.eval(v) == 0))
    }

    /// Common period lattice `L_f` (intersection of all term lattices).
    pub fn period_lattice(&self) -> Result<QMatrix> {
        if self.terms.is_empty() {
            return Ok(QMatrix::identity(self.dim));
        }
        let bases: Vec<QMatrix> = self.terms.iter().map(|t| t.lattice.clone()).collect();
        lattice_intersection(&bases)
    }

    /// Lattice generated by all term lattices and offsets; contains the support.
    pub fn support_lattice(&self) -> Result<QMatrix> {
        let mut gens: Vec<QVec> = Vec::new();
        for t in &self.terms {
            gens.extend(t.lattice.columns());
            gens.push(t.offset.clone());
        }
        if gens.is_empty() {
            return Ok(QMatrix::identity(self.dim));
        }
        lattice_from_generators(&gens, self.dim)
    }

    /// Representatives of `Λ_all / L_f` together with `L_f`.
    pub fn support_cosets(&self) -> Result<(Vec<QVec>, QMatrix)> {
        let lf = self.period_lattice()?;
        let all = self.support_lattice()?;
        Ok((coset_representatives(&all, &lf, ENUMERATION_GUARD)?, lf))
    }
}

/// Haar measure `h_V(f)` normalized by `h_V([ℤⁿ]) = 1`.
pub fn haar(f: &TestFunction) -> Rational {
    f.terms
        .iter()
        .fold(Rational::zero(), |acc, t| acc + Rational::from_integer(t.coeff.into()) / covolume(&t.lattice))
}

/// Haar measure by averaging over one period: `Σ_{v ∈ Λ/L_f} f(v) / covol(L_f)`.
pub fn haar_by_periods(f: &TestFunction) -> Result<Rational> {
    let (reps, lf) = f.support_cosets()?;
    let total: i64 = reps.iter().map(|v| f.eval(v)).sum();
    Ok(Rational::from_integer(total.into()) / covolume(&lf))
}

/// `π_{v,w} f : x ↦ f(v + x·w)` as a one-dimensional test function.
pub fn project(f: &TestFunction, v: &[Rational], w: &[Rational]) -> Result<TestFunction> {
    if w.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroDirection);
    }
    let mut terms = Vec::new();
    for t in &f.terms {
        let k = QMatrix::from_columns(&[t.inverse.mul_vec(w)]);
        let b = t.inverse.mul_vec(&vec_sub(&t.offset, v));
        if let Some((x0, basis)) = affine_preimage(&k, &b)? {
            terms.push(AffineLatticeTerm::new(t.coeff, x0, basis)?);
        }
    }
    TestFunction::from_terms(1, terms)
}

/// Pullback `λ ↦ f(B·λ)` along an injective linear map `B: ℚʳ → ℚⁿ`.
pub fn pullback_linear(f: &TestFunction, b: &QMatrix) -> Result<TestFunction> {
    if b.rows() != f.dim {
        return Err(Error::DimensionMismatch("pullback map".into()));
    }
    let mut terms = Vec::new();
    for t in &f.terms {
        let k = t.inverse.mul(b);
        let off = t.inverse.mul_vec(&t.offset);
        if let Some((x0, basis)) = affine_preimage(&k, &off)? {
            terms.push(AffineLatticeTerm::new(t.coeff, x0, basis)?);
        }
    }
    TestFunction::from_terms(b.cols(), terms)
}

/// Whether every line average `h(π_{v,w} F)` vanishes, `v` ranging over
/// `Λ_all / L_F`. `F` is taken as given (no certificate needed).
pub fn line_averages_vanish(f: &TestFunction, w: &[Rational]) -> Result<bool> {
    if w.iter().all(|x| x.is_zero()) {
        return Err(Error::ZeroDirection);
    }
    if f.terms.is_empty() {
        return Ok(true);
    }
    let (reps, _) = f.support_cosets()?;
    for v in reps {
        if !haar(&project(f, &v, w)?).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The vanishing hypothesis for `f′` in direction `w`; `f` must carry the
/// away-from-`p` certificate, so that it represents `f′ ⊗ [L_p]`.
pub fn vanishing_check(f: &TestFunction, w: &[Rational]) -> Result<bool> {
    if f.away_from_p.is_none() {
        return Err(Error::NotAwayFromP(0));
    }
    line_averages_vanish(f, w)
}

/// Compact open `⋃ (a + p^m ℤ_pⁿ)` of `ℤ_pⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLevelSet {
    pub p: u64,
    pub m: u32,
    pub dim: usize,
    pub offsets: Vec<Vec<BigInt>>,
}

impl PLevelSet {
    pub fn full(p: u64, dim: usize) -> Self {
        PLevelSet { p, m: 0, dim, offsets: vec![vec![BigInt::zero(); dim]] }
    }

    pub fn coset(p: u64, m: u32, a: Vec<BigInt>) -> Self {
        let modulus = BigInt::from(p).pow(m);
        let a = a.into_iter().map(|x| ((x % &modulus) + &modulus) % &modulus).collect::<Vec<_>>();
        PLevelSet { p, m, dim: a.len(), offsets: vec![a] }
    }

    /// All residues `x mod p^m` with `pred(x)`.
    pub fn from_predicate(p: u64, m: u32, dim: usize, pred: impl Fn(&[BigInt]) -> bool) -> Self {
        let modulus: u64 = p.pow(m);
        let mut offsets = Vec::new();
        let mut idx = vec![0u64; dim];
        loop {
            let x: Vec<BigInt> = idx.iter().map(|&i| BigInt::from(i)).collect();
            if pred(&x) {
                offsets.push(x);
            }
            let mut k = 0;
            loop {
                if k == dim {
                    return PLevelSet { p, m, dim, offsets };
                }
                idx[k] += 1;
                if idx[k] < modulus {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.p).pow(self.m)
    }

    pub fn is_full(&self) -> bool {
        self.m == 0 && !self.offsets.is_empty()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        let modulus = self.modulus();
        let Some(r) = v.iter().map(|x| reduce_mod(x, &modulus)).collect::<Option<Vec<_>>>() else {
            return false;
        };
        self.offsets.contains(&r)
    }
}

/// `f′ ⊗ [U]`: each term `o + Λℤⁿ` meets `a + p^mℤ_pⁿ` in `o + Λy₀ + p^mΛℤⁿ`.
pub fn tensor_at_p(f: &TestFunction, u: &PLevelSet) -> Result<TestFunction> {
    let p = f.away_from_p.ok_or(Error::NotAwayFromP(u.p))?;
    if p != u.p || u.dim != f.dim {
        return Err(Error::NotAwayFromP(u.p));
    }
    if u.m == 0 {
        return Ok(if u.offsets.is_empty() { TestFunction::zero(f.dim) } else { f.clone() });
    }
    let modulus = u.modulus();
    let pm = Rational::from_integer(modulus.clone());
    let mut terms = Vec::new();
    for t in &f.terms {
        let fine = t.lattice.scale(&pm);
        for a in &u.offsets {
            let a_q: QVec = a.iter().map(|x| Rational::from_integer(x.clone())).collect();
            let y = t.inverse.mul_vec(&vec_sub(&a_q, &t.offset));
            let y0: QVec = y
                .iter()
                .map(|x| reduce_mod(x, &modulus).map(Rational::from_integer).ok_or(Error::NotAwayFromP(p)))
                .collect::<Result<_>>()?;
            let off = vec_add(&t.offset, &t.lattice.mul_vec(&y0));
            terms.push(AffineLatticeTerm::new(t.coeff, off, fine.clone())?);
        }
    }
    TestFunction::from_terms(f.dim, terms)
}

/// Least `a > 0` with `a·v ∈ L_f`.
pub fn period_along(f: &TestFunction, v: &[Rational]) -> Result<Rational> {
    let lf = f.period_lattice()?;
    let k = QMatrix::from_columns(&[lf.inverse()?.mul_vec(v)]);
    match affine_preimage(&k, &vec![Rational::zero(); f.dim])? {
        Some((_, basis)) => Ok(basis.get(0, 0).abs()),
        None => unreachable!("zero is always a solution"),
    }
}

/// Nonzero values of `f` on the half-open parallelepiped
/// `{B·λ : λ ∈ (0,1]^r}`, assuming the columns of `B` are periods of `f`.
/// Points are keyed by `λ`.
pub fn parallelepiped_values(f: &TestFunction, b: &QMatrix, limit: u128) -> Result<BTreeMap<QVec, i64>> {
    let r = b.cols();
    let mut out: BTreeMap<QVec, i64> = BTreeMap::new();
    let mut count: u128 = 0;
    for t in &f.terms {
        let k = t.inverse.mul(b);
        let off = t.inverse.mul_vec(&t.offset);
        let Some((x0, basis)) = affine_preimage(&k, &off)? else {
            continue;
        };
        let reps = coset_representatives(&basis, &QMatrix::identity(r), limit)?;
        count += reps.len() as u128;
        if count > limit {
            return Err(Error::UnboundedEnumeration { count, limit });
        }
        for rep in reps {
            let lam: QVec = vec_add(&x0, &rep).iter().map(|x| x - x.ceil() + Rational::one()).collect();
            *out.entry(lam).or_insert(0) += t.coeff;
        }
    }
    out.retain(|_, v| *v != 0);
    Ok(out)
}

/// `(f|γ)(v) = f(γv)`.
pub fn gl_act_test(g: &QMatrix, f: &TestFunction) -> Result<TestFunction> {
    let gi = g.inverse()?;
    let terms = f
        .terms
        .iter()
        .map(|t| AffineLatticeTerm::new(t.coeff, gi.mul_vec(&t.offset), gi.mul(&t.lattice)))
        .collect::<Result<Vec<_>>>()?;
    let out = TestFunction::from_terms(f.dim, terms)?;
    Ok(match f.away_from_p {
        Some(p) => out.clone().certify_away_from(p).unwrap_or(out),
        None => out,
    })
}

/// Whether `f|γ` and `f` agree as functions.
pub fn stabilizes(g: &QMatrix, f: &TestFunction) -> Result<bool> {
    let diff = gl_act_test(g, f)?.sub(f);
    diff.is_identically_zero()
}

/// `(g₁ ⊗ g₂)(x, y) = g₁(x)·g₂(y)`.
pub fn tensor_product(a: &TestFunction, b: &TestFunction) -> Result<TestFunction> {
    let n = a.dim + b.dim;
    let mut terms = Vec::new();
    for s in &a.terms {
        for t in &b.terms {
            let mut lat = QMatrix::zeros(n, n);
            for i in 0..a.dim {
                for j in 0..a.dim {
                    lat.set(i, j, s.lattice.get(i, j).clone());
                }
            }
            for i in 0..b.dim {
                for j in 0..b.dim {
                    lat.set(a.dim + i, a.dim + j, t.lattice.get(i, j).clone());
                }
            }
            let mut off = s.offset.clone();
            off.extend(t.offset.iter().cloned());
            terms.push(AffineLatticeTerm::new(s.coeff * t.coeff, off, lat)?);
        }
    }
    TestFunction::from_terms(n, terms)
}

/// `p`-adic valuation of the index `[ℤ_pⁿ : Λ ⊗ ℤ_p]` for an integral basis.
pub fn p_index_valuation(lattice: &QMatrix, p: u64) -> Option<u32> {
    let d = lattice.det();
    if d.is_zero() || !d.is_integer() {
        return None;
    }
    Some(int_valuation(&d.to_integer(), p))
}
