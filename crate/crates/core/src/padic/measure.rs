use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::qseries::{BinomialCache, QSeries};
use super::scalar::{PadicCtx, PadicScalar};
use crate::cones::{ConeFunction, OpenCone};
use crate::error::{Error, Result};
use crate::exact::{int_valuation, reduce_mod, valuation, Rational};
use crate::linalg::{primitive_vector, to_qvec, vec_add, QMatrix, QVec};
use crate::test_functions::{
    line_averages_vanish, parallelepiped_values, period_along, pullback_linear, tensor_at_p, vanishing_check,
    PLevelSet, TestFunction, ENUMERATION_GUARD,
};

/// Largest coset count allowed when the `T`-coordinate basis has index
/// divisible by `p`, as a power of `p`.
pub const INDEX_GUARD_EXPONENT: u32 = 6;

/// Data a pseudo-measure was built from, kept for the vanishing-route check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureSource {
    pub f: TestFunction,
    pub cone: OpenCone,
    pub level: PLevelSet,
}

/// `q^{v₀} Σ c·q^v / Π (1 − q^{a·d})` on `ℤ_pⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoMeasure {
    pub dim: usize,
    pub p: u64,
    pub offset: QVec,
    pub numerator: Vec<(i64, QVec)>,
    /// Pairs `(a, d)` with `a` a `p`-adic unit and `d` `p`-integral.
    pub denominators: Vec<(Rational, QVec)>,
    pub source: Option<MeasureSource>,
}

impl PseudoMeasure {
    pub fn new(
        p: u64,
        offset: QVec,
        numerator: Vec<(i64, QVec)>,
        denominators: Vec<(Rational, QVec)>,
    ) -> Result<Self> {
        let dim = offset.len();
        let pint = |v: &QVec| v.len() == dim && v.iter().all(|x| crate::exact::is_p_integral(x, p));
        if !pint(&offset) || !numerator.iter().all(|(_, v)| pint(v)) {
            return Err(Error::InvalidInput("exponents must be p-integral".into()));
        }
        for (a, d) in &denominators {
            if !pint(d) || d.iter().all(|x| x.is_zero()) {
                return Err(Error::InvalidInput("denominator vectors must be nonzero and p-integral".into()));
            }
            if valuation(a, p) != Some(0) {
                return Err(Error::NonUnitScaling(a.to_string()));
            }
        }
        Ok(PseudoMeasure { dim, p, offset, numerator, denominators, source: None })
    }

    /// Dirac measure `δ_v`.
    pub fn dirac(p: u64, v: QVec) -> Result<Self> {
        let n = v.len();
        Self::new(p, vec![Rational::zero(); n], vec![(1, v)], Vec::new())
    }

    /// `ξ` on `ℤ_p` with `(δ₀ − δ₁) ∗ ξ = δ₀`, i.e. `1/(1 − q)`.
    pub fn xi(p: u64) -> Self {
        Self::new(p, vec![Rational::zero()], vec![(1, vec![Rational::zero()])], vec![(Rational::one(), vec![Rational::one()])])
            .unwrap()
    }

    pub fn rank(&self) -> usize {
        self.denominators.len()
    }
}

/// `μ_{f′,C,U}` with Amice transform `Σ_{v∈C} (f′⊗[U])(v) q^v`.
pub fn pseudo_from_cone(f: &TestFunction, c: &OpenCone, u: &PLevelSet) -> Result<PseudoMeasure> {
    let p = f.away_from_p().ok_or(Error::NotAwayFromP(u.p))?;
    let big_f = tensor_at_p(f, u)?;
    let n = f.dim();
    let mut scaled = Vec::new();
    let mut dens = Vec::new();
    for g in c.generators() {
        let d = to_qvec(&primitive_vector(g));
        let a = period_along(&big_f, &d)?;
        let e = valuation(&a, p).expect("period is nonzero");
        if e < 0 {
            return Err(Error::NonUnitScaling(a.to_string()));
        }
        let pe = Rational::from_integer(BigInt::from(p).pow(e as u32));
        let unit = &a / &pe;
        debug_assert_eq!(valuation(&unit, p), Some(0));
        let gi: QVec = d.iter().map(|x| x * &pe).collect();
        scaled.push(d.iter().map(|x| x * &a).collect::<QVec>());
        dens.push((unit, gi));
    }
    let b = QMatrix::from_columns(&scaled);
    let numerator = parallelepiped_values(&big_f, &b, ENUMERATION_GUARD)?
        .into_iter()
        .map(|(lam, val)| (val, b.mul_vec(&lam)))
        .collect();
    let mut pm = PseudoMeasure::new(p, vec![Rational::zero(); n], numerator, dens)?;
    pm.source = Some(MeasureSource { f: f.clone(), cone: c.clone(), level: u.clone() });
    Ok(pm)
}

/// Weighted pseudo-measures of a cone function; the constant term is
/// carried as a multiple of `δ₀`.
#[derive(Clone, Debug)]
pub struct SignedPseudoMeasures {
    pub terms: Vec<(i64, PseudoMeasure)>,
    pub delta0: i64,
}

pub fn pseudo_from_cone_function(f: &TestFunction, kappa: &ConeFunction, u: &PLevelSet) -> Result<SignedPseudoMeasures> {
    let terms = kappa
        .terms
        .iter()
        .map(|(w, c)| Ok((*w, pseudo_from_cone(f, c, u)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SignedPseudoMeasures { terms, delta0: kappa.constant })
}

/// The basis `D = [g₁,…,g_r, completion]` used for the `S`-coordinates,
/// with completion vectors chosen to minimize `v_p(det D)`.
fn coordinate_basis(pm: &PseudoMeasure) -> Result<QMatrix> {
    let n = pm.dim;
    let r = pm.rank();
    let gens: Vec<QVec> = pm.denominators.iter().map(|(_, d)| d.clone()).collect();
    let std = QMatrix::identity(n).columns();
    let mut best: Option<(i64, QMatrix)> = None;
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != n - r {
            continue;
        }
        let mut cols = gens.clone();
        cols.extend((0..n).filter(|j| mask & (1 << j) != 0).map(|j| std[j].clone()));
        let d = QMatrix::from_columns(&cols);
        let det = d.det();
        if det.is_zero() {
            continue;
        }
        let v = valuation(&det, pm.p).unwrap();
        if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
            best = Some((v, d));
        }
    }
    let (v, d) = best.ok_or(Error::DependentGenerators)?;
    if v > INDEX_GUARD_EXPONENT as i64 {
        return Err(Error::UnboundedEnumeration {
            count: (pm.p as u128).saturating_pow(v as u32),
            limit: (pm.p as u128).pow(INDEX_GUARD_EXPONENT),
        });
    }
    Ok(d)
}

/// `p`-adic fractional part: the `c/p^k ∈ [0,1)` with `x − c/p^k ∈ ℤ_(p)`.
fn p_fractional_part(x: &Rational, p: u64) -> Rational {
    let k = int_valuation(x.denom(), p);
    if k == 0 {
        return Rational::zero();
    }
    let pk = BigInt::from(p).pow(k);
    let scaled = x * Rational::from_integer(pk.clone());
    let c = reduce_mod(&scaled, &pk).expect("denominator prime to p after scaling");
    Rational::new(c, pk)
}

/// Numerator terms grouped by coset `x + Dℤ_pⁿ`: key `frac_p(D⁻¹v)`,
/// values `(c, D⁻¹v − frac)`.
fn cosets(pm: &PseudoMeasure, d: &QMatrix) -> Result<BTreeMap<QVec, Vec<(i64, QVec)>>> {
    let dinv = d.inverse()?;
    let mut out: BTreeMap<QVec, Vec<(i64, QVec)>> = BTreeMap::new();
    for (c, v) in &pm.numerator {
        let t = dinv.mul_vec(&vec_add(&pm.offset, v));
        let frac: QVec = t.iter().map(|x| p_fractional_part(x, pm.p)).collect();
        let e: QVec = t.iter().zip(&frac).map(|(a, b)| a - b).collect();
        out.entry(frac).or_default().push((*c, e));
    }
    Ok(out)
}

/// Whether `Σ c·(1+S)^e` is divisible by `S_i` for each `i < r`: for every
/// value of the remaining exponents the coefficients must cancel.
fn coset_divisible(terms: &[(i64, QVec)], r: usize) -> Option<usize> {
    for i in 0..r {
        let mut sums: BTreeMap<Vec<Rational>, i64> = BTreeMap::new();
        for (c, e) in terms {
            let key: Vec<Rational> = e.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect();
            *sums.entry(key).or_insert(0) += c;
        }
        if sums.values().any(|&s| s != 0) {
            return Some(i);
        }
    }
    None
}

/// Exact divisibility criterion in the `S`-coordinates (route B).
pub fn divisibility_route(pm: &PseudoMeasure) -> Result<bool> {
    let d = coordinate_basis(pm)?;
    Ok(cosets(pm, &d)?.values().all(|t| coset_divisible(t, pm.rank()).is_none()))
}

/// Vanishing-hypothesis criterion (route A).
pub fn vanishing_route(src: &MeasureSource) -> Result<bool> {
    let big_f = tensor_at_p(&src.f, &src.level)?;
    let gens: Vec<QVec> = src.cone.generators().iter().map(|g| to_qvec(&primitive_vector(g))).collect();
    let b = QMatrix::from_columns(&gens);
    if pullback_linear(&big_f, &b)?.is_identically_zero()? {
        return Ok(true);
    }
    let r = gens.len();
    if r == src.f.dim() {
        for g in &gens {
            if !vanishing_check(&src.f, g)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let restricted = pullback_linear(&src.f, &b)?;
    for i in 0..r {
        let mut e = vec![Rational::zero(); r];
        e[i] = Rational::one();
        if !line_averages_vanish(&restricted, &e)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Measure criterion; both routes are evaluated when the source is known.
pub fn is_measure(pm: &PseudoMeasure) -> Result<bool> {
    let divisibility = divisibility_route(pm)?;
    if let Some(src) = &pm.source {
        let vanishing = vanishing_route(src)?;
        if vanishing != divisibility {
            return Err(Error::RouteDisagreement { vanishing, divisibility });
        }
    }
    Ok(divisibility)
}

/// Amice transform of a measure as a series in `qᵢ − 1`, exact modulo `p^M`.
pub fn amice_expand(pm: &PseudoMeasure, caps: &[u32], m: u32) -> Result<QSeries> {
    let ctx = PadicCtx::new(pm.p, m)?;
    if caps.len() != pm.dim {
        return Err(Error::DimensionMismatch("caps".into()));
    }
    let n = pm.dim;
    let r = pm.rank();
    let d = coordinate_basis(pm)?;
    let total: u32 = caps.iter().sum();
    let mut s_caps = vec![total; n];
    for c in s_caps.iter_mut().take(r) {
        *c += 1;
    }
    let mut cache = BinomialCache::default();

    // S_i = q^{D e_i} − 1 and the unit factors S_i / (1 − (1+S_i)^{a_i}).
    let subs: Vec<QSeries> = d
        .columns()
        .iter()
        .map(|col| Ok(QSeries::q_power(ctx, caps.to_vec(), col)?.sub(&QSeries::one(ctx, caps.to_vec()))))
        .collect::<Result<_>>()?;
    let mut units = QSeries::one(ctx, vec![total; n]);
    for (i, (a, _)) in pm.denominators.iter().enumerate() {
        let row = cache.row(ctx, a, total + 1)?;
        // (1 − (1+S)^a)/S = −Σ_{k≥1} binom(a,k) S^{k−1}
        let mut rows: Vec<Vec<u64>> = (0..n).map(|_| vec![0; total as usize + 1]).collect();
        for j in 0..n {
            rows[j][0] = 1;
        }
        for k in 1..=total as usize + 1 {
            rows[i][k - 1] = ctx.neg(row[k]);
        }
        let factor = QSeries::outer(ctx, vec![total; n], &rows);
        units = units.mul(&factor.invert()?);
    }

    let mut out = QSeries::zero(ctx, caps.to_vec());
    for (frac, terms) in cosets(pm, &d)? {
        if let Some(i) = coset_divisible(&terms, r) {
            return Err(Error::PoleDetected(i));
        }
        let mut num = QSeries::zero(ctx, s_caps.clone());
        for (c, e) in &terms {
            let rows: Vec<Vec<u64>> =
                e.iter().zip(&s_caps).map(|(x, &cap)| cache.row(ctx, x, cap).cloned()).collect::<Result<_>>()?;
            num.add_scaled(&QSeries::outer(ctx, s_caps.clone(), &rows), ctx.from_i64(*c));
        }
        for i in 0..r {
            num = num.divide_by_var(i)?;
        }
        let g = num.mul(&units).substitute(&subs);
        let x = d.mul_vec(&frac);
        out = out.add(&g.mul(&QSeries::q_power(ctx, caps.to_vec(), &x)?));
    }
    Ok(out)
}

/// `Σ wᵢ·𝒜(μᵢ) + delta0` for a cone-function family.
pub fn amice_expand_signed(pms: &SignedPseudoMeasures, caps: &[u32], m: u32) -> Result<QSeries> {
    let p = pms.terms.first().map(|(_, pm)| pm.p).ok_or_else(|| Error::InvalidInput("empty family".into()))?;
    let ctx = PadicCtx::new(p, m)?;
    let mut out = QSeries::constant(ctx, caps.to_vec(), ctx.from_i64(pms.delta0));
    for (w, pm) in &pms.terms {
        out.add_scaled(&amice_expand(pm, caps, m)?, ctx.from_i64(*w));
    }
    Ok(out)
}

/// `∫ binom(x₁,k₁)⋯binom(xₙ,kₙ) dμ`.
pub fn mahler_coefficient(s: &QSeries, k: &[u32]) -> Result<PadicScalar> {
    s.coefficient(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use crate::padic::{kubota_leopoldt, moment, smoothed_integers, NormPoly};

    fn ctx(p: u64, m: u32) -> PadicCtx {
        PadicCtx::new(p, m).unwrap()
    }

    #[test]
    fn smoothed_numerator() {
        let f = smoothed_integers(2, 3).unwrap();
        let c = OpenCone::from_i64(&[&[1]]).unwrap();
        let pm = pseudo_from_cone(&f, &c, &PLevelSet::full(3, 1)).unwrap();
        assert_eq!(pm.numerator, vec![(1, vec![int(1)]), (-1, vec![int(2)])]);
        assert_eq!(pm.denominators, vec![(int(2), vec![int(1)])]);
        assert!(is_measure(&pm).unwrap());
        // q/(1+q) at q = 1
        let s = amice_expand(&pm, &[5], 6).unwrap();
        assert_eq!(s.constant_term(), ctx(3, 6).from_rational(&rat(1, 2)).unwrap());
    }

    #[test]
    fn unsmoothed_is_rejected() {
        let f = TestFunction::standard_lattice(1).certify_away_from(3).unwrap();
        let c = OpenCone::from_i64(&[&[1]]).unwrap();
        let pm = pseudo_from_cone(&f, &c, &PLevelSet::full(3, 1)).unwrap();
        assert_eq!(pm.numerator, vec![(1, vec![int(1)])]);
        assert_eq!(pm.denominators, vec![(int(1), vec![int(1)])]);
        assert!(!is_measure(&pm).unwrap());
        assert!(matches!(amice_expand(&pm, &[4], 4), Err(Error::PoleDetected(0))));
    }

    #[test]
    fn lower_rank_cone() {
        let f = TestFunction::standard_lattice(2).certify_away_from(5).unwrap();
        let c = OpenCone::from_i64(&[&[1, 0]]).unwrap();
        let pm = pseudo_from_cone(&f, &c, &PLevelSet::full(5, 2)).unwrap();
        assert_eq!(pm.numerator, vec![(1, vec![int(1), int(0)])]);
        assert_eq!(pm.denominators, vec![(int(1), vec![int(1), int(0)])]);
    }

    #[test]
    fn dirac_coefficients() {
        let d = PseudoMeasure::dirac(3, vec![int(3)]).unwrap();
        let s = amice_expand(&d, &[4], 5).unwrap();
        let coeffs: Vec<u64> = (0..=3).map(|k| mahler_coefficient(&s, &[k]).unwrap().value).collect();
        assert_eq!(coeffs, vec![1, 3, 3, 1]);
        assert_eq!(moment(&s, &NormPoly::product(1), 2).unwrap().value, 9);
        assert!(matches!(mahler_coefficient(&s, &[5]), Err(Error::OutOfCaps(_))));
    }

    #[test]
    fn kubota_leopoldt_moments() {
        let kl = kubota_leopoldt(3, 2, 6, 6, &[0, 1]).unwrap();
        let c = ctx(3, 6);
        assert_eq!(kl.moments[0].1.value, c.from_rational(&rat(1, 2)).unwrap());
        assert_eq!(kl.moments[1].1.value, c.from_rational(&rat(1, 4)).unwrap());
    }

    #[test]
    fn xi_is_not_a_measure() {
        assert!(!is_measure(&PseudoMeasure::xi(5)).unwrap());
    }

    #[test]
    fn non_unit_scaling_is_rejected() {
        let r = PseudoMeasure::new(3, vec![int(0)], vec![(1, vec![int(0)])], vec![(int(3), vec![int(1)])]);
        assert!(matches!(r, Err(Error::NonUnitScaling(_))));
    }
}
