use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::measure::{amice_expand_signed, pseudo_from_cone_function};
use super::qseries::{binomial_row, QSeries};
use super::scalar::{PadicCtx, PadicScalar};
use crate::cones::{hill_cone_function, ConeFunction, GLTuple};
use crate::error::{Error, Result};
use crate::exact::{Rational, Scalar};
use crate::linalg::QMatrix;
use crate::test_functions::{PLevelSet, TestFunction};
use crate::zeta::NormStructure;

/// Polynomial with rational coefficients in `n` variables; used for norm
/// forms `N(x)` on `ℤ_pⁿ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormPoly {
    nvars: usize,
    terms: Vec<(Vec<u32>, Rational)>,
}

impl NormPoly {
    pub fn new(nvars: usize, terms: Vec<(Vec<u32>, Rational)>) -> Result<Self> {
        if terms.iter().any(|(e, _)| e.len() != nvars) {
            return Err(Error::DimensionMismatch("monomial length".into()));
        }
        let mut terms: Vec<_> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort();
        Ok(NormPoly { nvars, terms })
    }

    /// `x₁x₂⋯xₙ`.
    pub fn product(n: usize) -> Self {
        NormPoly { nvars: n, terms: vec![(vec![1; n], Rational::one())] }
    }

    /// Expands `Π_i ℓ_i(x)` for the linear forms of a norm structure.
    pub fn from_norm_structure<S: Scalar>(ns: &NormStructure<S>) -> Result<Self> {
        let n = ns.dim();
        let mut poly: Vec<(Vec<u32>, S)> = vec![(vec![0; n], ns.forms()[0][0].one_like())];
        for form in ns.forms() {
            let mut next: Vec<(Vec<u32>, S)> = Vec::new();
            for (e, c) in &poly {
                for (j, a) in form.iter().enumerate() {
                    if a.is_zero_scalar() {
                        continue;
                    }
                    let mut e2 = e.clone();
                    e2[j] += 1;
                    let v = c.clone() * a.clone();
                    match next.iter_mut().find(|(x, _)| *x == e2) {
                        Some((_, acc)) => *acc = acc.clone() + v,
                        None => next.push((e2, v)),
                    }
                }
            }
            poly = next;
        }
        let terms = poly
            .into_iter()
            .map(|(e, c)| c.as_rational().map(|r| (e, r)).ok_or(Error::IrrationalResidue))
            .collect::<Result<Vec<_>>>()?;
        NormPoly::new(n, terms)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<u32>, Rational)] {
        &self.terms
    }

    /// Degree in each variable.
    pub fn degrees(&self) -> Vec<u32> {
        (0..self.nvars).map(|j| self.terms.iter().map(|(e, _)| e[j]).max().unwrap_or(0)).collect()
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(c.clone(), |acc, (&k, xi)| acc * num_traits::pow(xi.clone(), k as usize)))
            .fold(Rational::zero(), |a, b| a + b)
    }
}

/// `D_N = Σ c_α θ^α` with `θ_j = (1+T_j)∂/∂T_j`, so `D_N q^v = N(v)q^v`.
fn apply_norm_operator(s: &QSeries, norm: &NormPoly) -> Result<QSeries> {
    let ctx = s.ctx();
    let degs = norm.degrees();
    let caps: Vec<u32> = s
        .caps()
        .iter()
        .zip(&degs)
        .map(|(&c, &d)| c.checked_sub(d))
        .collect::<Option<_>>()
        .ok_or_else(|| Error::PrecisionExhausted("series caps too small for the moment".into()))?;
    let mut out = QSeries::zero(ctx, caps.clone());
    for (e, c) in norm.terms() {
        let coeff = ctx
            .from_rational(c)
            .ok_or_else(|| Error::InvalidInput(format!("norm coefficient {c} is not p-integral")))?;
        let mut t = s.clone();
        for (j, &k) in e.iter().enumerate() {
            for _ in 0..k {
                t = t.theta(j)?;
            }
        }
        out.add_scaled(&t.truncate(&caps), coeff);
    }
    Ok(out)
}

/// `∫ N(x)^k dμ` read off the Amice transform.
pub fn moment(s: &QSeries, norm: &NormPoly, k: u32) -> Result<PadicScalar> {
    if norm.nvars() != s.nvars() {
        return Err(Error::DimensionMismatch("norm form".into()));
    }
    let mut t = s.clone();
    for _ in 0..k {
        t = apply_norm_operator(&t, norm)?;
    }
    Ok(s.ctx().scalar(t.constant_term()))
}

/// One-variable measure on `ℤ_p`, optionally known to be supported on the
/// residue class `residue + pℤ_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measure1D {
    pub series: QSeries,
    pub residue: Option<u64>,
}

/// Newton transform along one axis of a dense grid: replaces the values
/// `g(b)` by the forward differences `Δ^k g(0)`.
fn newton_axis(ctx: PadicCtx, grid: &mut [u64], dims: &[usize], axis: usize) {
    let stride: usize = dims[axis + 1..].iter().product();
    let len = dims[axis];
    let outer: usize = dims[..axis].iter().product();
    for o in 0..outer {
        for inner in 0..stride {
            let base = o * len * stride + inner;
            // repeated differencing in place
            for level in 1..len {
                for b in (level..len).rev() {
                    let hi = grid[base + b * stride];
                    let lo = grid[base + (b - 1) * stride];
                    grid[base + b * stride] = ctx.sub(hi, lo);
                }
            }
        }
    }
}

/// `ν = N_*μ` with Mahler coefficients `∫ binom(N(x), j) dμ`, `j ≤ cutoff`.
pub fn pushforward_norm(s: &QSeries, norm: &NormPoly, cutoff: u32) -> Result<QSeries> {
    let ctx = s.ctx();
    let n = s.nvars();
    if norm.nvars() != n {
        return Err(Error::DimensionMismatch("norm form".into()));
    }
    let degs = norm.degrees();
    let need: Vec<u32> = degs.iter().map(|d| d * cutoff).collect();
    if need.iter().zip(s.caps()).any(|(a, b)| a > b) {
        return Err(Error::PrecisionExhausted(format!("pushforward to cutoff {cutoff} needs caps {need:?}")));
    }
    let dims: Vec<usize> = need.iter().map(|&c| c as usize + 1).collect();
    let size: usize = dims.iter().product();
    // grids[j][β] = binom(N(β), j)
    let mut grids = vec![vec![0u64; size]; cutoff as usize + 1];
    for idx in 0..size {
        let mut rem = idx;
        let mut beta = vec![0u32; n];
        for i in (0..n).rev() {
            beta[i] = (rem % dims[i]) as u32;
            rem /= dims[i];
        }
        let x: Vec<Rational> = beta.iter().map(|&b| Rational::from_integer(b.into())).collect();
        let row = binomial_row(ctx, &norm.eval(&x), cutoff)?;
        for (j, v) in row.into_iter().enumerate() {
            grids[j][idx] = v;
        }
    }
    let mut out = QSeries::zero(ctx, vec![cutoff]);
    for (j, grid) in grids.iter_mut().enumerate() {
        for axis in 0..n {
            newton_axis(ctx, grid, &dims, axis);
        }
        let mut acc = 0u64;
        for (idx, &c) in grid.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let mut rem = idx;
            let mut alpha = vec![0u32; n];
            for i in (0..n).rev() {
                alpha[i] = (rem % dims[i]) as u32;
                rem /= dims[i];
            }
            acc = ctx.add(acc, ctx.mul(c, s.get(&alpha)));
        }
        out.set(&[j as u32], acc);
    }
    Ok(out)
}

/// Restriction of a level set to `{x : N(x) ≡ t₀ mod p}`.
pub fn restrict_by_norm(u: &PLevelSet, norm: &NormPoly, t0: u64) -> PLevelSet {
    let m = u.m.max(1);
    let p = u.p;
    PLevelSet::from_predicate(p, m, u.dim, |x| {
        let xq: Vec<Rational> = x.iter().map(|v| Rational::from_integer(v.clone())).collect();
        if !u.contains(&xq) {
            return false;
        }
        crate::exact::reduce_mod(&norm.eval(&xq), &BigInt::from(p)).and_then(|r| r.to_u64()) == Some(t0)
    })
}

/// Pushforward of `μ_{f′,κ,U}` along `N`, split by the residue of `N` mod
/// `p` over the units; each part is rebuilt from the restricted level set.
pub fn pushforward_by_residue(
    f: &TestFunction,
    kappa: &ConeFunction,
    u: &PLevelSet,
    norm: &NormPoly,
    cutoff: u32,
    m: u32,
) -> Result<Vec<Measure1D>> {
    let caps: Vec<u32> = norm.degrees().iter().map(|d| d * cutoff).collect();
    let mut out = Vec::new();
    for t0 in 1..u.p {
        let ut = restrict_by_norm(u, norm, t0);
        if ut.offsets.is_empty() {
            continue;
        }
        let fam = pseudo_from_cone_function(f, kappa, &ut)?;
        let s = amice_expand_signed(&fam, &caps, m)?;
        out.push(Measure1D { series: pushforward_norm(&s, norm, cutoff)?, residue: Some(t0) });
    }
    Ok(out)
}

/// Smallest `m` with `m + 1 ≥ M − v_p(m!)`: the Mahler tail of `⟨t⟩^{−s}`
/// beyond it is below the precision that survives the division by `m!`.
pub fn mahler_cutoff(p: u64, m: u32) -> u32 {
    (0..).find(|&k| k + 1 + factorial_valuation(k, p) >= m).unwrap()
}

pub fn factorial_valuation(k: u32, p: u64) -> u32 {
    let mut v = 0;
    let mut q = k as u64 / p;
    while q > 0 {
        v += q as u32;
        q /= p;
    }
    v
}

/// `∫ ω(t)^i ⟨t⟩^{−s} dν(t)` over `ℤ_p^×` for a measure split by residue
/// classes; precision drops to `M − v_p(m_max!)`.
pub fn evaluate_at_s(parts: &[Measure1D], s: &Rational, branch: u64) -> Result<PadicScalar> {
    let first = parts.first().ok_or_else(|| Error::InvalidInput("no measure components".into()))?;
    let ctx = first.series.ctx();
    let p = ctx.p;
    if p == 2 {
        return Err(Error::Unsupported("evaluation at s needs an odd prime".into()));
    }
    let m_max = mahler_cutoff(p, ctx.m);
    let lost = factorial_valuation(m_max, p);
    let neg_s = ctx
        .from_rational(&-s.clone())
        .ok_or_else(|| Error::InvalidInput("s must be a p-adic integer".into()))?;
    let branch = branch % (p - 1);
    let mut total = 0u64;
    for part in parts {
        let t0 = part
            .residue
            .filter(|r| r % p != 0)
            .ok_or_else(|| Error::InvalidInput("components must be supported on a unit residue class".into()))?;
        if part.series.caps()[0] < m_max {
            return Err(Error::PrecisionExhausted(format!("pushforward cutoff below {m_max}")));
        }
        let w = ctx.teichmuller(t0);
        let w_inv = ctx.inverse(w).expect("Teichmüller lift is a unit");
        let mut sum = 0u64;
        let mut falling = 1u64;
        let mut fact_unit = 1u64;
        let mut fact_val = 0u32;
        for mm in 0..=m_max {
            if mm > 0 {
                falling = ctx.mul(falling, ctx.sub(neg_s, ctx.from_i64(mm as i64 - 1)));
                let mut k = mm as u64;
                while k.is_multiple_of(p) {
                    k /= p;
                    fact_val += 1;
                }
                fact_unit = ctx.mul(fact_unit, k % ctx.modulus);
            }
            let im = shifted_moment(ctx, &part.series, w, mm);
            let pv = p.pow(fact_val);
            if !im.is_multiple_of(pv) {
                return Err(Error::PrecisionExhausted("moment not divisible by the factorial".into()));
            }
            let term = ctx.mul(
                ctx.mul(falling, im / pv),
                ctx.mul(ctx.inverse(fact_unit).unwrap(), ctx.pow(w_inv, mm as u64)),
            );
            sum = ctx.add(sum, term);
        }
        total = ctx.add(total, ctx.mul(ctx.pow(w, branch), sum));
    }
    Ok(PadicScalar::new(total, p, ctx.m - lost))
}

/// `∫ (t − c)^m dν`.
fn shifted_moment(ctx: PadicCtx, nu: &QSeries, c: u64, m: u32) -> u64 {
    // Mahler coefficients of (t − c)^m via forward differences.
    let len = m as usize + 1;
    let mut vals: Vec<u64> = (0..len).map(|b| ctx.pow(ctx.sub(b as u64 % ctx.modulus, c), m as u64)).collect();
    for level in 1..len {
        for b in (level..len).rev() {
            vals[b] = ctx.sub(vals[b], vals[b - 1]);
        }
    }
    vals.iter().enumerate().fold(0, |acc, (j, &a)| ctx.add(acc, ctx.mul(a, nu.get(&[j as u32]))))
}

/// Result of a Kubota–Leopoldt computation.
#[derive(Clone, Debug)]
pub struct KubotaLeopoldt {
    pub p: u64,
    pub ell: u64,
    pub series: QSeries,
    /// `(k, ∫_{ℤ_p} x^k, ∫_{ℤ_p^×} x^k)`.
    pub moments: Vec<(u32, PadicScalar, PadicScalar)>,
}

/// The `ℓ`-smoothed measure from `[ℤ] − ℓ[ℓℤ]` on `C^o(1)`.
pub fn kubota_leopoldt(p: u64, ell: u64, caps: u32, m: u32, ks: &[u32]) -> Result<KubotaLeopoldt> {
    if ell == p {
        return Err(Error::BadSmoothingData("smoothing prime must differ from p".into()));
    }
    if !super::scalar::is_prime(ell) {
        return Err(Error::BadSmoothingData(format!("{ell} is not prime")));
    }
    let f = smoothed_integers(ell, p)?;
    let kappa = ConeFunction::single(crate::cones::OpenCone::from_i64(&[&[1]])?);
    let full = PLevelSet::full(p, 1);
    let units = PLevelSet::from_predicate(p, 1, 1, |x| !x[0].is_zero());
    let series = amice_expand_signed(&pseudo_from_cone_function(&f, &kappa, &full)?, &[caps], m)?;
    let unit_series = amice_expand_signed(&pseudo_from_cone_function(&f, &kappa, &units)?, &[caps], m)?;
    let id = NormPoly::product(1);
    let moments = ks
        .iter()
        .map(|&k| Ok((k, moment(&series, &id, k)?, moment(&unit_series, &id, k)?)))
        .collect::<Result<_>>()?;
    Ok(KubotaLeopoldt { p, ell, series, moments })
}

/// `[ℤ] − ℓ[ℓℤ]`, certified away from `p`.
pub fn smoothed_integers(ell: u64, p: u64) -> Result<TestFunction> {
    let z = TestFunction::standard_lattice(1);
    let lz = TestFunction::indicator(vec![Rational::zero()], QMatrix::diagonal(&[Rational::from_integer(ell.into())]))?;
    z.sub(&lz.scale(ell as i64)).certify_away_from(p)
}

/// A degenerate two-dimensional value `Φ(α₁,α₂)` obtained from the cocycle
/// relation through an auxiliary `γ`; the `δ₀` component is not determined.
#[derive(Clone, Debug)]
pub struct ResolvedMeasure {
    pub series: QSeries,
    pub delta0_ambiguous: bool,
}

pub fn degenerate_resolve_dim2(
    f: &TestFunction,
    alpha1: &QMatrix,
    alpha2: &QMatrix,
    gamma: &QMatrix,
    w: &QMatrix,
    u: &PLevelSet,
    caps: &[u32],
    m: u32,
) -> Result<ResolvedMeasure> {
    if f.dim() != 2 {
        return Err(Error::Unsupported("degenerate resolution is implemented for n = 2".into()));
    }
    let w1 = w.column(0);
    let a = alpha1.mul_vec(&w1);
    let g = gamma.mul_vec(&w1);
    let det = &a[0] * &g[1] - &a[1] * &g[0];
    let b = alpha2.mul_vec(&w1);
    let det2 = &b[0] * &g[1] - &b[1] * &g[0];
    if det.is_zero() || det2.is_zero() {
        return Err(Error::BadAuxiliary);
    }
    let k1 = hill_cone_function(&GLTuple::new(vec![alpha1.clone(), gamma.clone()], w.clone())?)?;
    let k2 = hill_cone_function(&GLTuple::new(vec![alpha2.clone(), gamma.clone()], w.clone())?)?;
    let mut kappa = k1.add(&k2.scale(-1));
    kappa.constant = 0;
    let fam = pseudo_from_cone_function(f, &kappa, u)?;
    let ctx = PadicCtx::new(u.p, m)?;
    let series = if fam.terms.is_empty() {
        QSeries::zero(ctx, caps.to_vec())
    } else {
        amice_expand_signed(&fam, caps, m)?
    };
    Ok(ResolvedMeasure { series, delta0_ambiguous: true })
}

/// Direct `Φ(α₁,…,αₙ)` for a non-degenerate tuple, without its `δ₀` part.
pub fn hill_measure(f: &TestFunction, t: &GLTuple, u: &PLevelSet, caps: &[u32], m: u32) -> Result<QSeries> {
    let mut kappa = hill_cone_function(t)?;
    kappa.constant = 0;
    let fam = pseudo_from_cone_function(f, &kappa, u)?;
    if fam.terms.is_empty() {
        return Ok(QSeries::zero(PadicCtx::new(u.p, m)?, caps.to_vec()));
    }
    amice_expand_signed(&fam, caps, m)
}

/// Amice transform of a Dirac combination `Σ c·δ_v`.
pub fn dirac_series(p: u64, points: &[(i64, Vec<Rational>)], caps: &[u32], m: u32) -> Result<QSeries> {
    let ctx = PadicCtx::new(p, m)?;
    let mut out = QSeries::zero(ctx, caps.to_vec());
    for (c, v) in points {
        out.add_scaled(&QSeries::q_power(ctx, caps.to_vec(), v)?, ctx.from_i64(*c));
    }
    Ok(out)
}
