use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::classes::{ray_class_reps, ray_unit_generator};
use super::field::{shintani_domain_2d, RQField, UnitData};
use super::ideal::{degree_one_prime, IdealHNF};
use crate::cones::{hill_cone_function, refine, OpenCone, ConeFunction, GLTuple};
use crate::error::{Error, Result};
use crate::exact::{reduce_mod, Rational};
use crate::linalg::{QMatrix, QVec};
use crate::padic::{
    amice_expand_signed, evaluate_at_s, is_measure, is_prime, mahler_cutoff, moment, pseudo_from_cone, pseudo_from_cone_function,
    pushforward_by_residue, PadicCtx, PadicScalar, QSeries, SignedPseudoMeasures,
};
use crate::test_functions::{tensor_at_p, vanishing_check, PLevelSet, TestFunction};
use crate::zeta::special_value;

/// Data fixing a family of smoothed partial zeta functions: modulus `𝔣`,
/// smoothing prime `ℓ` with a degree-one prime `𝔠 | ℓ` and `c ∈ ℓℤ`,
/// `c ≡ 1 mod 𝔣p^m`, the prime `p` and the level `m`.
#[derive(Clone, Debug)]
pub struct RayClassSetup {
    pub field: RQField,
    pub f: IdealHNF,
    pub p: u64,
    pub ell: u64,
    pub frak_c: IdealHNF,
    pub c: BigInt,
    pub m: u32,
    /// `𝔣p^m`.
    pub modulus: IdealHNF,
    /// Units for `𝔣p^m`.
    pub units: UnitData,
    /// Narrow ray class representatives mod `𝔣p^m`, prime to `pℓ`.
    pub reps: Vec<IdealHNF>,
}

impl RayClassSetup {
    pub fn new(field: RQField, f: IdealHNF, p: u64, ell: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if !is_prime(ell) {
            return Err(Error::BadSmoothingData(format!("{ell} is not prime")));
        }
        if ell == p {
            return Err(Error::BadSmoothingData("smoothing prime must differ from p".into()));
        }
        if !f.is_integral() || !f.is_ideal(&field) {
            return Err(Error::InvalidInput("modulus must be an integral ideal".into()));
        }
        let nf = f.norm().to_integer();
        if !nf.gcd(&BigInt::from(p * ell)).is_one() {
            return Err(Error::BadSmoothingData("modulus must be prime to p and ℓ".into()));
        }
        let frak_c = degree_one_prime(&field, ell)?;
        let pm = BigInt::from(p).pow(m);
        let f0 = f.min_integer() * &pm;
        // c ≡ 0 mod ℓ, c ≡ 1 mod f₀p^m
        let l = BigInt::from(ell);
        let inv = crate::exact::mod_inverse(&l, &f0).unwrap_or_else(BigInt::zero);
        let c = if f0.is_one() { l.clone() } else { &l * inv.mod_floor(&f0) };
        let modulus = f.mul(&field, &IdealHNF::from_integer(&field, pm.to_i64().unwrap())?);
        let units = ray_unit_generator(&field, &modulus)?;
        let reps = ray_class_reps(&field, &modulus, p * ell)?;
        Ok(RayClassSetup { field, f, p, ell, frak_c, c, m, modulus, units, reps })
    }

    pub fn domain(&self) -> Result<ConeFunction> {
        shintani_domain_2d(&self.field, &self.units)
    }

    /// The unit cycle `(1, ε)` as a Hill tuple.
    pub fn unit_cycle(&self) -> Result<GLTuple> {
        GLTuple::new(vec![QMatrix::identity(2), self.field.mult_matrix(&self.units.eps)], QMatrix::identity(2))
    }

    /// `N⁻¹(ℤ_p^×)` for `m = 0`, `1 + p^m𝒪_p` otherwise.
    pub fn level_set(&self) -> PLevelSet {
        if self.m == 0 {
            let norm = self.field.norm_poly();
            let p = BigInt::from(self.p);
            PLevelSet::from_predicate(self.p, 1, 2, |x| {
                let xq: Vec<Rational> = x.iter().map(|v| Rational::from_integer(v.clone())).collect();
                !(norm.eval(&xq).to_integer() % &p).is_zero()
            })
        } else {
            PLevelSet::coset(self.p, self.m, vec![BigInt::one(), BigInt::zero()])
        }
    }

    fn check_class(&self, a: &IdealHNF) -> Result<()> {
        let na = a.norm();
        if !a.is_integral() || !na.to_integer().gcd(&BigInt::from(self.p * self.ell)).is_one() {
            return Err(Error::BadSmoothingData("𝔞 must be integral and prime to pℓ".into()));
        }
        if !a.is_coprime_to(&self.field, &self.f) {
            return Err(Error::BadSmoothingData("𝔞 must be prime to 𝔣".into()));
        }
        Ok(())
    }
}

/// `[1 + 𝔞⁻¹𝔣] − ℓ[c + 𝔞⁻¹𝔣𝔠]`, certified away from `p`.
pub fn smoothing_test_function(setup: &RayClassSetup, a: &IdealHNF) -> Result<TestFunction> {
    setup.check_class(a)?;
    let field = &setup.field;
    let l1 = a.inverse(field).mul(field, &setup.f);
    let l2 = l1.mul(field, &setup.frak_c);
    let c: QVec = vec![Rational::from_integer(setup.c.clone()), Rational::zero()];
    if !l1.contains(&crate::linalg::vec_sub(&c, &field.one())) {
        return Err(Error::BadSmoothingData("c is not ≡ 1 mod 𝔞⁻¹𝔣".into()));
    }
    let first = TestFunction::indicator(field.one(), l1.basis())?;
    let second = TestFunction::indicator(c, l2.basis())?;
    first.sub(&second.scale(setup.ell as i64)).certify_away_from(setup.p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZetaVariant {
    Plain,
    Star,
    Smoothed,
    SmoothedStar,
}

/// `N𝔟^k·ζ_Sh([a + 𝔟⁻¹𝔣p^m], −k)` over the Shintani domain; with `star`
/// and `m = 0` the sum runs over `N(x)` prime to `p`.
fn class_value(setup: &RayClassSetup, b: &IdealHNF, a: &[Rational], k: u32, star: bool) -> Result<Rational> {
    let field = &setup.field;
    let lattice = b.inverse(field).mul(field, &setup.modulus);
    let mut tf = TestFunction::indicator(a.to_vec(), lattice.basis())?;
    if star && setup.m == 0 {
        tf = tensor_at_p(&tf.certify_away_from(setup.p)?, &setup.level_set())?;
    }
    let v = special_value(&tf, &setup.domain()?, &field.norm_structure(), k)?;
    Ok(num_traits::pow(b.norm(), k as usize) * v)
}

/// Exact partial zeta value `ζ(𝔞, −k)` of the narrow ray class of `𝔞`
/// mod `𝔣p^m`; the smoothed variants subtract `N𝔠^{1+k}ζ(𝔞𝔠⁻¹, −k)`.
pub fn exact_partial_zeta(setup: &RayClassSetup, a: &IdealHNF, k: u32, variant: ZetaVariant) -> Result<Rational> {
    setup.check_class(a)?;
    let field = &setup.field;
    let star = matches!(variant, ZetaVariant::Star | ZetaVariant::SmoothedStar);
    let main = class_value(setup, a, &field.one(), k, star)?;
    if matches!(variant, ZetaVariant::Plain | ZetaVariant::Star) {
        return Ok(main);
    }
    let b = a.mul(field, &setup.frak_c.inverse(field));
    let c = vec![Rational::from_integer(setup.c.clone()), Rational::zero()];
    let twisted = class_value(setup, &b, &c, k, star)?;
    Ok(main - num_traits::pow(Rational::from_integer(setup.ell.into()), k as usize + 1) * twisted)
}

/// `N𝔞^k·ζ_Sh(f′⊗[U], −k)` in one pass; equal to the smoothed star value.
pub fn smoothed_star_via_test_function(setup: &RayClassSetup, a: &IdealHNF, k: u32) -> Result<Rational> {
    let f = tensor_at_p(&smoothing_test_function(setup, a)?, &setup.level_set())?;
    let v = special_value(&f, &setup.domain()?, &setup.field.norm_structure(), k)?;
    Ok(num_traits::pow(a.norm(), k as usize) * v)
}

/// The measure `±Φ_{f′}(η)` of a ray class together with its sign.
#[derive(Clone, Debug)]
pub struct ClassMeasure {
    pub series: QSeries,
    pub sign: i64,
    pub norm_a: Rational,
}

/// `σ_Hill(1, ε)` split along rays where `f′` gives measures.
fn hill_family(setup: &RayClassSetup, f: &TestFunction) -> Result<ConeFunction> {
    let u = setup.level_set();
    let keep = |d: &QVec| -> bool {
        let ray = OpenCone::new(vec![d.clone()]).and_then(|c| pseudo_from_cone(f, &c, &u)).and_then(|pm| is_measure(&pm));
        matches!(ray, Ok(true)) && matches!(vanishing_check(f, d), Ok(true))
    };
    let mut kappa = refine(&hill_cone_function(&setup.unit_cycle()?)?, &keep)?;
    kappa.constant = 0;
    Ok(kappa)
}

/// The pseudo-measures making up `Φ_{f′}(η)`, each checked to be a measure.
pub fn class_family(setup: &RayClassSetup, a: &IdealHNF) -> Result<SignedPseudoMeasures> {
    let f = smoothing_test_function(setup, a)?;
    let kappa = hill_family(setup, &f)?;
    let fam = pseudo_from_cone_function(&f, &kappa, &setup.level_set())?;
    for (_, pm) in &fam.terms {
        if !is_measure(pm)? {
            return Err(Error::PoleDetected(0));
        }
    }
    Ok(fam)
}

/// Builds `Φ_{f′}(η)` restricted to the level set and calibrates its sign
/// against the exact smoothed star values.
pub fn class_measure(setup: &RayClassSetup, a: &IdealHNF, caps: u32, precision: u32) -> Result<ClassMeasure> {
    let fam = class_family(setup, a)?;
    let series = amice_expand_signed(&fam, &[caps, caps], precision)?;
    let sign = calibrate_sign(setup, a, &series)?;
    Ok(ClassMeasure { series, sign, norm_a: a.norm() })
}

fn calibrate_sign(setup: &RayClassSetup, a: &IdealHNF, series: &QSeries) -> Result<i64> {
    let ctx = series.ctx();
    let norm = setup.field.norm_poly();
    let na = a.norm();
    for k in 1..=(series.caps()[0] / 2) {
        let exact = exact_partial_zeta(setup, a, k, ZetaVariant::SmoothedStar)?;
        let e = ctx.from_rational(&exact).ok_or(Error::SignCalibrationFailure)?;
        if e == 0 {
            continue;
        }
        let m = moment(series, &norm, k)?.value;
        let v = ctx.mul(m, ctx.from_rational(&num_traits::pow(na.clone(), k as usize)).unwrap());
        if v == e {
            return Ok(1);
        }
        if v == ctx.neg(e) {
            return Ok(-1);
        }
        return Err(Error::SignCalibrationFailure);
    }
    Err(Error::SignCalibrationFailure)
}

/// `ζ_{𝔠,p}(𝔞, −k) = ±N𝔞^k ∫ N(x)^k dμ` for each requested `k`.
pub fn padic_partial_zeta(setup: &RayClassSetup, a: &IdealHNF, ks: &[u32], precision: u32) -> Result<Vec<PadicScalar>> {
    let kmax = ks.iter().copied().max().unwrap_or(0).max(1);
    let cm = class_measure(setup, a, 2 * kmax.max(3), precision)?;
    let ctx = cm.series.ctx();
    let norm = setup.field.norm_poly();
    ks.iter()
        .map(|&k| {
            let m = moment(&cm.series, &norm, k)?.value;
            let na = ctx.from_rational(&num_traits::pow(cm.norm_a.clone(), k as usize)).unwrap();
            let v = ctx.mul(ctx.mul(m, na), ctx.from_i64(cm.sign));
            Ok(ctx.scalar(v))
        })
        .collect()
}

/// `ω(a)^i⟨a⟩^{−s}` for a `p`-adic unit `a`.
pub fn unit_power(ctx: PadicCtx, a: &Rational, s: &Rational, branch: u64) -> Result<u64> {
    let av = ctx.from_rational(a).filter(|v| v % ctx.p != 0).ok_or_else(|| Error::InvalidInput("not a p-adic unit".into()))?;
    let w = ctx.teichmuller(av);
    let z = ctx.sub(ctx.mul(av, ctx.inverse(w).unwrap()), 1);
    let mut acc = 0u64;
    let mut binom = Rational::one();
    let mut zpow = 1u64;
    for m in 0..=(2 * ctx.m + 2) {
        if m > 0 {
            binom = binom * (-s.clone() - Rational::from_integer((m - 1).into())) / Rational::from_integer(m.into());
            zpow = ctx.mul(zpow, z);
        }
        let b = reduce_mod(&binom, &BigInt::from(ctx.modulus))
            .ok_or_else(|| Error::InvalidInput("s must be a p-adic integer".into()))?
            .to_u64()
            .unwrap();
        acc = ctx.add(acc, ctx.mul(b, zpow));
    }
    Ok(ctx.mul(ctx.pow(w, branch % (ctx.p - 1)), acc))
}

/// `ζ_{𝔠,p}(𝔞, s)` on the branch `i`, through the norm pushforward.
pub fn padic_partial_zeta_at_s(
    setup: &RayClassSetup,
    a: &IdealHNF,
    s: &Rational,
    branch: u64,
    precision: u32,
) -> Result<PadicScalar> {
    padic_partial_zeta_at_s_with_cutoff(setup, a, s, branch, precision, None)
}

/// As [`padic_partial_zeta_at_s`] with an explicit Mahler cutoff, which may
/// not be below [`mahler_cutoff`].
pub fn padic_partial_zeta_at_s_with_cutoff(
    setup: &RayClassSetup,
    a: &IdealHNF,
    s: &Rational,
    branch: u64,
    precision: u32,
    cutoff: Option<u32>,
) -> Result<PadicScalar> {
    let min = mahler_cutoff(setup.p, precision);
    let cutoff = match cutoff {
        Some(k) if k < min => return Err(Error::InvalidInput(format!("Mahler cutoff {k} is below {min}"))),
        Some(k) => k,
        None => min,
    };
    let cm = class_measure(setup, a, 6, precision)?;
    let f = smoothing_test_function(setup, a)?;
    let norm = setup.field.norm_poly();
    let parts = pushforward_by_residue(&f, &hill_family(setup, &f)?, &setup.level_set(), &norm, cutoff, precision)?;
    let v = evaluate_at_s(&parts, s, branch)?;
    let ctx = PadicCtx::new(setup.p, v.precision)?;
    let na = unit_power(ctx, &cm.norm_a, s, branch)?;
    Ok(ctx.scalar(ctx.mul(ctx.mul(v.value, na), ctx.from_i64(cm.sign))))
}
