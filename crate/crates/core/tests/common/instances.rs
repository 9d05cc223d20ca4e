use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use shintani_core::cones::OpenCone;
use shintani_core::exact::int;
use shintani_core::linalg::{QMatrix, QVec};
use shintani_core::test_functions::{PLevelSet, TestFunction};

/// A random `(f′, C, U)` triple.
#[derive(Clone, Debug)]
pub struct Instance {
    pub p: u64,
    pub f: TestFunction,
    pub cone: OpenCone,
    pub level: PLevelSet,
    pub smoothed: bool,
}

fn coprime_to(r: &mut ChaCha8Rng, lo: i64, hi: i64, avoid: &[u64]) -> i64 {
    loop {
        let x = r.gen_range(lo..=hi);
        if avoid.iter().all(|&q| x % q as i64 != 0) {
            return x;
        }
    }
}

fn random_level(r: &mut ChaCha8Rng, p: u64, dim: usize) -> PLevelSet {
    match r.gen_range(0..3) {
        0 => PLevelSet::full(p, dim),
        1 => {
            let mut a: Vec<BigInt> = (0..dim).map(|_| BigInt::from(r.gen_range(0..p))).collect();
            a[0] = BigInt::from(r.gen_range(1..p));
            PLevelSet::coset(p, 1, a)
        }
        _ => PLevelSet::from_predicate(p, 1, dim, move |x| x.iter().all(|v| v % BigInt::from(p) != BigInt::from(0))),
    }
}

fn positive_cone(r: &mut ChaCha8Rng, dim: usize, rank: usize) -> OpenCone {
    loop {
        let gens: Vec<QVec> = (0..rank).map(|_| (0..dim).map(|_| int(r.gen_range(1..=3))).collect()).collect();
        if QMatrix::from_columns(&gens).rank() == rank {
            return OpenCone::new(gens).unwrap();
        }
    }
}

fn primitive_coords(m: &QMatrix, g: &[shintani_core::Rational]) -> Vec<BigInt> {
    shintani_core::linalg::primitive_vector(&m.inverse().unwrap().mul_vec(g))
}

/// `[a + L]`, or `[a + L] − ℓ[c + L′]` with `[L : L′] = ℓ` and `c ∈ a + L`.
/// With `adapted`, `L′` is chosen not to contain the primitive vectors of `L`
/// along the cone generators.
/// Unsmoothed instances are redrawn until `[a + L] ⊗ U` meets the span of the cone.
pub fn random_instance(r: &mut ChaCha8Rng, p: u64, dim: usize, smoothed: bool, adapted: bool) -> Instance {
    loop {
        let inst = draw(r, p, dim, smoothed, adapted);
        if smoothed || !restriction_vanishes(&inst) {
            return inst;
        }
    }
}

fn restriction_vanishes(inst: &Instance) -> bool {
    use shintani_core::test_functions::{pullback_linear, tensor_at_p};
    let big = tensor_at_p(&inst.f, &inst.level).unwrap();
    let b = QMatrix::from_columns(inst.cone.generators());
    pullback_linear(&big, &b).unwrap().is_identically_zero().unwrap()
}

fn draw(r: &mut ChaCha8Rng, p: u64, dim: usize, smoothed: bool, adapted: bool) -> Instance {
    let rank = if dim == 2 && r.gen_range(0..4) == 0 { 1 } else { dim };
    let cone = positive_cone(r, dim, rank);
    let ell = *[2u64, 5, 11].iter().filter(|&&l| l != p).nth(r.gen_range(0..2)).unwrap();
    let avoid = [p, ell];
    let f = if dim == 1 {
        let m = coprime_to(r, 1, 4, &avoid);
        let a = r.gen_range(1..=m);
        let base = TestFunction::progression(int(a), int(m)).unwrap();
        if smoothed {
            let c = a + m * r.gen_range(0..ell as i64);
            base.sub(&TestFunction::progression(int(c), int(m * ell as i64)).unwrap().scale(ell as i64))
        } else {
            base
        }
    } else {
        let d1 = coprime_to(r, 1, 3, &avoid);
        let d2 = coprime_to(r, 1, 3, &avoid);
        let m = QMatrix::from_i64_rows(&[&[d1, r.gen_range(0..d1)], &[0, d2]]);
        let a: QVec = (0..2).map(|_| int(r.gen_range(0..=3))).collect();
        let base = TestFunction::indicator(a.clone(), m.clone()).unwrap();
        if smoothed {
            let l = ell as i64;
            // kernel of a random functional mod ℓ
            let mut k;
            let mut tries = 0;
            loop {
                // φ = (1, 0) or (−t, 1)
                let (phi, kk) = if r.gen_range(0..l) == 0 {
                    ((1, 0), QMatrix::from_i64_rows(&[&[l, 0], &[0, 1]]))
                } else {
                    let t = r.gen_range(0..l);
                    ((-t, 1), QMatrix::from_i64_rows(&[&[1, 0], &[t, l]]))
                };
                k = kk;
                tries += 1;
                let ok = cone.generators().iter().all(|g| {
                    let x = primitive_coords(&m, g);
                    (BigInt::from(phi.0) * &x[0] + BigInt::from(phi.1) * &x[1]) % BigInt::from(l) != BigInt::from(0)
                });
                if !adapted || ok || tries > 50 {
                    break;
                }
            }
            let lp = m.mul(&k);
            let shift = m.mul_vec(&[int(r.gen_range(0..l)), int(r.gen_range(0..l))]);
            let c: QVec = a.iter().zip(&shift).map(|(x, y)| x + y).collect();
            base.sub(&TestFunction::indicator(c, lp).unwrap().scale(l))
        } else {
            base
        }
    };
    let f = f.certify_away_from(p).unwrap();
    let level = random_level(r, p, dim);
    Instance { p, f, cone, level, smoothed }
}

/// Instances for `p ∈ {3, 7}` in dimensions 1 and 2, alternately smoothed.
pub fn instance_family(seed: u64, count: usize) -> Vec<Instance> {
    let mut r = super::rng(seed);
    (0..count)
        .map(|i| {
            let p = if (i / 4) % 2 == 0 { 3 } else { 7 };
            let dim = 1 + (i / 2) % 2;
            random_instance(&mut r, p, dim, i % 2 == 0 || i % 7 == 3, i % 3 != 0)
        })
        .collect()
}

/// Everything the measure checks need to know about one instance.
#[derive(Clone, Debug)]
pub struct Report {
    pub vanishing: bool,
    pub divisibility: bool,
    /// `amice_expand` refused with a pole.
    pub pole: bool,
    /// Exact expansion over `ℚ` exists.
    pub rational_expansion: bool,
    /// For measures: moments `k = 0..=3` against exact special values.
    pub moments: Option<Vec<bool>>,
    /// For measures: every exact coefficient is `p`-integral and reduces to
    /// the computed residue.
    pub integral: Option<bool>,
}

pub fn examine(inst: &Instance, precision: u32) -> Report {
    use shintani_core::cones::ConeFunction;
    use shintani_core::padic::{amice_expand, divisibility_route, moment, pseudo_from_cone, vanishing_route, NormPoly, PadicCtx};
    use shintani_core::test_functions::tensor_at_p;
    use shintani_core::zeta::{special_value, NormStructure};
    use shintani_core::Error;

    let pm = pseudo_from_cone(&inst.f, &inst.cone, &inst.level).unwrap();
    let n = pm.dim;
    let caps = vec![3; n];
    let vanishing = vanishing_route(pm.source.as_ref().unwrap()).unwrap();
    let divisibility = divisibility_route(&pm).unwrap();
    let exact = super::oracles::exact_amice(&pm, &caps);
    let series = amice_expand(&pm, &caps, precision);
    let pole = matches!(series, Err(Error::PoleDetected(_)));
    let (mut moments, mut integral) = (None, None);
    if let Ok(s) = &series {
        let big = tensor_at_p(&inst.f, &inst.level).unwrap();
        let kappa = ConeFunction::single(inst.cone.clone());
        let ns = NormStructure::standard(n);
        moments = Some(
            (0..=3)
                .map(|k| {
                    let m = moment(s, &NormPoly::product(n), k).unwrap();
                    m.agrees_with(&special_value(&big, &kappa, &ns, k).unwrap(), precision)
                })
                .collect(),
        );
        let ctx = PadicCtx::new(inst.p, precision).unwrap();
        integral = exact.as_ref().map(|ex| {
            let mut all = super::oracles::all_exponents(&caps);
            all.retain(|e| !ex.contains_key(e));
            ex.iter().all(|(e, c)| super::oracles::is_p_integral(c, inst.p) && ctx.from_rational(c) == Some(s.get(e)))
                && all.iter().all(|e| s.get(e) == 0)
        });
    }
    Report { vanishing, divisibility, pole, rational_expansion: exact.is_some(), moments, integral }
}
