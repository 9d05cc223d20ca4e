//! Acceptance run: one line per criterion, non-zero exit on any failure.

mod common;

use std::time::{Duration, Instant};

use common::hill::{nondegenerate_tuple, sample_points};
use common::instances::{examine, instance_family, Report};
use common::oracles::*;
use rand::Rng;
use shintani_core::cones::{cocycle_defect, hill_cone_function, hill_eval, OpenCone};
use shintani_core::exact::{int, rat, Rational};
use shintani_core::linalg::{QMatrix, QVec};
use shintani_core::padic::{amice_expand_signed, kubota_leopoldt, pseudo_from_cone, smoothed_integers, PadicCtx};
use shintani_core::quadratic::*;
use shintani_core::test_functions::{PLevelSet, TestFunction};
use shintani_core::zeta::{special_value, special_value_cone, NormStructure};
use shintani_core::Error;

/// Moment precision for criterion 5 and its declared guard.
const MEASURE_PRECISION: u32 = 8;
const MEASURE_GUARD: u32 = 0;
/// Precision for criteria 7 and 8.
const INTERPOLATION_PRECISION: u32 = 6;
const INTERPOLATION_GUARD: u32 = 0;
const KL_PRECISION: u32 = 8;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn ray() -> OpenCone {
    OpenCone::from_i64(&[&[1]]).unwrap()
}

fn hurwitz() -> Outcome {
    let ns = NormStructure::standard(1);
    let mut bad = Vec::new();
    let mut n = 0;
    for f in 1..=6i64 {
        for a in 1..=f {
            for k in 0..=5u32 {
                n += 1;
                let tf = TestFunction::progression(int(a), int(f)).unwrap();
                let v = special_value_cone(&tf, &ray(), &ns, k).unwrap();
                if v != hurwitz_oracle(a, f, k) {
                    bad.push((a, f, k));
                }
            }
        }
    }
    // the full range 1 ≤ a ≤ f ≤ 6, 0 ≤ k ≤ 5 has 21·6 = 126 cases
    outcome(n == 126 && bad.is_empty(), format!("{}/{n} exact over the full range; mismatches {bad:?}", n - bad.len()))
}

fn riemann() -> Outcome {
    let ns = NormStructure::standard(1);
    let f = TestFunction::standard_lattice(1);
    let expected = [(0, rat(-1, 2)), (1, rat(-1, 12)), (3, rat(1, 120))];
    let got: Vec<Rational> = expected.iter().map(|(k, _)| special_value_cone(&f, &ray(), &ns, *k).unwrap()).collect();
    let pass = expected.iter().zip(&got).all(|((k, e), g)| e == g && *g == riemann_oracle(*k));
    let shown: Vec<String> = got.iter().map(|g| g.to_string()).collect();
    outcome(pass, format!("ζ(0), ζ(−1), ζ(−3) = {}", shown.join(", ")))
}

fn sqrt5() -> Outcome {
    let field = RQField::new(5).unwrap();
    let s = RayClassSetup::new(field.clone(), IdealHNF::unit(), 3, 11, 0).unwrap();
    let a = &s.reps[0];
    let v1 = exact_partial_zeta(&s, a, 1, ZetaVariant::Plain).unwrap();
    let v0 = exact_partial_zeta(&s, a, 0, ZetaVariant::Plain).unwrap();
    let direct = special_value(&TestFunction::standard_lattice(2), &s.domain().unwrap(), &field.norm_structure(), 1).unwrap();
    let siegel = siegel_zeta_minus_one(5);
    let pass = s.reps.len() == 1 && v1 == rat(1, 30) && v0 == int(0) && direct == v1 && siegel == v1;
    outcome(pass, format!("k=1: {v1} (Siegel {siegel}), k=0: {v0}"))
}

fn measure_reports() -> Vec<(u64, usize, bool, Report)> {
    instance_family(41, 40)
        .iter()
        .map(|i| (i.p, i.f.dim(), i.smoothed, examine(i, MEASURE_PRECISION)))
        .collect()
}

fn routes(reports: &[(u64, usize, bool, Report)]) -> Outcome {
    let n = reports.len();
    let dims: Vec<usize> = reports.iter().map(|r| r.1).collect();
    let agree = reports.iter().filter(|r| r.3.vanishing == r.3.divisibility && r.3.divisibility != r.3.pole).count();
    let unsmoothed: Vec<&Report> = reports.iter().filter(|r| !r.2).map(|r| &r.3).collect();
    let rejected = unsmoothed.iter().filter(|r| !r.divisibility && r.pole).count();
    let smoothed = n - unsmoothed.len();
    let pass = n >= 30 && dims.contains(&1) && dims.contains(&2) && agree == n && rejected == unsmoothed.len();
    outcome(
        pass,
        format!(
            "{agree}/{n} verdicts agree ({smoothed} smoothed, {} unsmoothed); unsmoothed rejected {rejected}/{}",
            unsmoothed.len(),
            unsmoothed.len()
        ),
    )
}

fn master_identity(reports: &[(u64, usize, bool, Report)]) -> Outcome {
    let measures: Vec<&(u64, usize, bool, Report)> = reports.iter().filter(|r| r.3.divisibility).collect();
    let ok = measures.iter().filter(|r| r.3.moments.as_deref() == Some(&[true; 4][..])).count();
    let primes: Vec<u64> = measures.iter().map(|r| r.0).collect();
    let pass = !measures.is_empty() && ok == measures.len() && primes.contains(&3) && primes.contains(&7);
    outcome(
        pass,
        format!(
            "{ok}/{} measures, k=0..3, mod p^{} (M={MEASURE_PRECISION}, g={MEASURE_GUARD}), p ∈ {{3, 7}}",
            measures.len(),
            MEASURE_PRECISION - MEASURE_GUARD
        ),
    )
}

fn hill() -> Outcome {
    let mut r = common::rng(2024);
    let mut tuples = 0;
    let mut failures = Vec::new();
    for n in [2usize, 3] {
        for _ in 0..20 {
            let t = nondegenerate_tuple(&mut r, n);
            tuples += 1;
            let k = hill_cone_function(&t).unwrap();
            let u = t.leading_vectors();
            let umat = QMatrix::from_columns(&u);
            let s = if umat.det() > int(0) { 1 } else { -1 };
            let open = OpenCone::new(u.clone()).unwrap();
            let uinv = umat.inverse().unwrap();
            for v in sample_points(&mut r, &t, 100) {
                let h = hill_eval(&t, &v).unwrap();
                if k.eval(&v) != h {
                    failures.push(format!("eval n={n}"));
                }
                if (open.contains(&v) && h != s) || (h != 0 && !uinv.mul_vec(&v).iter().all(|x| *x >= int(0))) {
                    failures.push(format!("sandwich n={n}"));
                }
            }
        }
        let mut done = 0;
        while done < 20 {
            let ts: Vec<QMatrix> = (0..=n).map(|_| common::random_sl(&mut r, n, 6)).collect();
            let samples: Vec<QVec> = (0..50).map(|_| common::random_vec(&mut r, n, 6)).collect();
            match cocycle_defect(&ts, &QMatrix::identity(n), &samples) {
                Ok(vals) => {
                    done += 1;
                    if vals.iter().any(|x| *x != vals[0]) {
                        failures.push(format!("cocycle n={n}"));
                    }
                }
                Err(Error::DegenerateTuple) => continue,
                Err(e) => failures.push(e.to_string()),
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{tuples} tuples × 100 points, 40 cocycle tuples × 50 samples; failures {failures:?}"),
    )
}

struct InterpolationRun {
    outcome: Outcome,
    families: Vec<(RayClassSetup, IdealHNF)>,
}

fn interpolation() -> InterpolationRun {
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut signs = Vec::new();
    let mut families = Vec::new();
    let m_prec = INTERPOLATION_PRECISION;
    for (d, p, ell) in [(5i64, 3u64, 11u64), (2, 5, 7), (3, 5, 11)] {
        for m in [0u32, 1] {
            let s = match RayClassSetup::new(RQField::new(d).unwrap(), IdealHNF::unit(), p, ell, m) {
                Ok(s) => s,
                Err(e) => {
                    bad.push(format!("D={d} m={m}: {e}"));
                    continue;
                }
            };
            for a in &s.reps {
                let cm = class_measure(&s, a, 4, m_prec);
                let vals = padic_partial_zeta(&s, a, &[0, 1, 2], m_prec);
                match (cm, vals) {
                    (Ok(cm), Ok(vals)) => {
                        signs.push(cm.sign);
                        for (k, v) in vals.iter().enumerate() {
                            checked += 1;
                            let exact = exact_partial_zeta(&s, a, k as u32, ZetaVariant::SmoothedStar).unwrap();
                            if !v.agrees_with(&exact, m_prec - INTERPOLATION_GUARD) {
                                bad.push(format!("D={d} m={m} k={k}"));
                            }
                        }
                    }
                    (Err(e), _) | (_, Err(e)) => bad.push(format!("D={d} m={m}: {e}")),
                }
            }
            families.push((s.clone(), s.reps[0].clone()));
        }
    }
    let uniform = signs.iter().all(|&x| x == 1);
    InterpolationRun {
        outcome: outcome(
            bad.is_empty() && checked > 0,
            format!(
                "{}/{checked} values mod p^{} over {} classes (sign {}); failures {bad:?}",
                checked - bad.len(),
                m_prec - INTERPOLATION_GUARD,
                signs.len(),
                if uniform { "+1 throughout" } else { "mixed" }
            ),
        ),
        families,
    }
}

fn kubota_leopoldt_check() -> (Outcome, bool) {
    let p = 3u64;
    let ell = 2u64;
    let m = KL_PRECISION;
    let mut r = common::rng(77);
    let mut pairs = Vec::new();
    while pairs.len() < 10 {
        let k = r.gen_range(1..=8u32);
        let j = r.gen_range(0..=2u32);
        let t = r.gen_range(1..=2u32);
        let k2 = k + t * (p as u32 - 1) * (p as u32).pow(j);
        if k2 <= 26 {
            pairs.push((k, k2, j));
        }
    }
    let ks: Vec<u32> = (0..=26).collect();
    let kl = kubota_leopoldt(p, ell, 27, m, &ks).unwrap();
    let mass = &kl.moments[0].1;
    let first = &kl.moments[1].1;
    let mut failures = Vec::new();
    if !mass.agrees_with(&rat(1, 2), m) || !first.agrees_with(&rat(1, 4), m) {
        failures.push("mass/first moment".to_string());
    }
    // q/(1+q) = (1+T)/(2+T) = (1+T)·½·Σ(−T/2)^j
    let pm = pseudo_from_cone(&smoothed_integers(ell, p).unwrap(), &ray(), &PLevelSet::full(p, 1)).unwrap();
    let exact = exact_amice(&pm, &[10]).unwrap();
    for j in 0..=10u32 {
        let geo = |i: u32| pow(&rat(-1, 2), i) / int(2);
        let want = geo(j) + if j > 0 { geo(j - 1) } else { int(0) };
        if exact.get(&vec![j]).cloned().unwrap_or_else(|| int(0)) != want {
            failures.push(format!("rational function at T^{j}"));
        }
    }
    for &(k, k2, j) in &pairs {
        let digits = (j + 1).min(m);
        let (u1, u2) = (&kl.moments[k as usize].2, &kl.moments[k2 as usize].2);
        let ex = |k: u32| {
            (int(1) - pow(&int(ell as i64), k + 1)) * (int(1) - pow(&int(p as i64), k)) * riemann_oracle(k)
        };
        if !u1.agrees_with_scalar(u2, digits) || !congruent_mod(&ex(k), &ex(k2), p, digits) {
            failures.push(format!("Kummer ({k}, {k2})"));
        }
    }
    let series_ok = exact.iter().all(|(e, c)| {
        is_p_integral(c, p) && PadicCtx::new(p, m).unwrap().from_rational(c) == Some(kl.series.get(e))
    });
    let shown: Vec<String> = pairs.iter().map(|(a, b, _)| format!("({a},{b})")).collect();
    (
        outcome(
            failures.is_empty(),
            format!("mass {}, first moment {}; Kummer pairs {}; failures {failures:?}", mass, first, shown.join(" ")),
        ),
        series_ok,
    )
}

fn integrality(
    reports: &[(u64, usize, bool, Report)],
    families: &[(RayClassSetup, IdealHNF)],
    kl_ok: bool,
) -> Outcome {
    let measures: Vec<&Report> = reports.iter().filter(|r| r.3.divisibility).map(|r| &r.3).collect();
    let random_ok = measures.iter().filter(|r| r.integral == Some(true)).count();
    let mut fam_ok = 0;
    let mut terms = 0;
    for (s, a) in families {
        let fam = class_family(s, a).unwrap();
        let caps = [2u32, 2];
        let series = amice_expand_signed(&fam, &caps, INTERPOLATION_PRECISION).unwrap();
        let ctx = PadicCtx::new(s.p, INTERPOLATION_PRECISION).unwrap();
        let mut total = std::collections::BTreeMap::<Vec<u32>, Rational>::new();
        let mut ok = true;
        for (w, pm) in &fam.terms {
            terms += 1;
            match exact_amice(pm, &caps) {
                Some(ex) => {
                    for (e, c) in ex {
                        ok &= is_p_integral(&c, s.p);
                        *total.entry(e).or_insert_with(|| int(0)) += c * int(*w);
                    }
                }
                None => ok = false,
            }
        }
        ok &= all_exponents(&caps).iter().all(|e| {
            let c = total.get(e).cloned().unwrap_or_else(|| int(0));
            ctx.from_rational(&c) == Some(series.get(e))
        });
        fam_ok += usize::from(ok);
    }
    outcome(
        random_ok == measures.len() && fam_ok == families.len() && kl_ok,
        format!(
            "random measures {random_ok}/{}, class families {fam_ok}/{} ({terms} cone terms), Kubota–Leopoldt {}",
            measures.len(),
            families.len(),
            if kl_ok { "ok" } else { "failed" }
        ),
    )
}

fn report(n: usize, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let o = f();
    let took = start.elapsed();
    let pass = o.pass && took <= limit;
    println!(
        "[{}] {n}. {name}: {} ({:.2}s, limit {}s)",
        if pass { "PASS" } else { "FAIL" },
        o.detail,
        took.as_secs_f64(),
        limit.as_secs()
    );
    pass
}

fn main() {
    let secs = Duration::from_secs;
    let mut all = true;
    all &= report(1, "Hurwitz oracle", secs(10), hurwitz);
    all &= report(2, "Riemann values", secs(1), riemann);
    all &= report(3, "ℚ(√5) zeta", secs(30), sqrt5);
    let start = Instant::now();
    let reports = measure_reports();
    let shared = start.elapsed();
    all &= report(4, "measure criterion equivalence", secs(120), || {
        let mut o = routes(&reports);
        o.detail = format!("{} [shared instance build {:.2}s]", o.detail, shared.as_secs_f64());
        o
    });
    all &= report(5, "master moment identity", secs(300), || master_identity(&reports));
    all &= report(6, "Hill cocycle properties", secs(180), hill);
    let mut families = Vec::new();
    all &= report(7, "interpolation at n = 2", secs(600), || {
        let run = interpolation();
        families = run.families;
        run.outcome
    });
    let mut kl_ok = false;
    all &= report(8, "Kubota–Leopoldt sanity", secs(60), || {
        let (o, ok) = kubota_leopoldt_check();
        kl_ok = ok;
        o
    });
    all &= report(9, "integrality scan", secs(300), || integrality(&reports, &families, kl_ok));
    if !all {
        std::process::exit(1);
    }
}
