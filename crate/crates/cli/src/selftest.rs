//! Invariant suites run by `shintani-kit selftest`.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use shintani_core::cones::{cocycle_defect, hill_cone_function, hill_eval, ConeFunction, GLTuple, OpenCone};
use shintani_core::exact::{bernoulli_numbers, int, parse_rational};
use shintani_core::linalg::QMatrix;
use shintani_core::padic::{
    amice_expand, divisibility_route, kubota_leopoldt, moment, pseudo_from_cone, vanishing_route, NormPoly,
};
use shintani_core::quadratic::{
    exact_partial_zeta, padic_partial_zeta, ray_unit_generator, shintani_domain_2d, IdealHNF, RQField, RayClassSetup,
    ZetaVariant,
};
use shintani_core::test_functions::{tensor_at_p, PLevelSet, TestFunction};
use shintani_core::zeta::{hurwitz_closed_form, special_value, special_value_cone, NormStructure};
use shintani_core::{QVec, Rational};

use crate::output::Record;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Quick,
    Full,
}

/// Reference `B_0, …, B_12`.
const BERNOULLI: [&str; 13] = ["1", "-1/2", "1/6", "0", "-1/30", "0", "1/42", "0", "-1/30", "0", "5/66", "0", "-691/2730"];

struct Suite {
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite { name, checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, pass: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !pass {
            self.failures.push(what());
        }
    }

    fn json(&self) -> Value {
        json!({ "name": self.name, "passed": self.failures.is_empty(), "checks": self.checks, "failures": self.failures })
    }
}

fn reference_bernoulli(tamper: bool) -> Vec<Rational> {
    let mut b: Vec<Rational> = BERNOULLI.iter().map(|s| parse_rational(s).unwrap()).collect();
    if tamper {
        b[4] = parse_rational("-1/31").unwrap();
    }
    b
}

fn ray() -> OpenCone {
    OpenCone::from_i64(&[&[1]]).unwrap()
}

fn bernoulli(level: Level, tamper: bool) -> Suite {
    let mut s = Suite::new("bernoulli");
    let b = reference_bernoulli(tamper);
    let computed = bernoulli_numbers(12);
    for (i, (x, y)) in b.iter().zip(&computed).enumerate() {
        s.check(x == y, || format!("B_{i}: reference {x}, computed {y}"));
    }
    let kmax = if level == Level::Quick { 7 } else { 11 };
    let ns = NormStructure::standard(1);
    let f = TestFunction::standard_lattice(1);
    for k in 0..=kmax {
        let v = special_value_cone(&f, &ray(), &ns, k).unwrap();
        let e = &b[k as usize + 1] / int(k as i64 + 1);
        let e = if k % 2 == 0 { e } else { -e };
        s.check(v == e, || format!("ζ(−{k}) = {v}, Bernoulli gives {e}"));
    }
    s
}

fn hurwitz(level: Level) -> Suite {
    let mut s = Suite::new("hurwitz");
    let (fmax, kmax) = if level == Level::Quick { (4, 3) } else { (6, 5) };
    let ns = NormStructure::standard(1);
    for f in 1..=fmax {
        for a in 1..=f {
            let tf = TestFunction::progression(int(a), int(f)).unwrap();
            for k in 0..=kmax {
                let v = special_value_cone(&tf, &ray(), &ns, k).unwrap();
                s.check(v == hurwitz_closed_form(&int(a), &int(f), k), || format!("a={a} f={f} k={k}"));
            }
        }
    }
    s
}

fn random_sl(r: &mut ChaCha8Rng, n: usize) -> QMatrix {
    let mut m = QMatrix::identity(n);
    for _ in 0..3 * n {
        let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
        if i == j {
            continue;
        }
        let c = r.gen_range(-2i64..=2);
        let mut e = QMatrix::identity(n);
        e.set(i, j, int(c));
        m = m.mul(&e);
    }
    m
}

fn random_vec(r: &mut ChaCha8Rng, n: usize, b: i64) -> QVec {
    loop {
        let v: QVec = (0..n).map(|_| int(r.gen_range(-b..=b))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

fn cocycle(level: Level, r: &mut ChaCha8Rng) -> Suite {
    let mut s = Suite::new("cocycle");
    let count = if level == Level::Quick { 4 } else { 20 };
    for n in [2usize, 3] {
        let mut done = 0;
        while done < count {
            let ts: Vec<QMatrix> = (0..=n).map(|_| random_sl(r, n)).collect();
            let samples: Vec<QVec> = (0..50).map(|_| random_vec(r, n, 6)).collect();
            match cocycle_defect(&ts, &QMatrix::identity(n), &samples) {
                Ok(v) => {
                    done += 1;
                    s.check(v.iter().all(|x| *x == v[0]), || format!("n={n}: defect not constant"));
                }
                Err(shintani_core::Error::DegenerateTuple) => continue,
                Err(e) => {
                    done += 1;
                    s.check(false, || e.to_string());
                }
            }
        }
    }
    s
}

fn hill(level: Level, r: &mut ChaCha8Rng) -> Suite {
    let mut s = Suite::new("hill_decomposition");
    let count = if level == Level::Quick { 3 } else { 10 };
    for n in [2usize, 3] {
        let mut done = 0;
        while done < count {
            let t = match GLTuple::new((0..n).map(|_| random_sl(r, n)).collect(), QMatrix::identity(n)) {
                Ok(t) if !t.is_degenerate() => t,
                _ => continue,
            };
            done += 1;
            let k = match hill_cone_function(&t) {
                Ok(k) => k,
                Err(e) => {
                    s.check(false, || e.to_string());
                    continue;
                }
            };
            for _ in 0..40 {
                let v = random_vec(r, n, 5);
                let h = hill_eval(&t, &v).unwrap();
                s.check(k.eval(&v) == h, || format!("n={n} v={v:?}"));
            }
        }
    }
    s
}

fn coprime(r: &mut ChaCha8Rng, hi: i64, avoid: &[u64]) -> i64 {
    loop {
        let x = r.gen_range(1..=hi);
        if avoid.iter().all(|&q| x % q as i64 != 0) {
            return x;
        }
    }
}

/// A random `(f′, C)` with `f′` optionally smoothed by `ℓ`.
fn instance(r: &mut ChaCha8Rng, p: u64, dim: usize, smoothed: bool) -> (TestFunction, OpenCone) {
    let ell = if p == 3 { 2i64 } else { 5 };
    let avoid = [p, ell as u64];
    if dim == 1 {
        let m = coprime(r, 4, &avoid);
        let a = r.gen_range(1..=m);
        let mut f = TestFunction::progression(int(a), int(m)).unwrap();
        if smoothed {
            let c = a + m * r.gen_range(0..ell);
            f = f.sub(&TestFunction::progression(int(c), int(m * ell)).unwrap().scale(ell));
        }
        let g = r.gen_range(1..=3);
        return (f, OpenCone::from_i64(&[&[g]]).unwrap());
    }
    let cone = loop {
        let gens: Vec<QVec> = (0..2).map(|_| (0..2).map(|_| int(r.gen_range(1..=3))).collect()).collect();
        if QMatrix::from_columns(&gens).rank() == 2 {
            break OpenCone::new(gens).unwrap();
        }
    };
    let lat = QMatrix::from_i64_rows(&[&[coprime(r, 3, &avoid), 0], &[0, coprime(r, 3, &avoid)]]);
    let a: QVec = (0..2).map(|_| int(r.gen_range(0..=3))).collect();
    let mut f = TestFunction::indicator(a.clone(), lat.clone()).unwrap();
    if smoothed {
        let t = r.gen_range(0..ell);
        let sub = lat.mul(&QMatrix::from_i64_rows(&[&[1, 0], &[t, ell]]));
        f = f.sub(&TestFunction::indicator(a, sub).unwrap().scale(ell));
    }
    (f, cone)
}

fn measures(level: Level, r: &mut ChaCha8Rng) -> Vec<Suite> {
    let mut routes = Suite::new("route_agreement");
    let mut master = Suite::new("master_moment_identity");
    let count = if level == Level::Quick { 8 } else { 40 };
    let m = 8;
    for i in 0..count {
        let p = if (i / 2) % 2 == 0 { 3 } else { 7 };
        let dim = 1 + i % 2;
        let (f, cone) = instance(r, p, dim, i % 4 != 3);
        let f = f.certify_away_from(p).unwrap();
        let u = if r.gen_bool(0.5) {
            PLevelSet::full(p, dim)
        } else {
            PLevelSet::from_predicate(p, 1, dim, move |x| x.iter().all(|v| !(v % BigInt::from(p)).is_zero()))
        };
        let pm = pseudo_from_cone(&f, &cone, &u).unwrap();
        let b = divisibility_route(&pm).unwrap();
        let a = vanishing_route(pm.source.as_ref().unwrap()).unwrap();
        routes.check(a == b, || format!("instance {i}: vanishing {a}, divisibility {b}"));
        if !b {
            continue;
        }
        let series = match amice_expand(&pm, &vec![3; dim], m) {
            Ok(s) => s,
            Err(e) => {
                master.check(false, || format!("instance {i}: {e}"));
                continue;
            }
        };
        let big = tensor_at_p(&f, &u).unwrap();
        let kappa = ConeFunction::single(cone.clone());
        for k in 0..=3 {
            let mom = moment(&series, &NormPoly::product(dim), k).unwrap();
            let exact = special_value(&big, &kappa, &NormStructure::standard(dim), k).unwrap();
            master.check(mom.agrees_with(&exact, m), || format!("instance {i}, k={k}: {mom} vs {exact}"));
        }
    }
    vec![routes, master]
}

fn tiling(level: Level, r: &mut ChaCha8Rng) -> Suite {
    let mut s = Suite::new("shintani_tiling");
    let ds: &[i64] = if level == Level::Quick { &[5] } else { &[5, 2, 3] };
    for &d in ds {
        let field = RQField::new(d).unwrap();
        let units = ray_unit_generator(&field, &IdealHNF::unit()).unwrap();
        let dom = shintani_domain_2d(&field, &units).unwrap();
        let inv = field.inverse(&units.eps).unwrap();
        let mut seen = 0;
        while seen < 20 {
            let x: QVec = (0..2).map(|_| int(r.gen_range(-9..=9))).collect();
            if !field.is_totally_positive(&x) {
                continue;
            }
            seen += 1;
            let mut y = x.clone();
            for _ in 0..25 {
                y = field.mul(&y, &inv);
            }
            let mut hits = 0;
            for _ in 0..50 {
                hits += dom.eval(&y);
                y = field.mul(&y, &units.eps);
            }
            s.check(hits == 1, || format!("D={d} x={x:?}: {hits} hits"));
        }
    }
    s
}

fn interpolation(level: Level) -> Suite {
    let mut s = Suite::new("interpolation");
    let cases: &[(i64, u64, u64, u32)] =
        if level == Level::Quick { &[(5, 3, 11, 0)] } else { &[(5, 3, 11, 0), (2, 5, 7, 0), (3, 5, 11, 0), (5, 3, 11, 1)] };
    for &(d, p, ell, m) in cases {
        let setup = match RayClassSetup::new(RQField::new(d).unwrap(), IdealHNF::unit(), p, ell, m) {
            Ok(x) => x,
            Err(e) => {
                s.check(false, || format!("D={d}: {e}"));
                continue;
            }
        };
        for a in &setup.reps {
            match padic_partial_zeta(&setup, a, &[0, 1, 2], 6) {
                Ok(vals) => {
                    for (k, v) in vals.iter().enumerate() {
                        let exact = exact_partial_zeta(&setup, a, k as u32, ZetaVariant::SmoothedStar).unwrap();
                        s.check(v.agrees_with(&exact, 6), || format!("D={d} m={m} k={k}: {v} vs {exact}"));
                    }
                }
                Err(e) => s.check(false, || format!("D={d} m={m}: {e}")),
            }
        }
    }
    s
}

fn kubota_leopoldt_suite(tamper: bool) -> Suite {
    let mut s = Suite::new("kubota_leopoldt");
    let b = reference_bernoulli(tamper);
    let kl = kubota_leopoldt(3, 2, 12, 8, &[0, 1, 2, 3, 4, 5]).unwrap();
    for (k, full, _) in &kl.moments {
        let z = &b[*k as usize + 1] / int(*k as i64 + 1);
        let z = if k % 2 == 0 { z } else { -z };
        let exact = (int(1) - num_traits::pow(int(2), *k as usize + 1)) * z;
        s.check(full.agrees_with(&exact, 8), || format!("k={k}: {full} vs {exact}"));
    }
    s
}

pub fn run(level: Level, tamper_bernoulli: bool) -> Record {
    let mut r = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut suites = vec![bernoulli(level, tamper_bernoulli), hurwitz(level), cocycle(level, &mut r), hill(level, &mut r)];
    suites.extend(measures(level, &mut r));
    suites.push(tiling(level, &mut r));
    suites.push(interpolation(level));
    suites.push(kubota_leopoldt_suite(tamper_bernoulli));
    let mut rec = Record::new(
        "selftest",
        json!({ "level": if level == Level::Quick { "quick" } else { "full" }, "tampered_bernoulli": tamper_bernoulli }),
    );
    rec.values = Value::Array(suites.iter().map(Suite::json).collect());
    for s in &suites {
        rec.certify(s.name, s.failures.is_empty());
    }
    rec
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_table_matches_and_canary_trips() {
        assert!(bernoulli(Level::Quick, false).failures.is_empty());
        assert!(!bernoulli(Level::Quick, true).failures.is_empty());
    }

    #[test]
    fn random_sl_has_unit_determinant() {
        let mut r = ChaCha8Rng::seed_from_u64(1);
        for n in [2, 3] {
            assert_eq!(random_sl(&mut r, n).det(), int(1));
        }
    }
}
