//! The computational subcommands.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use shintani_core::cones::{hill_cone_function, hill_eval, ConeFunction, GLTuple, OpenCone};
use shintani_core::exact::{bernoulli_number, format_rational, int};
use shintani_core::linalg::QMatrix;
use shintani_core::padic::{
    amice_expand_signed, divisibility_route, is_prime, kubota_leopoldt, moment, pseudo_from_cone_function,
    vanishing_route, NormPoly, PadicScalar,
};
use shintani_core::quadratic::{
    exact_partial_zeta, padic_partial_zeta, padic_partial_zeta_at_s_with_cutoff, IdealHNF, RQField, RayClassSetup,
    ZetaVariant,
};
use shintani_core::test_functions::{tensor_at_p, PLevelSet, TestFunction};
use shintani_core::zeta::{hurwitz_closed_form, special_value, NormStructure};
use shintani_core::{Error, QVec, Rational};

use crate::config::{ConfigError, LevelKind, Loaded, Num, Preset};
use crate::output::{padic, rational, rational_vec, Record};

/// Failure of a command before a record could be produced.
#[derive(Debug)]
pub enum Failure {
    Config(ConfigError),
    Contract(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BadSmoothingData(m) => Failure::Config(ConfigError::new(m)),
            Error::InvalidInput(_)
            | Error::NotAwayFromP(_)
            | Error::DimensionMismatch(_)
            | Error::DependentGenerators
            | Error::SingularMatrix
            | Error::ZeroVector
            | Error::DegenerateTuple
            | Error::NotInPositiveOrthant
            | Error::NonUnitScaling(_) => Failure::Config(ConfigError::new(e.to_string())),
            Error::RouteDisagreement { .. } | Error::SignCalibrationFailure | Error::VerificationFailed(_) => {
                Failure::Contract(e.to_string())
            }
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

pub type CmdResult = std::result::Result<Record, Failure>;

fn ray() -> OpenCone {
    OpenCone::from_i64(&[&[1]]).unwrap()
}

fn strings(v: &[QVec]) -> Value {
    Value::Array(v.iter().map(|g| rational_vec(g)).collect())
}

fn cone_json(k: &ConeFunction) -> Value {
    json!({
        "terms": k.terms.iter().map(|(w, c)| json!({"weight": w, "generators": strings(c.generators())})).collect::<Vec<_>>(),
        "constant": k.constant,
    })
}

/// `[a + fℤ]` with `0 < a ≤ f` if the one-dimensional `f` is a sum of
/// progressions, for the closed-form cross-check.
fn progressions(f: &TestFunction) -> Option<Vec<(i64, Rational, Rational)>> {
    if f.dim() != 1 {
        return None;
    }
    f.terms()
        .iter()
        .map(|t| {
            let m = t.lattice.get(0, 0).abs();
            let a = &t.offset[0] - &m * (&t.offset[0] / &m).floor();
            let a = if a.is_zero() { m.clone() } else { a };
            Some((t.coeff, a, m))
        })
        .collect()
}

fn is_standard_ray(k: &ConeFunction) -> bool {
    k.constant == 0 && k.terms.len() == 1 && k.terms[0].0 == 1 && k.terms[0].1 == ray()
}

/// Picks `(p, ℓ)` for exact-only field runs when the config leaves them open.
fn auto_setup(field: &RQField, f: &IdealHNF, p: Option<u64>, ell: Option<u64>, m: u32) -> Result<RayClassSetup, Failure> {
    let primes: Vec<u64> = (2..200).filter(|&q| is_prime(q)).collect();
    let ps: Vec<u64> = match p {
        Some(p) => vec![p],
        None => primes.iter().copied().filter(|&q| q > 2).collect(),
    };
    let mut last = None;
    for &p in &ps {
        let ells: Vec<u64> = match ell {
            Some(l) => vec![l],
            None => primes.iter().copied().filter(|&q| q != p).collect(),
        };
        for &l in &ells {
            match RayClassSetup::new(field.clone(), f.clone(), p, l, m) {
                Ok(s) => return Ok(s),
                Err(e) => last = Some(e),
            }
        }
    }
    Err(last.map(Failure::from).unwrap_or_else(|| Failure::Runtime("no admissible (p, ℓ)".into())))
}

struct FieldRun {
    setup: RayClassSetup,
    classes: Vec<usize>,
}

fn field_setup(cfg: &Loaded, p: Option<u64>, require_ell: bool) -> Result<FieldRun, Failure> {
    let fc = cfg.config.field.clone();
    let d = match (&fc, cfg.config.preset) {
        (Some(f), _) => f.d,
        (None, Some(Preset::RqField)) => 5,
        _ => return Err(ConfigError::new("missing [field] table").into()),
    };
    let conductor = fc.as_ref().map_or(1, |f| f.conductor);
    let m = fc.as_ref().map_or(0, |f| f.m);
    let mut ell = cfg.config.ell;
    if ell.is_none() && require_ell && cfg.config.preset == Some(Preset::RqField) && d == 5 {
        ell = Some(11);
    }
    if let (Some(p), Some(l)) = (p, ell) {
        if p == l {
            return Err(cfg.err("ell", "smoothing prime must differ from p").into());
        }
    }
    if require_ell && ell.is_none() {
        return Err(ConfigError::new("missing smoothing prime ell").into());
    }
    if let Some(l) = ell {
        if !is_prime(l) {
            return Err(cfg.err("ell", format!("ell = {l} is not prime")).into());
        }
    }
    if conductor < 1 {
        return Err(cfg.err("conductor", "conductor must be a positive integer").into());
    }
    let field = RQField::new(d).map_err(|e| cfg.err("d", e.to_string()))?;
    let f = IdealHNF::from_integer(&field, conductor).map_err(|e| cfg.err("conductor", e.to_string()))?;
    let setup = match (p, ell) {
        (Some(p), Some(l)) => {
            RayClassSetup::new(field, f, p, l, m).map_err(|e| with_line(cfg, e, &["ell", "conductor", "d"]))?
        }
        _ => auto_setup(&field, &f, p, ell, m)?,
    };
    let classes = match fc.and_then(|f| f.classes) {
        Some(c) => {
            if let Some(&bad) = c.iter().find(|&&i| i >= setup.reps.len()) {
                return Err(cfg.err("classes", format!("class index {bad} out of range (0..{})", setup.reps.len())).into());
            }
            c
        }
        None => (0..setup.reps.len()).collect(),
    };
    Ok(FieldRun { setup, classes })
}

fn with_line(cfg: &Loaded, e: Error, keys: &[&str]) -> Failure {
    match Failure::from(e) {
        Failure::Config(c) => {
            let line = if c.message.contains("smoothing") || c.message.contains("ℓ") { cfg.line_of(keys[0]) } else { None };
            Failure::Config(c.at(line))
        }
        other => other,
    }
}

fn ideal_json(a: &IdealHNF) -> Value {
    json!({ "basis": strings(&a.basis().columns()), "norm": rational(&a.norm()) })
}

pub fn zeta(cfg: &Loaded) -> CmdResult {
    let ks = cfg.ks();
    if cfg.config.preset == Some(Preset::RqField) || (cfg.config.field.is_some() && cfg.config.function.is_none()) {
        return zeta_field(cfg, &ks);
    }
    let (f, kappa, label) = match cfg.config.preset {
        Some(Preset::Riemann) => (TestFunction::standard_lattice(1), ConeFunction::single(ray()), json!("riemann")),
        Some(Preset::Hurwitz) => {
            let (a, m) = cfg.hurwitz()?;
            let label = json!({"preset": "hurwitz", "a": rational(&a), "f": rational(&m)});
            (TestFunction::progression(a, m)?, ConeFunction::single(ray()), label)
        }
        _ => (cfg.test_function()?, cfg.cone_function()?, json!("custom")),
    };
    let n = f.dim();
    let mut rec = Record::new("zeta", json!({ "input": label, "dim": n, "k": ks, "cone": cone_json(&kappa) }));
    let ns = NormStructure::standard(n);
    let values: Vec<Rational> = ks.iter().map(|&k| special_value(&f, &kappa, &ns, k)).collect::<Result<_, _>>()?;
    rec.values = rational_vec(&values);
    if let (Some(ps), true) = (progressions(&f), is_standard_ray(&kappa)) {
        let oracle: Vec<Rational> = ks
            .iter()
            .map(|&k| ps.iter().map(|(c, a, m)| int(*c) * hurwitz_closed_form(a, m, k)).sum())
            .collect();
        rec.note("hurwitz_oracle", rational_vec(&oracle));
        rec.certify("hurwitz_oracle_agrees", oracle == values);
    }
    Ok(rec)
}

fn zeta_field(cfg: &Loaded, ks: &[u32]) -> CmdResult {
    let p = cfg.config.precision.as_ref().and_then(|x| x.p);
    let run = field_setup(cfg, p, false)?;
    let s = &run.setup;
    let mut rec = Record::new(
        "zeta",
        json!({
            "input": "rq-field",
            "d": s.field.d(),
            "conductor": ideal_json(&s.f),
            "k": ks,
            "classes": run.classes,
        }),
    );
    let mut per_class = Vec::new();
    let mut total = vec![Rational::zero(); ks.len()];
    for &i in &run.classes {
        let a = &s.reps[i];
        let vals: Vec<Rational> =
            ks.iter().map(|&k| exact_partial_zeta(s, a, k, ZetaVariant::Plain)).collect::<Result<_, _>>()?;
        for (t, v) in total.iter_mut().zip(&vals) {
            *t += v;
        }
        per_class.push(json!({ "class": i, "ideal": ideal_json(a), "values": rational_vec(&vals) }));
    }
    rec.values = rational_vec(&total);
    rec.note("partial_values", Value::Array(per_class));
    rec.note("class_count", json!(s.reps.len()));
    Ok(rec)
}

fn default_tuple_points(n: usize) -> Vec<QVec> {
    let mut out = Vec::new();
    let mut idx = vec![-3i64; n];
    loop {
        if idx.iter().any(|&x| x != 0) {
            out.push(idx.iter().map(|&x| int(x)).collect());
        }
        let mut j = 0;
        loop {
            if j == n {
                return out;
            }
            idx[j] += 1;
            if idx[j] <= 3 {
                break;
            }
            idx[j] = -3;
            j += 1;
        }
    }
}

pub fn hill(cfg: &Loaded) -> CmdResult {
    let hc = cfg.config.hill.as_ref().ok_or_else(|| ConfigError::new("missing [hill] table"))?;
    let to_matrix = |rows: &Vec<Vec<Num>>| -> Result<QMatrix, Failure> {
        let rows: Vec<QVec> = rows.iter().map(|r| r.iter().map(Num::to_rational).collect()).collect::<Result<_, _>>()?;
        if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
            return Err(cfg.err("alphas", "matrices must be square").into());
        }
        Ok(QMatrix::from_rows(rows))
    };
    let alphas: Vec<QMatrix> = hc.alphas.iter().map(to_matrix).collect::<Result<_, _>>()?;
    let n = alphas.first().map(QMatrix::rows).ok_or_else(|| cfg.err("alphas", "alphas must be nonempty"))?;
    if alphas.len() != n {
        return Err(cfg.err("alphas", format!("a tuple in dimension {n} needs {n} matrices")).into());
    }
    let w = match &hc.w {
        Some(w) => to_matrix(w)?,
        None => QMatrix::identity(n),
    };
    let t = GLTuple::new(alphas, w).map_err(|e| cfg.err("alphas", e.to_string()))?;
    let points: Vec<QVec> =
        hc.points.iter().map(|v| v.iter().map(Num::to_rational).collect()).collect::<Result<_, ConfigError>>()?;
    if points.iter().any(|v| v.len() != n) {
        return Err(cfg.err("points", "points must have the tuple's dimension").into());
    }
    let mut rec = Record::new("hill", json!({ "dim": n, "points": strings(&points) }));
    rec.note("degenerate", json!(t.is_degenerate()));
    let kappa = hill_cone_function(&t)?;
    let vals: Vec<i64> = points.iter().map(|v| hill_eval(&t, v)).collect::<Result<_, _>>()?;
    let mut agree = points.iter().zip(&vals).all(|(v, h)| kappa.eval(v) == *h);
    for v in default_tuple_points(n) {
        agree &= kappa.eval(&v) == hill_eval(&t, &v)?;
    }
    rec.values = json!({ "cone_function": cone_json(&kappa), "at_points": vals });
    rec.certify("decomposition_matches_eval", agree);
    Ok(rec)
}

fn level_set(cfg: &Loaded, p: u64, dim: usize) -> Result<PLevelSet, Failure> {
    let Some(lc) = &cfg.config.level else {
        return Ok(PLevelSet::full(p, dim));
    };
    Ok(match lc.kind {
        LevelKind::Full => PLevelSet::full(p, dim),
        LevelKind::Units => {
            PLevelSet::from_predicate(p, 1, dim, move |x| x.iter().all(|v| !(v % BigInt::from(p)).is_zero()))
        }
        LevelKind::Coset => {
            let off = lc.offset.clone().ok_or_else(|| cfg.err("kind", "coset level needs an offset"))?;
            if off.len() != dim {
                return Err(cfg.err("offset", "level offset has the wrong dimension").into());
            }
            if lc.m == 0 {
                return Err(cfg.err("m", "coset level needs m ≥ 1").into());
            }
            PLevelSet::coset(p, lc.m, off.into_iter().map(BigInt::from).collect())
        }
    })
}

pub fn measure(cfg: &Loaded) -> CmdResult {
    let (p, m) = cfg.precision()?;
    let ks = cfg.config.k.clone().unwrap_or_else(|| vec![0, 1, 2, 3]);
    let (f, kappa) = match cfg.config.preset {
        Some(Preset::Riemann) => (TestFunction::standard_lattice(1), ConeFunction::single(ray())),
        Some(Preset::Hurwitz) => {
            let (a, fm) = cfg.hurwitz()?;
            (TestFunction::progression(a, fm)?, ConeFunction::single(ray()))
        }
        _ => (cfg.test_function()?, cfg.cone_function()?),
    };
    let n = f.dim();
    let f = f.certify_away_from(p).map_err(|e| cfg.err("lattice", e.to_string()))?;
    let u = level_set(cfg, p, n)?;
    let kmax = ks.iter().copied().max().unwrap_or(0);
    let caps = cfg.caps().unwrap_or_else(|| vec![kmax.max(3); n]);
    if caps.len() != n {
        return Err(cfg.err("caps", format!("caps needs {n} entries")).into());
    }
    let mut rec = Record::new("measure", json!({ "p": p, "M": m, "caps": caps, "k": ks, "dim": n, "cone": cone_json(&kappa) }));
    let fam = pseudo_from_cone_function(&f, &kappa, &u)?;
    let mut routes = Vec::new();
    let mut agree = true;
    let mut all_measures = true;
    for (w, pm) in &fam.terms {
        let divisibility = divisibility_route(pm)?;
        let vanishing = vanishing_route(pm.source.as_ref().expect("cone source"))?;
        agree &= vanishing == divisibility;
        all_measures &= divisibility;
        routes.push(json!({ "weight": w, "vanishing": vanishing, "divisibility": divisibility }));
    }
    rec.note("routes", Value::Array(routes));
    rec.certify("routes_agree", agree);
    rec.note("is_measure", json!(all_measures && agree));
    if !(all_measures && agree) {
        return Ok(rec);
    }
    let series = amice_expand_signed(&fam, &caps, m)?;
    let coefficients: Vec<Value> =
        series.terms().filter(|(_, c)| *c != 0).map(|(e, c)| json!({ "exponent": e, "value": padic(&PadicScalar::new(c, p, m), m) })).collect();
    let big = tensor_at_p(&f, &u)?;
    let ns = NormStructure::standard(n);
    let norm = NormPoly::product(n);
    let mut moments = Vec::new();
    let mut identity = true;
    for &k in &ks {
        let mom = moment(&series, &norm, k)?;
        let entry = match special_value(&big, &kappa, &ns, k) {
            Ok(exact) => {
                let ok = mom.agrees_with(&exact, m);
                identity &= ok;
                json!({ "k": k, "moment": padic(&mom, m), "exact": rational(&exact), "agrees": ok })
            }
            Err(Error::NotInPositiveOrthant) => json!({ "k": k, "moment": padic(&mom, m), "exact": null }),
            Err(e) => return Err(e.into()),
        };
        moments.push(entry);
    }
    rec.values = json!({ "coefficients": coefficients, "moments": moments });
    rec.certify("moments_match_exact", identity);
    Ok(rec)
}

pub fn padic_zeta(cfg: &Loaded) -> CmdResult {
    let (p, m) = match (cfg.config.preset, cfg.config.precision.as_ref().and_then(|x| x.p)) {
        (Some(Preset::RqField), None) => (3, cfg.config.precision.as_ref().and_then(|x| x.m).unwrap_or(6)),
        _ => cfg.precision()?,
    };
    let ks = cfg.config.k.clone().unwrap_or_else(|| vec![0, 1, 2]);
    let run = field_setup(cfg, Some(p), true)?;
    let s = &run.setup;
    let cutoff = cfg.cutoff();
    let points: Vec<(Rational, u64)> =
        cfg.config.points.iter().map(|pt| Ok((pt.s.to_rational()?, pt.branch))).collect::<Result<_, ConfigError>>()?;
    let mut rec = Record::new(
        "padic-zeta",
        json!({
            "d": s.field.d(),
            "conductor": ideal_json(&s.f),
            "p": p,
            "ell": s.ell,
            "m": s.m,
            "M": m,
            "k": ks,
            "classes": run.classes,
            "points": points.iter().map(|(x, b)| json!({"s": rational(x), "branch": b})).collect::<Vec<_>>(),
        }),
    );
    let results: Vec<Result<(Value, bool), Failure>> = std::thread::scope(|scope| {
        let handles: Vec<_> = run
            .classes
            .iter()
            .map(|&i| {
                let points = &points;
                let ks = &ks;
                scope.spawn(move || class_row(s, i, ks, points, m, cutoff))
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap_or_else(|_| Err(Failure::Runtime("worker panicked".into())))).collect()
    });
    let mut rows = Vec::new();
    let mut ok = true;
    for r in results {
        let (row, good) = r?;
        rows.push(row);
        ok &= good;
    }
    rec.values = Value::Array(rows);
    rec.note("class_count", json!(s.reps.len()));
    rec.certify("interpolation_ok", ok);
    Ok(rec)
}

fn class_row(
    s: &RayClassSetup,
    i: usize,
    ks: &[u32],
    points: &[(Rational, u64)],
    m: u32,
    cutoff: Option<u32>,
) -> Result<(Value, bool), Failure> {
    let a = &s.reps[i];
    let vals = padic_partial_zeta(s, a, ks, m)?;
    let mut ok = true;
    let mut table = Vec::new();
    for (&k, v) in ks.iter().zip(&vals) {
        let exact = exact_partial_zeta(s, a, k, ZetaVariant::SmoothedStar)?;
        let agrees = v.agrees_with(&exact, m);
        ok &= agrees;
        table.push(json!({ "k": k, "value": padic(v, m), "exact": rational(&exact), "agrees": agrees }));
    }
    let mut at_s = Vec::new();
    for (x, b) in points {
        let v = padic_partial_zeta_at_s_with_cutoff(s, a, x, *b, m, cutoff)?;
        at_s.push(json!({ "s": rational(x), "branch": b, "value": padic(&v, m) }));
    }
    Ok((json!({ "class": i, "ideal": ideal_json(a), "table": table, "at_s": at_s }), ok))
}

/// `ζ(−k)` from the Bernoulli numbers.
fn riemann(k: u32) -> Rational {
    let b = bernoulli_number(k as usize + 1) / int(k as i64 + 1);
    if k.is_multiple_of(2) {
        b
    } else {
        -b
    }
}

pub fn kubota_leopoldt_cmd(cfg: &Loaded) -> CmdResult {
    let (p, m) = cfg.precision()?;
    let ell = cfg.config.ell.ok_or_else(|| ConfigError::new("missing smoothing prime ell"))?;
    if ell == p {
        return Err(cfg.err("ell", "smoothing prime must differ from p").into());
    }
    let ks = cfg.config.k.clone().unwrap_or_else(|| vec![0, 1]);
    let kmax = ks.iter().copied().max().unwrap_or(0);
    let caps = match cfg.caps() {
        Some(c) if c.len() == 1 => c[0],
        Some(_) => return Err(cfg.err("caps", "caps needs one entry").into()),
        None => kmax + 2,
    };
    let kl = kubota_leopoldt(p, ell, caps, m, &ks).map_err(|e| with_line(cfg, e, &["ell"]))?;
    let mut rec = Record::new("kubota-leopoldt", json!({ "p": p, "ell": ell, "M": m, "caps": caps, "k": ks }));
    let mut ok = true;
    let mut rows = Vec::new();
    let l = int(ell as i64);
    let pp = int(p as i64);
    for (k, full, unit) in &kl.moments {
        let smooth = Rational::one() - num_traits::pow(l.clone(), *k as usize + 1);
        let exact_full = &smooth * riemann(*k);
        let exact_unit = &exact_full * (Rational::one() - num_traits::pow(pp.clone(), *k as usize));
        let agrees = full.agrees_with(&exact_full, m) && unit.agrees_with(&exact_unit, m);
        ok &= agrees;
        rows.push(json!({
            "k": k,
            "moment": padic(full, m),
            "unit_moment": padic(unit, m),
            "exact": format_rational(&exact_full),
            "exact_unit": format_rational(&exact_unit),
            "agrees": agrees,
        }));
    }
    rec.values = Value::Array(rows);
    rec.certify("interpolation_ok", ok);
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use shintani_core::exact::rat;

    #[test]
    fn progression_normalization() {
        let f = TestFunction::progression(int(-2), int(3)).unwrap();
        let ps = progressions(&f).unwrap();
        assert_eq!(ps, vec![(1, int(1), int(3))]);
        let f = TestFunction::progression(int(6), int(3)).unwrap();
        assert_eq!(progressions(&f).unwrap()[0].1, int(3));
    }

    #[test]
    fn riemann_from_bernoulli() {
        assert_eq!(riemann(0), rat(-1, 2));
        assert_eq!(riemann(1), rat(-1, 12));
        assert_eq!(riemann(3), rat(1, 120));
    }

    #[test]
    fn box_points() {
        assert_eq!(default_tuple_points(2).len(), 48);
    }
}
