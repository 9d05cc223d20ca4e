use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use shintani_core::cones::{hill_cone_function, GLTuple, OpenCone};
use shintani_core::exact::int;
use shintani_core::linalg::QMatrix;
use shintani_core::padic::{amice_expand, kubota_leopoldt, pseudo_from_cone};
use shintani_core::quadratic::{exact_partial_zeta, padic_partial_zeta, IdealHNF, RQField, RayClassSetup, ZetaVariant};
use shintani_core::test_functions::{PLevelSet, TestFunction};
use shintani_core::zeta::{special_value_cone, NormStructure};

fn exact_values(c: &mut Criterion) {
    let ray = OpenCone::from_i64(&[&[1]]).unwrap();
    let ns = NormStructure::standard(1);
    let f = TestFunction::progression(int(5), int(6)).unwrap();
    c.bench_function("hurwitz a=5 f=6 k=5", |b| b.iter(|| special_value_cone(black_box(&f), &ray, &ns, 5).unwrap()));

    let setup = RayClassSetup::new(RQField::new(5).unwrap(), IdealHNF::unit(), 3, 11, 0).unwrap();
    let a = setup.reps[0].clone();
    c.bench_function("sqrt5 zeta_K(-1)", |b| {
        b.iter(|| exact_partial_zeta(black_box(&setup), &a, 1, ZetaVariant::Plain).unwrap())
    });
}

fn cocycle(c: &mut Criterion) {
    let alphas = vec![
        QMatrix::identity(3),
        QMatrix::from_i64_rows(&[&[1, 0, 0], &[1, 1, 0], &[0, 0, 1]]),
        QMatrix::from_i64_rows(&[&[1, 0, 0], &[0, 1, 0], &[1, 1, 1]]),
    ];
    let t = GLTuple::new(alphas, QMatrix::identity(3)).unwrap();
    c.bench_function("hill cone function dim 3", |b| b.iter(|| hill_cone_function(black_box(&t)).unwrap()));
}

fn measures(c: &mut Criterion) {
    let lat = QMatrix::identity(2);
    let sub = QMatrix::from_i64_rows(&[&[2, 0], &[0, 1]]);
    let f = TestFunction::indicator(vec![int(0), int(0)], lat)
        .unwrap()
        .sub(&TestFunction::indicator(vec![int(0), int(0)], sub).unwrap().scale(2))
        .certify_away_from(7)
        .unwrap();
    let cone = OpenCone::from_i64(&[&[1, 1], &[1, 2]]).unwrap();
    let pm = pseudo_from_cone(&f, &cone, &PLevelSet::full(7, 2)).unwrap();
    c.bench_function("amice expand dim 2 p=7 M=8", |b| b.iter(|| amice_expand(black_box(&pm), &[3, 3], 8).unwrap()));
    c.bench_function("kubota-leopoldt p=3 caps 12", |b| b.iter(|| kubota_leopoldt(3, 2, 12, 8, &[0, 1, 2, 3]).unwrap()));
}

fn padic_l(c: &mut Criterion) {
    let setup = RayClassSetup::new(RQField::new(5).unwrap(), IdealHNF::unit(), 3, 11, 0).unwrap();
    let a = setup.reps[0].clone();
    let mut g = c.benchmark_group("padic zeta");
    g.sample_size(10);
    g.bench_function("sqrt5 p=3 M=6 k=0..2", |b| {
        b.iter(|| padic_partial_zeta(black_box(&setup), &a, &[0, 1, 2], 6).unwrap())
    });
    g.finish();
}

criterion_group!(benches, exact_values, cocycle, measures, padic_l);
criterion_main!(benches);
