#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use shintani_core::exact::{int, Rational};
use shintani_core::linalg::{QMatrix, QVec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random element of `SL_n(ℤ)` as a product of elementary matrices.
pub fn random_sl(r: &mut ChaCha8Rng, n: usize, steps: usize) -> QMatrix {
    let mut m = QMatrix::identity(n);
    for _ in 0..steps {
        let i = r.gen_range(0..n);
        let mut j = r.gen_range(0..n);
        while j == i {
            j = r.gen_range(0..n);
        }
        let c: i64 = r.gen_range(-2..=2);
        let mut e = QMatrix::identity(n);
        e.set(i, j, int(c));
        m = m.mul(&e);
    }
    m
}

pub fn random_vec(r: &mut ChaCha8Rng, n: usize, bound: i64) -> QVec {
    loop {
        let v: QVec = (0..n)
            .map(|_| Rational::new(r.gen_range(-bound..=bound).into(), r.gen_range(1..=3i64).into()))
            .collect();
        if v.iter().any(|x| *x != int(0)) {
            return v;
        }
    }
}

pub fn random_int_vec(r: &mut ChaCha8Rng, n: usize, bound: i64) -> QVec {
    loop {
        let v: QVec = (0..n).map(|_| int(r.gen_range(-bound..=bound))).collect();
        if v.iter().any(|x| *x != int(0)) {
            return v;
        }
    }
}

pub mod hill;
pub mod instances;
pub mod oracles;
