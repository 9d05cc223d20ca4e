use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use shintani_core::exact::{int, Rational};
use shintani_core::linalg::{QMatrix, QVec};
use shintani_core::padic::PseudoMeasure;

/// `B_0, …, B_n` (with `B_1 = −1/2`) by the Akiyama–Tanigawa algorithm.
pub fn bernoulli_at(n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut a: Vec<Rational> = Vec::new();
    for m in 0..=n {
        a.push(Rational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            a[j - 1] = Rational::from_integer(BigInt::from(j)) * (&a[j - 1] - &a[j]);
        }
        out.push(a[0].clone());
    }
    // the algorithm yields B_1 = +1/2
    if n >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

pub fn binom_int(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// `B_n(x) = Σ binom(n,j) B_j x^{n−j}`.
pub fn bernoulli_poly(n: usize, x: &Rational) -> Rational {
    let b = bernoulli_at(n);
    (0..=n).fold(Rational::zero(), |acc, j| {
        acc + Rational::from_integer(binom_int(n, j)) * &b[j] * pow(x, (n - j) as u32)
    })
}

pub fn pow(x: &Rational, e: u32) -> Rational {
    (0..e).fold(Rational::one(), |acc, _| acc * x)
}

/// `Σ_{n ≡ a mod f, n > 0} n^k` at `s = −k`.
pub fn hurwitz_oracle(a: i64, f: i64, k: u32) -> Rational {
    let x = Rational::new(a.into(), f.into());
    -(pow(&int(f), k) * bernoulli_poly(k as usize + 1, &x)) / int(k as i64 + 1)
}

/// `ζ(−k) = (−1)^k B_{k+1}/(k+1)`.
pub fn riemann_oracle(k: u32) -> Rational {
    let b = bernoulli_at(k as usize + 1)[k as usize + 1].clone() / int(k as i64 + 1);
    if k.is_multiple_of(2) {
        b
    } else {
        -b
    }
}

fn jacobi(mut a: i64, mut n: i64) -> i64 {
    assert!(n > 0 && n % 2 == 1);
    a = a.rem_euclid(n);
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Kronecker symbol `(d/n)` for `n > 0`.
pub fn kronecker(d: i64, n: i64) -> i64 {
    let mut n = n;
    let mut t = 1;
    while n % 2 == 0 {
        n /= 2;
        t *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    if n == 1 {
        t
    } else {
        t * jacobi(d, n)
    }
}

pub fn fundamental_discriminant(d: i64) -> i64 {
    if d % 4 == 1 {
        d
    } else {
        4 * d
    }
}

/// `B_{n,χ} = N^{n−1} Σ_{a=1}^{N} χ(a) B_n(a/N)` for `χ = (disc/·)`.
pub fn generalized_bernoulli(disc: i64, n: usize) -> Rational {
    let s = (1..=disc).fold(Rational::zero(), |acc, a| {
        acc + int(kronecker(disc, a)) * bernoulli_poly(n, &Rational::new(a.into(), disc.into()))
    });
    pow(&int(disc), n as u32 - 1) * s
}

/// `ζ_K(−k) = ζ(−k)·L(−k, χ) = (B_{k+1}/(k+1))·(B_{k+1,χ}/(k+1))` for `ℚ(√D)`.
pub fn dedekind_oracle(d: i64, k: u32) -> Rational {
    let disc = fundamental_discriminant(d);
    let n = k as usize + 1;
    let b = bernoulli_at(n)[n].clone();
    b * generalized_bernoulli(disc, n) / int((n * n) as i64)
}

fn sigma(n: i64, e: u32) -> BigInt {
    (1..=n).filter(|d| n % d == 0).map(|d| BigInt::from(d).pow(e)).sum()
}

/// Siegel's formula `ζ_K(−1) = (1/60) Σ_{b² < Δ, b ≡ Δ mod 2} σ₁((Δ − b²)/4)`.
pub fn siegel_zeta_minus_one(d: i64) -> Rational {
    let disc = fundamental_discriminant(d);
    let mut acc = BigInt::zero();
    let r = (disc as f64).sqrt() as i64 + 1;
    for b in -r..=r {
        if b * b < disc && (disc - b * b) % 4 == 0 {
            acc += sigma((disc - b * b) / 4, 1);
        }
    }
    Rational::new(acc, BigInt::from(60))
}

type Ser = BTreeMap<Vec<u32>, Rational>;

fn in_caps(e: &[u32], caps: &[u32]) -> bool {
    e.iter().zip(caps).all(|(a, c)| a <= c)
}

fn ser_mul(a: &Ser, b: &Ser, caps: &[u32]) -> Ser {
    let mut out = Ser::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if in_caps(&e, caps) {
                *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn ser_add(a: &mut Ser, b: &Ser, c: &Rational) {
    for (e, v) in b {
        *a.entry(e.clone()).or_insert_with(Rational::zero) += v * c;
    }
    a.retain(|_, v| !v.is_zero());
}

fn ser_one(n: usize) -> Ser {
    let mut s = Ser::new();
    s.insert(vec![0; n], Rational::one());
    s
}

fn gen_binom(y: &Rational, k: u32) -> Rational {
    (0..k).fold(Rational::one(), |acc, i| acc * (y - int(i as i64)) / int(i as i64 + 1))
}

/// `(1 + X_var)^y` over `ℚ`.
fn binom_series(y: &Rational, var: usize, caps: &[u32]) -> Ser {
    let mut s = Ser::new();
    for k in 0..=caps[var] {
        let c = gen_binom(y, k);
        if !c.is_zero() {
            let mut e = vec![0; caps.len()];
            e[var] = k;
            s.insert(e, c);
        }
    }
    s
}

fn ser_invert(a: &Ser, caps: &[u32]) -> Ser {
    let n = caps.len();
    let c0 = a.get(&vec![0; n]).cloned().expect("unit constant term");
    let mut t = a.clone();
    t.remove(&vec![0; n]);
    let t: Ser = t.into_iter().map(|(e, v)| (e, -(v / &c0))).collect();
    let mut acc = ser_one(n);
    let mut power = ser_one(n);
    for _ in 0..caps.iter().sum::<u32>() {
        power = ser_mul(&power, &t, caps);
        ser_add(&mut acc, &power, &Rational::one());
    }
    acc.into_iter().map(|(e, v)| (e, v / &c0)).collect()
}

/// Exact `(q − 1)`-expansion over `ℚ` of `q^{v₀} Σ c q^v / Π(1 − q^{a·g})`,
/// or `None` if the numerator is not divisible by the denominators in `ℚ[[S]]`.
pub fn exact_amice(pm: &PseudoMeasure, caps: &[u32]) -> Option<BTreeMap<Vec<u32>, Rational>> {
    let n = pm.dim;
    let r = pm.rank();
    let mut cols: Vec<QVec> = pm.denominators.iter().map(|(_, g)| g.clone()).collect();
    for j in 0..n {
        if cols.len() == n {
            break;
        }
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        let mut trial = cols.clone();
        trial.push(e);
        if QMatrix::from_columns(&trial).rank() == trial.len() {
            cols = trial;
        }
    }
    let d = QMatrix::from_columns(&cols);
    let dinv = d.inverse().ok()?;
    let total: u32 = caps.iter().sum();
    let mut s_caps = vec![total; n];
    for c in s_caps.iter_mut().take(r) {
        *c += 1;
    }
    let mut num = Ser::new();
    for (c, v) in &pm.numerator {
        let y = dinv.mul_vec(&v.iter().zip(&pm.offset).map(|(a, b)| a + b).collect::<QVec>());
        let mut term = ser_one(n);
        for (i, yi) in y.iter().enumerate() {
            term = ser_mul(&term, &binom_series(yi, i, &s_caps), &s_caps);
        }
        ser_add(&mut num, &term, &int(*c));
    }
    for i in 0..r {
        if num.keys().any(|e| e[i] == 0) {
            return None;
        }
        num = num
            .into_iter()
            .map(|(mut e, v)| {
                e[i] -= 1;
                (e, v)
            })
            .collect();
    }
    let u_caps = vec![total; n];
    // S/(1 − (1+S)^a)
    for (i, (a, _)) in pm.denominators.iter().enumerate() {
        let mut f = Ser::new();
        for k in 1..=total + 1 {
            let c = -gen_binom(a, k);
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[i] = k - 1;
                f.insert(e, c);
            }
        }
        num = ser_mul(&num, &ser_invert(&f, &u_caps), &u_caps);
    }
    // S_i = q^{D e_i} − 1 in T = q − 1
    let subs: Vec<Ser> = d
        .columns()
        .iter()
        .map(|col| {
            let mut s = ser_one(n);
            for (j, x) in col.iter().enumerate() {
                s = ser_mul(&s, &binom_series(x, j, caps), caps);
            }
            ser_add(&mut s, &ser_one(n), &int(-1));
            s
        })
        .collect();
    let mut out = Ser::new();
    for (e, c) in &num {
        let mut term = ser_one(n);
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                term = ser_mul(&term, &subs[i], caps);
            }
        }
        ser_add(&mut out, &term, c);
    }
    Some(out)
}

pub fn is_p_integral(x: &Rational, p: u64) -> bool {
    !(x.denom() % BigInt::from(p)).is_zero()
}

pub fn congruent_mod(x: &Rational, y: &Rational, p: u64, e: u32) -> bool {
    let d = x - y;
    if d.is_zero() {
        return true;
    }
    let pe = BigInt::from(p).pow(e);
    is_p_integral(&d, p) && (d.numer().abs() % pe).is_zero()
}

pub fn all_exponents(caps: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &c in caps {
        out = out.into_iter().flat_map(|e| (0..=c).map(move |k| [e.clone(), vec![k]].concat())).collect();
    }
    out
}
