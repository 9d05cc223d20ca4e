//! Shintani zeta values `ζ_SH(f, C; −k)` from the generating function
//! `G(x) = Σ_{v∈𝒫} f(v)e^{v·x} / Π(1 − e^{aᵢvᵢ·x})`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cones::{ConeFunction, OpenCone};
use crate::error::{Error, Result};
use crate::exact::{bernoulli_numbers, bernoulli_polynomial, factorial, Rational, Scalar, TruncSeries};
use crate::linalg::{QMatrix, QVec};
use crate::test_functions::{parallelepiped_values, period_along, TestFunction, ENUMERATION_GUARD};

/// Linear forms `ℓ₁,…,ℓₙ` whose product is the norm `N(v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormStructure<S: Scalar> {
    forms: Vec<Vec<S>>,
}

impl<S: Scalar> NormStructure<S> {
    pub fn new(forms: Vec<Vec<S>>) -> Result<Self> {
        let n = forms.len();
        if n == 0 || forms.iter().any(|f| f.len() != n) {
            return Err(Error::DimensionMismatch("norm structure needs n forms in n variables".into()));
        }
        if scalar_det(&forms).is_zero_scalar() {
            return Err(Error::DependentGenerators);
        }
        Ok(NormStructure { forms })
    }

    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[Vec<S>] {
        &self.forms
    }

    pub fn form(&self, i: usize, v: &[Rational]) -> S {
        let proto = &self.forms[0][0];
        self.forms[i].iter().zip(v).fold(proto.zero_like(), |acc, (c, x)| acc + c.scale(x))
    }

    pub fn forms_at(&self, v: &[Rational]) -> Vec<S> {
        (0..self.dim()).map(|i| self.form(i, v)).collect()
    }

    pub fn norm(&self, v: &[Rational]) -> S {
        let proto = &self.forms[0][0];
        self.forms_at(v).into_iter().fold(proto.one_like(), |acc, x| acc * x)
    }

    pub fn is_totally_positive(&self, v: &[Rational]) -> bool {
        self.forms_at(v).iter().all(|x| x.signum_scalar() > 0)
    }
}

impl NormStructure<Rational> {
    /// Coordinate forms `eᵢ*` on `ℚⁿ`.
    pub fn standard(n: usize) -> Self {
        NormStructure::new(QMatrix::identity(n).columns()).unwrap()
    }
}

fn scalar_det<S: Scalar>(rows: &[Vec<S>]) -> S {
    let n = rows.len();
    let proto = rows[0][0].clone();
    let mut a: Vec<Vec<S>> = rows.to_vec();
    let mut det = proto.one_like();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero_scalar()) else {
            return proto.zero_like();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let inv = a[c][c].inverse().expect("nonzero pivot");
        det = det * a[c][c].clone();
        for r in c + 1..n {
            let f = a[r][c].clone() * inv.clone();
            for k in c..n {
                let v = a[r][k].clone() - f.clone() * a[c][k].clone();
                a[r][k] = v;
            }
        }
    }
    det
}

/// Truncated numerator and pole data of `G` for one cone.
#[derive(Clone, Debug)]
pub struct GeneratingFunction<S: Scalar> {
    pub numerator: TruncSeries<S>,
    /// `ℓ(aᵢvᵢ)` for each generator.
    pub pole_forms: Vec<Vec<S>>,
    pub scalings: Vec<Rational>,
    /// Points of the parallelepiped with the nonzero values of `f`.
    pub points: Vec<(QVec, i64)>,
}

struct ConeData<S: Scalar> {
    pole_forms: Vec<Vec<S>>,
    scalings: Vec<Rational>,
    points: Vec<(QVec, i64)>,
    point_forms: Vec<Vec<S>>,
}

fn cone_data<S: Scalar>(f: &TestFunction, c: &OpenCone, ns: &NormStructure<S>) -> Result<ConeData<S>> {
    if c.ambient_dim() != ns.dim() || f.dim() != ns.dim() {
        return Err(Error::DimensionMismatch("cone, test function and norm structure".into()));
    }
    if !c.generators().iter().all(|g| ns.is_totally_positive(g)) {
        return Err(Error::NotInPositiveOrthant);
    }
    let scalings: Vec<Rational> = c.generators().iter().map(|g| period_along(f, g)).collect::<Result<_>>()?;
    let scaled: Vec<QVec> =
        c.generators().iter().zip(&scalings).map(|(g, a)| g.iter().map(|x| x * a).collect()).collect();
    let b = QMatrix::from_columns(&scaled);
    let points: Vec<(QVec, i64)> = parallelepiped_values(f, &b, ENUMERATION_GUARD)?
        .into_iter()
        .map(|(lam, val)| (b.mul_vec(&lam), val))
        .collect();
    let point_forms = points.iter().map(|(v, _)| ns.forms_at(v)).collect();
    let pole_forms = scaled.iter().map(|v| ns.forms_at(v)).collect();
    Ok(ConeData { pole_forms, scalings, points, point_forms })
}

/// `G` for `f` on the open cone `C`, numerator truncated at `caps`.
pub fn build_g<S: Scalar>(
    f: &TestFunction,
    c: &OpenCone,
    ns: &NormStructure<S>,
    caps: Vec<u32>,
) -> Result<GeneratingFunction<S>> {
    let data = cone_data(f, c, ns)?;
    let proto = ns.forms[0][0].clone();
    let mut numerator = TruncSeries::zero(caps.clone(), &proto);
    for (v, val) in &data.points {
        let e = TruncSeries::exp_linear_form(&ns.forms_at(v), caps.clone());
        numerator = numerator.add(&e.scale(&proto.from_rational_like(&Rational::from_integer((*val).into()))));
    }
    Ok(GeneratingFunction { numerator, pole_forms: data.pole_forms, scalings: data.scalings, points: data.points })
}

/// `Σ_{a,b} weight(a)·c₀^{a−|b|} Π cⱼ^{bⱼ} / ((a−|b|)! Π bⱼ!) · u^a x^b`, the
/// expansion of `φ(u(c₀ + Σ cⱼxⱼ))` for `φ(z) = Σ weight(a) z^a / a!`.
fn homogeneous_series<S: Scalar>(c0: &S, cs: &[S], caps: &[u32], weight: &[Rational]) -> TruncSeries<S> {
    let mut out = TruncSeries::zero(caps.to_vec(), c0);
    let pow_table = |c: &S, m: u32| {
        let mut t = Vec::with_capacity(m as usize + 1);
        let mut x = c.one_like();
        for _ in 0..=m {
            t.push(x.clone());
            x = x * c.clone();
        }
        t
    };
    let c0_pows = pow_table(c0, caps[0]);
    let c_pows: Vec<Vec<S>> = cs.iter().enumerate().map(|(j, c)| pow_table(c, caps[j + 1])).collect();
    let inv_fact: Vec<Rational> =
        (0..=caps[0]).map(|m| Rational::new(BigInt::one(), factorial(m))).collect();
    let mut b = vec![0u32; cs.len()];
    loop {
        let sb: u32 = b.iter().sum();
        let mut mono = c0.one_like();
        let mut denom = Rational::one();
        for (j, &bj) in b.iter().enumerate() {
            mono = mono * c_pows[j][bj as usize].clone();
            denom *= &inv_fact[bj as usize];
        }
        for a in sb..=caps[0] {
            if weight[a as usize].is_zero() {
                continue;
            }
            let coef = (mono.clone() * c0_pows[(a - sb) as usize].clone())
                .scale(&(&denom * &inv_fact[(a - sb) as usize] * &weight[a as usize]));
            let mut e = Vec::with_capacity(caps.len());
            e.push(a);
            e.extend_from_slice(&b);
            out.set(e, coef);
        }
        let mut k = 0;
        loop {
            if k == b.len() {
                return out;
            }
            b[k] += 1;
            if b[k] <= caps[k + 1] && b[k] <= caps[0] {
                break;
            }
            b[k] = 0;
            k += 1;
        }
    }
}

/// `1 / (c₀ + Σ cⱼxⱼ)` as a series with no `u`-dependence.
fn inverse_linear<S: Scalar>(c0: &S, cs: &[S], caps: &[u32]) -> Result<TruncSeries<S>> {
    let mut l = TruncSeries::zero(caps.to_vec(), c0);
    let mut e = vec![0u32; caps.len()];
    l.set(e.clone(), c0.clone());
    for (j, c) in cs.iter().enumerate() {
        e[j + 1] = 1;
        l.set(e.clone(), c.clone());
        e[j + 1] = 0;
    }
    l.invert()
}

fn split_forms<S: Scalar>(forms: &[S], i: usize) -> (S, Vec<S>) {
    let rest = forms.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect();
    (forms[i].clone(), rest)
}

/// `ζ_SH(f, C; −k)` for one cone:
/// `(k!ⁿ/n)·Σᵢ Coeff_{u^{nk+r} Π_{j≠i} xⱼ^k} (−1)^r Π_m β(uL_m)/L_m · N(u,x)`,
/// where `xᵢ = 1`, `L_m = ℓ(a_m v_m)·x` and `N = Σ_𝒫 f(v)e^{u ℓ(v)·x}`.
fn cone_value<S: Scalar>(data: &ConeData<S>, n: usize, k: u32, proto: &S) -> Result<S> {
    let r = data.pole_forms.len() as u32;
    let top = n as u32 * k + r;
    let mut caps = vec![top];
    caps.extend(std::iter::repeat_n(k, n - 1));
    let bern = bernoulli_numbers(top as usize);
    let ones = vec![Rational::one(); top as usize + 1];
    let mut total = proto.zero_like();
    for i in 0..n {
        let mut prod = TruncSeries::one(caps.clone(), proto);
        for pf in &data.pole_forms {
            let (c0, cs) = split_forms(pf, i);
            prod = prod.mul(&inverse_linear(&c0, &cs, &caps)?);
            prod = prod.mul(&homogeneous_series(&c0, &cs, &caps, &bern));
        }
        let mut num = TruncSeries::zero(caps.clone(), proto);
        for ((_, val), lv) in data.points.iter().zip(&data.point_forms) {
            let (c0, cs) = split_forms(lv, i);
            let e = homogeneous_series(&c0, &cs, &caps, &ones);
            num = num.add(&e.scale(&proto.from_rational_like(&Rational::from_integer((*val).into()))));
        }
        total = total + coefficient_of_product(&prod, &num, &caps);
    }
    let sign = if r.is_multiple_of(2) { Rational::one() } else { -Rational::one() };
    let kf = Rational::from_integer(factorial(k).pow(n as u32));
    Ok(total.scale(&(sign * kf / Rational::from_integer(BigInt::from(n)))))
}

fn coefficient_of_product<S: Scalar>(a: &TruncSeries<S>, b: &TruncSeries<S>, target: &[u32]) -> S {
    let mut acc = a.proto().zero_like();
    for (ea, ca) in a.terms() {
        if ea.iter().zip(target).any(|(x, t)| x > t) {
            continue;
        }
        let eb: Vec<u32> = ea.iter().zip(target).map(|(x, t)| t - x).collect();
        let cb = b.coeff(&eb);
        if !cb.is_zero_scalar() {
            acc = acc + ca.clone() * cb;
        }
    }
    acc
}

/// Exact `ζ_SH(f, C; −k)` for an open cone in the positive orthant.
pub fn special_value_cone<S: Scalar>(f: &TestFunction, c: &OpenCone, ns: &NormStructure<S>, k: u32) -> Result<Rational> {
    let data = cone_data(f, c, ns)?;
    let proto = ns.forms[0][0].clone();
    if data.points.is_empty() {
        return Ok(Rational::zero());
    }
    cone_value(&data, ns.dim(), k, &proto)?.as_rational().ok_or(Error::IrrationalResidue)
}

/// `Σ weight·ζ_SH(f, C; −k)` over the terms of a cone function.
pub fn special_value<S: Scalar>(f: &TestFunction, kappa: &ConeFunction, ns: &NormStructure<S>, k: u32) -> Result<Rational> {
    if kappa.constant != 0 {
        return Err(Error::Unsupported("cone function with a nonzero constant term".into()));
    }
    let mut acc = Rational::zero();
    for (w, c) in &kappa.terms {
        acc += Rational::from_integer((*w).into()) * special_value_cone(f, c, ns, k)?;
    }
    Ok(acc)
}

/// `ζ([a + fℤ], −k) = −f^k B_{k+1}(a/f)/(k+1)` for `0 < a ≤ f`.
pub fn hurwitz_closed_form(a: &Rational, f: &Rational, k: u32) -> Rational {
    assert!(a.is_positive() && a <= f, "need 0 < a ≤ f");
    let b = bernoulli_polynomial(k as usize + 1, &(a / f));
    let fk = (0..k).fold(Rational::one(), |acc, _| acc * f);
    -(fk * b) / Rational::from_integer(BigInt::from(k + 1))
}
