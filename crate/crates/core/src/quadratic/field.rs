use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cones::{unimodular_subdivision, ConeFunction, OpenCone};
use crate::error::{Error, Result};
use crate::exact::{QuadScalar, Rational};
use crate::linalg::{QMatrix, QVec};
use crate::padic::NormPoly;
use crate::zeta::NormStructure;

/// `ℚ(√D)` with integral basis `{1, ω}`, `ω = (1+√D)/2` for `D ≡ 1 mod 4`
/// and `ω = √D` otherwise. Elements are coordinate vectors `(x, y) ↦ x + yω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RQField {
    d: i64,
    half: bool,
}

fn is_squarefree(d: i64) -> bool {
    let mut k = 2;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

impl RQField {
    pub fn new(d: i64) -> Result<Self> {
        if d <= 1 || !is_squarefree(d) {
            return Err(Error::InvalidInput(format!("D = {d} must be a squarefree integer > 1")));
        }
        Ok(RQField { d, half: d % 4 == 1 })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn discriminant(&self) -> i64 {
        if self.half {
            self.d
        } else {
            4 * self.d
        }
    }

    /// `Tr(ω)`.
    pub fn trace_omega(&self) -> i64 {
        if self.half {
            1
        } else {
            0
        }
    }

    /// `N(ω)`.
    pub fn norm_omega(&self) -> i64 {
        if self.half {
            (1 - self.d) / 4
        } else {
            -self.d
        }
    }

    pub fn omega(&self) -> QuadScalar {
        if self.half {
            QuadScalar::new(Rational::new(1.into(), 2.into()), Rational::new(1.into(), 2.into()), self.d)
        } else {
            QuadScalar::sqrt_d(self.d)
        }
    }

    pub fn element(&self, x: i64, y: i64) -> QVec {
        vec![Rational::from_integer(x.into()), Rational::from_integer(y.into())]
    }

    pub fn one(&self) -> QVec {
        self.element(1, 0)
    }

    /// `τ₁(v)`, the embedding with `√D > 0`.
    pub fn embed(&self, v: &[Rational]) -> QuadScalar {
        QuadScalar::rational(v[0].clone(), self.d) + self.omega() * QuadScalar::rational(v[1].clone(), self.d)
    }

    /// `τ₂(v)`.
    pub fn embed_conj(&self, v: &[Rational]) -> QuadScalar {
        self.embed(v).conjugate()
    }

    pub fn from_quad(&self, q: &QuadScalar) -> QVec {
        let w = self.omega();
        let y = &q.b / &w.b;
        let x = &q.a - &y * &w.a;
        vec![x, y]
    }

    pub fn mul(&self, u: &[Rational], v: &[Rational]) -> QVec {
        let tr = Rational::from_integer(self.trace_omega().into());
        let nm = Rational::from_integer(self.norm_omega().into());
        let yy = &u[1] * &v[1];
        vec![&u[0] * &v[0] - &nm * &yy, &u[0] * &v[1] + &u[1] * &v[0] + &tr * &yy]
    }

    pub fn pow(&self, u: &[Rational], e: u32) -> QVec {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, u))
    }

    pub fn conj(&self, v: &[Rational]) -> QVec {
        let tr = Rational::from_integer(self.trace_omega().into());
        vec![&v[0] + &tr * &v[1], -v[1].clone()]
    }

    pub fn norm(&self, v: &[Rational]) -> Rational {
        let tr = Rational::from_integer(self.trace_omega().into());
        let nm = Rational::from_integer(self.norm_omega().into());
        &v[0] * &v[0] + tr * &v[0] * &v[1] + nm * &v[1] * &v[1]
    }

    pub fn trace(&self, v: &[Rational]) -> Rational {
        let tr = Rational::from_integer(self.trace_omega().into());
        &v[0] + &v[0] + tr * &v[1]
    }

    pub fn inverse(&self, v: &[Rational]) -> Result<QVec> {
        let n = self.norm(v);
        if n.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(self.conj(v).iter().map(|x| x / &n).collect())
    }

    pub fn is_integral(&self, v: &[Rational]) -> bool {
        v.iter().all(|x| x.is_integer())
    }

    pub fn is_totally_positive(&self, v: &[Rational]) -> bool {
        self.embed(v).sign() > 0 && self.embed_conj(v).sign() > 0
    }

    /// Matrix of multiplication by `v` on coordinates.
    pub fn mult_matrix(&self, v: &[Rational]) -> QMatrix {
        QMatrix::from_columns(&[self.mul(v, &self.one()), self.mul(v, &self.element(0, 1))])
    }

    /// Embeddings `(τ₁, τ₂)` as linear forms on coordinates.
    pub fn norm_structure(&self) -> NormStructure<QuadScalar> {
        let one = QuadScalar::rational(Rational::one(), self.d);
        let w = self.omega();
        NormStructure::new(vec![vec![one.clone(), w.clone()], vec![one, w.conjugate()]]).expect("embeddings are independent")
    }

    /// `N(x + yω) = x² + Tr(ω)xy + N(ω)y²`.
    pub fn norm_poly(&self) -> NormPoly {
        let r = |v: i64| Rational::from_integer(v.into());
        NormPoly::new(
            2,
            vec![(vec![2, 0], r(1)), (vec![1, 1], r(self.trace_omega())), (vec![0, 2], r(self.norm_omega()))],
        )
        .unwrap()
    }

    /// Fundamental unit `u > 1`, read off the continued fraction of `−ω′`.
    pub fn fundamental_unit(&self) -> QVec {
        // −ω′ = (P + √D)/Q
        let (mut p, mut q) = if self.half { (BigInt::from(-1), BigInt::from(2)) } else { (BigInt::zero(), BigInt::one()) };
        let d = BigInt::from(self.d);
        let s = d.sqrt();
        let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
        let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
        loop {
            let a = (&p + &s).div_floor(&q);
            let h2 = &a * &h1 + &h0;
            let k2 = &a * &k1 + &k0;
            h0 = std::mem::replace(&mut h1, h2);
            k0 = std::mem::replace(&mut k1, k2);
            let v = vec![Rational::from_integer(h1.clone()), Rational::from_integer(k1.clone())];
            if !k1.is_zero() && self.norm(&v).abs().is_one() && self.embed(&v).sign() > 0 {
                let gt_one = self.embed(&v) - QuadScalar::rational(Rational::one(), self.d);
                if gt_one.sign() > 0 {
                    return v;
                }
            }
            p = &a * &q - &p;
            q = (&d - &p * &p) / &q;
        }
    }
}

/// Unit data for a modulus: fundamental unit `u`, totally positive
/// generator `ε₊` of `𝒪₊^×` and generator `ε = u^t` of `E(𝔣)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitData {
    pub u: QVec,
    pub eps_plus: QVec,
    pub eps: QVec,
    pub t: u32,
}

impl UnitData {
    /// `[𝒪^× : E(𝔣)] = 2t`.
    pub fn index(&self) -> u32 {
        2 * self.t
    }
}

/// Shintani domain `[C^o(1, ε)] + [C^o(1)]`, split into unimodular cones, for the action of `ε^ℤ` on the
/// totally positive quadrant.
pub fn shintani_domain_2d(field: &RQField, units: &UnitData) -> Result<ConeFunction> {
    if !field.is_totally_positive(&units.eps) || units.eps == field.one() {
        return Err(Error::InvalidInput("ε must be a totally positive unit other than 1".into()));
    }
    let main = unimodular_subdivision(&OpenCone::new(vec![field.one(), units.eps.clone()])?)?;
    Ok(main.add(&ConeFunction::single(OpenCone::new(vec![field.one()])?)))
}
