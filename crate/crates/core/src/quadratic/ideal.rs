use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::RQField;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::linalg::{in_lattice, lattice_from_generators, QMatrix, QVec};

/// Fractional ideal `(1/den)·(aℤ ⊕ (b + cω)ℤ)` in Hermite normal form:
/// `a, c > 0`, `0 ≤ b < a`, `gcd(a, b, c, den) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IdealHNF {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub den: BigInt,
}

impl IdealHNF {
    pub fn unit() -> Self {
        IdealHNF { a: BigInt::one(), b: BigInt::zero(), c: BigInt::one(), den: BigInt::one() }
    }

    fn normalized(a: BigInt, b: BigInt, c: BigInt, den: BigInt) -> Self {
        let g = a.gcd(&b).gcd(&c).gcd(&den);
        let (a, b, c, den) = (a / &g, b / &g, c / &g, den / &g);
        IdealHNF { a, b, c, den }
    }

    /// Lattice with the given 2×2 basis, assumed to be an `𝒪`-module.
    fn from_basis(m: &QMatrix) -> Self {
        let den = m.denominator_lcm();
        let z = m.scale(&Rational::from_integer(den.clone())).to_integer();
        let (m11, m12, m21, m22) = (z.get(0, 0).clone(), z.get(0, 1).clone(), z.get(1, 0).clone(), z.get(1, 1).clone());
        let e = m21.extended_gcd(&m22);
        let g = e.gcd.clone();
        // second column s·col1 + t·col2 = (b', g); first (m22/g)·col1 − (m21/g)·col2 = (a', 0)
        let b0 = &e.x * &m11 + &e.y * &m12;
        let a0 = (&m22 / &g) * &m11 - (&m21 / &g) * &m12;
        let (a, c) = (a0.abs(), g.abs());
        let b = (if g.is_negative() { -b0 } else { b0 }).mod_floor(&a);
        Self::normalized(a, b, c, den)
    }

    /// The `𝒪`-module generated by the given elements.
    pub fn from_generators(field: &RQField, gens: &[QVec]) -> Result<Self> {
        let w = field.element(0, 1);
        let mut all = Vec::new();
        for g in gens {
            all.push(g.clone());
            all.push(field.mul(g, &w));
        }
        let basis = lattice_from_generators(&all, 2)?;
        if basis.cols() != 2 {
            return Err(Error::ZeroVector);
        }
        Ok(Self::from_basis(&basis))
    }

    pub fn principal(field: &RQField, x: &[Rational]) -> Result<Self> {
        Self::from_generators(field, &[x.to_vec()])
    }

    pub fn from_integer(field: &RQField, n: i64) -> Result<Self> {
        Self::principal(field, &field.element(n, 0))
    }

    /// Columns `(a, 0)/den` and `(b, c)/den`.
    pub fn basis(&self) -> QMatrix {
        let r = |x: &BigInt| Rational::new(x.clone(), self.den.clone());
        QMatrix::from_rows(vec![vec![r(&self.a), r(&self.b)], vec![Rational::zero(), r(&self.c)]])
    }

    pub fn norm(&self) -> Rational {
        Rational::new(&self.a * &self.c, &self.den * &self.den)
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        in_lattice(&self.basis().inverse().expect("ideal basis is invertible"), v)
    }

    pub fn is_ideal(&self, field: &RQField) -> bool {
        let w = field.element(0, 1);
        self.basis().columns().iter().all(|g| self.contains(&field.mul(g, &w)))
    }

    pub fn mul(&self, field: &RQField, o: &IdealHNF) -> IdealHNF {
        let gens: Vec<QVec> = self
            .basis()
            .columns()
            .iter()
            .flat_map(|x| o.basis().columns().into_iter().map(move |y| (x.clone(), y)))
            .map(|(x, y)| field.mul(&x, &y))
            .collect();
        Self::from_generators(field, &gens).expect("product of nonzero ideals")
    }

    pub fn scale(&self, field: &RQField, x: &[Rational]) -> Result<IdealHNF> {
        let gens: Vec<QVec> = self.basis().columns().iter().map(|g| field.mul(g, x)).collect();
        Self::from_generators(field, &gens)
    }

    pub fn conj(&self, field: &RQField) -> IdealHNF {
        let gens: Vec<QVec> = self.basis().columns().iter().map(|g| field.conj(g)).collect();
        Self::from_generators(field, &gens).expect("conjugate of a nonzero ideal")
    }

    /// `𝔞⁻¹ = 𝔞′/N𝔞`.
    pub fn inverse(&self, field: &RQField) -> IdealHNF {
        let n = self.norm();
        self.conj(field).scale(field, &[n.recip(), Rational::zero()]).expect("nonzero scaling")
    }

    /// `𝔞 + 𝔟`.
    pub fn sum(&self, field: &RQField, o: &IdealHNF) -> IdealHNF {
        let mut gens = self.basis().columns();
        gens.extend(o.basis().columns());
        Self::from_generators(field, &gens).expect("sum of nonzero ideals")
    }

    pub fn is_coprime_to(&self, field: &RQField, o: &IdealHNF) -> bool {
        self.sum(field, o) == IdealHNF::unit()
    }

    /// Least positive integer in an integral ideal.
    pub fn min_integer(&self) -> BigInt {
        assert!(self.is_integral(), "min_integer needs an integral ideal");
        self.a.clone()
    }

    /// `x ≡ y mod 𝔣`.
    pub fn congruent(&self, x: &[Rational], y: &[Rational]) -> bool {
        self.contains(&crate::linalg::vec_sub(x, y))
    }
}

/// A prime of degree one above `ℓ`: `(ℓ, ω − r)` for the least root `r` of
/// the minimal polynomial of `ω` mod `ℓ`.
pub fn degree_one_prime(field: &RQField, ell: u64) -> Result<IdealHNF> {
    let l = ell as i64;
    let (tr, nm) = (field.trace_omega(), field.norm_omega());
    let r = (0..l)
        .find(|&r| (r * r - tr * r + nm).rem_euclid(l) == 0)
        .ok_or_else(|| Error::BadSmoothingData(format!("{ell} is inert")))?;
    IdealHNF::from_generators(field, &[field.element(l, 0), field.element(-r, 1)])
}

/// All integral ideals of norm `n`.
pub fn ideals_of_norm(field: &RQField, n: u64) -> Vec<IdealHNF> {
    let mut out = Vec::new();
    for c in 1..=n {
        if !n.is_multiple_of(c) {
            continue;
        }
        let a = n / c;
        if !a.is_multiple_of(c) {
            continue;
        }
        for b in 0..a {
            let id = IdealHNF { a: a.into(), b: b.into(), c: c.into(), den: BigInt::one() };
            if id.is_ideal(field) {
                out.push(id);
            }
        }
    }
    out
}
