use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{RQField, UnitData};
use super::ideal::{ideals_of_norm, IdealHNF};
use crate::error::{Error, Result};
use crate::exact::{QuadScalar, Rational};
use crate::linalg::{coset_representatives, QMatrix, QVec};

/// Candidate guard for generator and class searches.
pub const CLASS_SEARCH_GUARD: usize = 100_000;

fn rat_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}

fn abs_q(x: QuadScalar) -> QuadScalar {
    if x.sign() < 0 {
        -x
    } else {
        x
    }
}

/// Generators `β` of the integral ideal `I` with `τ₁(β) > 0` and
/// `1 ≤ |τ₁(β)/τ₂(β)| < |τ₁(η)/τ₂(η)|`, one per orbit of `η^ℤ` (`η > 1` a unit).
pub fn reduced_generators(field: &RQField, ideal: &IdealHNF, eta: &[Rational], budget: &mut usize) -> Result<Vec<QVec>> {
    let n = ideal.norm();
    let nf = rat_f64(&n);
    let ratio = (field.embed(eta).to_f64() / field.embed_conj(eta).to_f64()).abs();
    let t1_lo = nf.sqrt();
    let t1_hi = (nf * ratio).sqrt();
    let t2_hi = nf.sqrt();
    let sd = (field.d() as f64).sqrt();
    let y_max = ((t1_hi + t2_hi) / sd).ceil() as i64 + 1;
    let w = field.omega().to_f64();
    let eta_inv = field.inverse(eta)?;
    let mut out = Vec::new();
    for y in -y_max..=y_max {
        let x_lo = (t1_lo - y as f64 * w).floor() as i64 - 1;
        let x_hi = (t1_hi - y as f64 * w).ceil() as i64 + 1;
        for x in x_lo..=x_hi {
            *budget += 1;
            if *budget > CLASS_SEARCH_GUARD {
                return Err(Error::ClassSearchExhausted(*budget));
            }
            let v = field.element(x, y);
            if field.norm(&v).abs() != n || field.embed(&v).sign() <= 0 || !ideal.contains(&v) {
                continue;
            }
            let (t1, t2) = (abs_q(field.embed(&v)), abs_q(field.embed_conj(&v)));
            if (t1 - t2).sign() < 0 {
                continue;
            }
            let g = field.mul(&v, &eta_inv);
            if (abs_q(field.embed(&g)) - abs_q(field.embed_conj(&g))).sign() >= 0 {
                continue;
            }
            out.push(v);
        }
    }
    Ok(out)
}

/// Unit data for the modulus `𝔣`.
pub fn ray_unit_generator(field: &RQField, f: &IdealHNF) -> Result<UnitData> {
    if !f.is_integral() {
        return Err(Error::InvalidInput("modulus must be integral".into()));
    }
    let u = field.fundamental_unit();
    let eps_plus = if field.is_totally_positive(&u) { u.clone() } else { field.mul(&u, &u) };
    let one = field.one();
    let mut x = u.clone();
    let mut t = 1;
    loop {
        if field.is_totally_positive(&x) && f.congruent(&x, &one) {
            return Ok(UnitData { u, eps_plus, eps: x, t });
        }
        x = field.mul(&x, &u);
        t += 1;
    }
}

/// `|(𝒪/𝔣)^×|`.
pub fn unit_group_order(field: &RQField, f: &IdealHNF) -> Result<u64> {
    let reps = coset_representatives(&QMatrix::identity(2), &f.basis(), CLASS_SEARCH_GUARD as u128)?;
    if *f == IdealHNF::unit() {
        return Ok(1);
    }
    let mut count = 0;
    for r in reps.iter().filter(|r| r.iter().any(|x| !x.is_zero())) {
        if IdealHNF::principal(field, r)?.is_coprime_to(field, f) {
            count += 1;
        }
    }
    Ok(count)
}

/// Whether the integral ideal is principal (any generator).
pub fn is_principal(field: &RQField, ideal: &IdealHNF, budget: &mut usize) -> Result<bool> {
    Ok(!reduced_generators(field, ideal, &field.fundamental_unit(), budget)?.is_empty())
}

/// `𝔟 ~ 𝔞` in the narrow ray class group mod `𝔣`: `𝔟𝔞′ = (β)` with
/// `β ≫ 0` and `β ≡ N𝔞 mod 𝔣`.
pub fn narrow_ray_equivalent(
    field: &RQField,
    units: &UnitData,
    f: &IdealHNF,
    a: &IdealHNF,
    b: &IdealHNF,
    budget: &mut usize,
) -> Result<bool> {
    let i = b.mul(field, &a.conj(field));
    let target = vec![a.norm(), Rational::zero()];
    let gens = reduced_generators(field, &i, &units.u, budget)?;
    let neg = field.element(-1, 0);
    for g in gens {
        let mut x = g;
        for _ in 0..units.t {
            for s in [field.one(), neg.clone()] {
                let cand = field.mul(&x, &s);
                if field.is_totally_positive(&cand) && f.congruent(&cand, &target) {
                    return Ok(true);
                }
            }
            x = field.mul(&x, &units.u);
        }
    }
    Ok(false)
}

/// Wide class number by Minkowski-bound enumeration.
pub fn class_number(field: &RQField) -> Result<usize> {
    let bound = ((field.discriminant() as f64).sqrt() / 2.0).floor() as u64;
    let mut reps: Vec<IdealHNF> = Vec::new();
    for n in 1..=bound.max(1) {
        for id in ideals_of_norm(field, n) {
            let mut new = true;
            for r in &reps {
                let i = id.mul(field, &r.conj(field));
                let mut budget = 0usize;
                if is_principal(field, &i, &mut budget)? {
                    new = false;
                    break;
                }
            }
            if new {
                reps.push(id);
            }
        }
    }
    Ok(reps.len())
}

/// `h⁺_𝔣 = h·4·|(𝒪/𝔣)^×| / [𝒪^× : E(𝔣)]`.
pub fn narrow_ray_class_number(field: &RQField, f: &IdealHNF) -> Result<usize> {
    let h = class_number(field)? as u64;
    let phi = unit_group_order(field, f)?;
    let units = ray_unit_generator(field, f)?;
    let num = h * 4 * phi;
    let idx = units.index() as u64;
    debug_assert_eq!(num % idx, 0);
    Ok((num / idx) as usize)
}

/// One integral representative per narrow ray class mod `𝔣`, each of norm
/// prime to `avoid` and coprime to `𝔣`, found in order of increasing norm.
pub fn ray_class_reps(field: &RQField, f: &IdealHNF, avoid: u64) -> Result<Vec<IdealHNF>> {
    let target = narrow_ray_class_number(field, f)?;
    let units = ray_unit_generator(field, f)?;
    let mut reps: Vec<IdealHNF> = Vec::new();
    let mut budget = 0usize;
    let avoid = BigInt::from(avoid) * f.norm().to_integer();
    let mut n: u64 = 1;
    while reps.len() < target {
        if BigInt::from(n).gcd(&avoid).is_one() {
            for id in ideals_of_norm(field, n) {
                budget += 1;
                if budget > CLASS_SEARCH_GUARD {
                    return Err(Error::ClassSearchExhausted(budget));
                }
                let mut new = true;
                for r in &reps {
                    let mut search = 0usize;
                    if narrow_ray_equivalent(field, &units, f, r, &id, &mut search)? {
                        new = false;
                        break;
                    }
                }
                if new {
                    reps.push(id);
                    if reps.len() == target {
                        break;
                    }
                }
            }
        }
        n += 1;
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    #[test]
    fn unit_generators() {
        let f5 = RQField::new(5).unwrap();
        let u = ray_unit_generator(&f5, &IdealHNF::unit()).unwrap();
        assert_eq!(u.eps, vec![int(1), int(1)]);
        let f3 = RQField::new(3).unwrap();
        let u3 = ray_unit_generator(&f3, &IdealHNF::unit()).unwrap();
        assert_eq!(u3.eps, vec![int(2), int(1)]);
        let three = IdealHNF::from_integer(&f5, 3).unwrap();
        let u = ray_unit_generator(&f5, &three).unwrap();
        assert!(three.congruent(&u.eps, &f5.one()));
        assert!(f5.is_totally_positive(&u.eps));
    }

    #[test]
    fn class_numbers() {
        let one = IdealHNF::unit();
        assert_eq!(ray_class_reps(&RQField::new(5).unwrap(), &one, 1).unwrap().len(), 1);
        assert_eq!(ray_class_reps(&RQField::new(3).unwrap(), &one, 1).unwrap().len(), 2);
        assert_eq!(ray_class_reps(&RQField::new(2).unwrap(), &one, 1).unwrap().len(), 1);
        assert_eq!(class_number(&RQField::new(10).unwrap()).unwrap(), 2);
    }
}
