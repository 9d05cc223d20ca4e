//! Rational simplicial cones, integer cone functions with the `GL_n(ℚ)`
//! action, and Hill's cocycle computed in the ordered field
//! `𝔽 = ℚ((ε₁))⋯((εₙ))`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::linalg::{is_zero_vec, primitive_vector, to_qvec, vec_add, vec_scale, QMatrix, QVec};

/// Open cone of strictly positive combinations of independent generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpenCone {
    gens: Vec<QVec>,
    dim: usize,
}

impl OpenCone {
    pub fn new(gens: Vec<QVec>) -> Result<Self> {
        let dim = gens.first().map(|g| g.len()).ok_or(Error::DependentGenerators)?;
        if gens.iter().any(|g| g.len() != dim) {
            return Err(Error::DimensionMismatch("cone generators".into()));
        }
        if gens.len() > dim || QMatrix::from_columns(&gens).rank() != gens.len() {
            return Err(Error::DependentGenerators);
        }
        Ok(OpenCone { gens, dim })
    }

    pub fn from_i64(gens: &[&[i64]]) -> Result<Self> {
        Self::new(gens.iter().map(|g| g.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect())
    }

    pub fn generators(&self) -> &[QVec] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Coordinates of `v` in the generators, if `v` lies in their span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<QVec> {
        QMatrix::from_columns(&self.gens).solve(v)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        match self.coordinates(v) {
            Some(c) => c.iter().all(|x| x.is_positive()),
            None => false,
        }
    }

    pub fn map(&self, g: &QMatrix) -> Result<Self> {
        Self::new(self.gens.iter().map(|v| g.mul_vec(v)).collect())
    }
}

pub fn cone_membership(c: &OpenCone, v: &[Rational]) -> bool {
    c.contains(v)
}

/// `v ↦ constant + Σ weight·[v ∈ cone]` on `ℚⁿ ∖ {0}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ConeFunction {
    pub terms: Vec<(i64, OpenCone)>,
    pub constant: i64,
}

impl ConeFunction {
    pub fn new(terms: Vec<(i64, OpenCone)>, constant: i64) -> Self {
        ConeFunction { terms, constant }
    }

    pub fn single(c: OpenCone) -> Self {
        ConeFunction { terms: vec![(1, c)], constant: 0 }
    }

    pub fn eval(&self, v: &[Rational]) -> i64 {
        self.constant + self.terms.iter().filter(|(_, c)| c.contains(v)).map(|(w, _)| w).sum::<i64>()
    }

    pub fn add(&self, other: &ConeFunction) -> ConeFunction {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        ConeFunction { terms, constant: self.constant + other.constant }
    }

    pub fn scale(&self, k: i64) -> ConeFunction {
        ConeFunction {
            terms: self.terms.iter().map(|(w, c)| (w * k, c.clone())).collect(),
            constant: self.constant * k,
        }
    }
}

fn det2(a: &[BigInt], b: &[BigInt]) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Splits a two-dimensional cone into cones that are unimodular for `ℤ²`:
/// `[C^o(a, b)] = Σ [C^o(vᵢ, vᵢ₊₁)] + Σ_{0<i<r} [C^o(vᵢ)]`.
/// Other cones are returned unchanged.
pub fn unimodular_subdivision(c: &OpenCone) -> Result<ConeFunction> {
    subdivision_keeping(c, &|_| true)
}

/// As [`unimodular_subdivision`], but only interior rays accepted by `keep`
/// are used; the pieces between kept rays are then no longer unimodular.
pub fn subdivision_keeping(c: &OpenCone, keep: &dyn Fn(&QVec) -> bool) -> Result<ConeFunction> {
    if c.dim != 2 || c.rank() != 2 {
        return Ok(ConeFunction::single(c.clone()));
    }
    let mut a = primitive_vector(&c.gens[0]);
    let mut b = primitive_vector(&c.gens[1]);
    if det2(&a, &b).is_negative() {
        std::mem::swap(&mut a, &mut b);
    }
    let mut chain = vec![a.clone()];
    let mut u = a;
    while det2(&u, &b) > BigInt::one() {
        let e = u[0].extended_gcd(&u[1]);
        let w = [-e.y, e.x];
        // x = w + t·u with 0 ≤ det(x, b) < det(u, b)
        let t = (-det2(&w, &b)).div_ceil(&det2(&u, &b));
        let x = vec![&w[0] + &t * &u[0], &w[1] + &t * &u[1]];
        if det2(&x, &b).is_zero() {
            break;
        }
        chain.push(x.clone());
        u = x;
    }
    chain.push(b);
    let last = chain.len() - 1;
    let q: Vec<QVec> = chain
        .iter()
        .enumerate()
        .map(|(i, v)| (i, to_qvec(v)))
        .filter(|(i, v)| *i == 0 || *i == last || keep(v))
        .map(|(_, v)| v)
        .collect();
    let mut terms = Vec::new();
    for i in 0..q.len() - 1 {
        terms.push((1, OpenCone::new(vec![q[i].clone(), q[i + 1].clone()])?));
        if i > 0 {
            terms.push((1, OpenCone::new(vec![q[i].clone()])?));
        }
    }
    Ok(ConeFunction::new(terms, 0))
}

/// Applies [`subdivision_keeping`] to every term.
pub fn refine(k: &ConeFunction, keep: &dyn Fn(&QVec) -> bool) -> Result<ConeFunction> {
    let mut out = ConeFunction::new(Vec::new(), k.constant);
    for (w, c) in &k.terms {
        out = out.add(&subdivision_keeping(c, keep)?.scale(*w));
    }
    Ok(out)
}

/// `(γκ)(v) = sign(det γ)·κ(γ⁻¹v)`.
pub fn gl_act_cone(g: &QMatrix, k: &ConeFunction) -> Result<ConeFunction> {
    let d = g.det();
    if d.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let s = if d.is_positive() { 1 } else { -1 };
    let terms = k.terms.iter().map(|(w, c)| Ok((w * s, c.map(g)?))).collect::<Result<Vec<_>>>()?;
    Ok(ConeFunction { terms, constant: k.constant * s })
}

/// Polynomial in `ε₁,…,εₙ` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl EpsPoly {
    pub fn zero(nvars: usize) -> Self {
        EpsPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// `εᵢ^e` (zero-based `i`).
    pub fn eps_power(nvars: usize, i: usize, e: u32) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = e;
        Self::monomial(nvars, exps, Rational::one())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        let v = self.terms.remove(&e).unwrap_or_else(Rational::zero) + c;
        if !v.is_zero() {
            self.terms.insert(e, v);
        }
    }

    pub fn add(&self, o: &EpsPoly) -> EpsPoly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &EpsPoly) -> EpsPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> EpsPoly {
        EpsPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &Rational) -> EpsPoly {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        EpsPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect() }
    }

    pub fn mul(&self, o: &EpsPoly) -> EpsPoly {
        let mut r = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                r.add_term(e, ca * cb);
            }
        }
        r
    }

    /// Monomials ordered from most to least significant.
    pub fn monomials_by_significance(&self) -> Vec<(Vec<u32>, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
        v.sort_by(|a, b| significance_cmp(&a.0, &b.0));
        v
    }

    pub fn leading_term(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().min_by(|a, b| significance_cmp(a.0, b.0))
    }
}

/// Order of monomials by magnitude in `𝔽` with `0 < εₙ ≪ ⋯ ≪ ε₁ ≪ 1`:
/// compare the exponent of `εₙ` first, then `εₙ₋₁`, and so on. `Less` means
/// larger in magnitude.
pub fn significance_cmp(a: &[u32], b: &[u32]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// Sign of `P` as an element of the ordered field `𝔽`.
pub fn lex_leading_sign(p: &EpsPoly) -> i32 {
    match p.leading_term() {
        None => 0,
        Some((_, c)) if c.is_positive() => 1,
        Some(_) => -1,
    }
}

/// Square matrix of `EpsPoly` entries, stored by columns.
#[derive(Clone, Debug)]
struct EpsMatrix {
    n: usize,
    cols: Vec<Vec<EpsPoly>>,
}

impl EpsMatrix {
    fn det(&self) -> EpsPoly {
        let idx: Vec<usize> = (0..self.n).collect();
        det_minor(&self.cols, 0, &idx, self.cols[0][0].nvars())
    }

    fn with_column(&self, i: usize, v: &[Rational]) -> EpsMatrix {
        let mut m = self.clone();
        let nv = self.cols[0][0].nvars();
        m.cols[i] = v.iter().map(|x| EpsPoly::constant(nv, x.clone())).collect();
        m
    }
}

/// Laplace expansion over columns `c..` restricted to the given rows.
fn det_minor(cols: &[Vec<EpsPoly>], c: usize, rows: &[usize], nv: usize) -> EpsPoly {
    if rows.len() == 1 {
        return cols[c][rows[0]].clone();
    }
    let mut acc = EpsPoly::zero(nv);
    for (pos, &r) in rows.iter().enumerate() {
        let entry = &cols[c][r];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
        let term = entry.mul(&det_minor(cols, c + 1, &rest, nv));
        acc = if pos % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

/// `(α₁,…,αₙ)` together with a basis `w₁,…,wₙ` (columns of `w`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLTuple {
    pub alphas: Vec<QMatrix>,
    pub w: QMatrix,
}

impl GLTuple {
    pub fn new(alphas: Vec<QMatrix>, w: QMatrix) -> Result<Self> {
        let n = w.rows();
        if !w.is_square() || alphas.len() != n {
            return Err(Error::DimensionMismatch(format!("expected {n} matrices of size {n}")));
        }
        if w.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        for a in &alphas {
            if a.rows() != n || !a.is_square() {
                return Err(Error::DimensionMismatch("tuple matrix".into()));
            }
            if a.det().is_zero() {
                return Err(Error::SingularMatrix);
            }
        }
        Ok(GLTuple { alphas, w })
    }

    pub fn standard(alphas: Vec<QMatrix>) -> Result<Self> {
        let n = alphas.first().map_or(0, |a| a.rows());
        Self::new(alphas, QMatrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.w.rows()
    }

    /// `γ·(α₁,…,αₙ) = (γα₁,…,γαₙ)`.
    pub fn left_mul(&self, g: &QMatrix) -> Result<Self> {
        Self::new(self.alphas.iter().map(|a| g.mul(a)).collect(), self.w.clone())
    }

    /// The vectors `αᵢw₁`, i.e. the columns of `M` at `ε = 0`.
    pub fn leading_vectors(&self) -> Vec<QVec> {
        let w1 = self.w.column(0);
        self.alphas.iter().map(|a| a.mul_vec(&w1)).collect()
    }

    pub fn is_degenerate(&self) -> bool {
        QMatrix::from_columns(&self.leading_vectors()).det().is_zero()
    }

    /// Column `i` is `αᵢbᵢ` with `bᵢ = Σⱼ εᵢ^{j−1} wⱼ`.
    fn eps_matrix(&self) -> EpsMatrix {
        let n = self.dim();
        let cols = self
            .alphas
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let aw = a.mul(&self.w);
                (0..n)
                    .map(|r| {
                        (0..n).fold(EpsPoly::zero(n), |acc, j| {
                            acc.add(&EpsPoly::eps_power(n, i, j as u32).scale(aw.get(r, j)))
                        })
                    })
                    .collect()
            })
            .collect();
        EpsMatrix { n, cols }
    }
}

/// Value of `σ_Hill(α₁,…,αₙ)` at `v`.
pub fn hill_eval(t: &GLTuple, v: &[Rational]) -> Result<i64> {
    if is_zero_vec(v) {
        return Err(Error::ZeroVector);
    }
    if v.len() != t.dim() {
        return Err(Error::DimensionMismatch("evaluation point".into()));
    }
    let m = t.eps_matrix();
    let s = lex_leading_sign(&m.det());
    debug_assert!(s != 0, "det M vanishes in 𝔽");
    for i in 0..t.dim() {
        if lex_leading_sign(&m.with_column(i, v).det()) * s != 1 {
            return Ok(0);
        }
    }
    Ok(s as i64)
}

/// Linear functionals `v ↦ coefficient of ε^r in det Mᵢ(v)`, listed per `i`
/// from most to least significant monomial.
fn cramer_functionals(t: &GLTuple) -> Vec<Vec<QVec>> {
    let n = t.dim();
    let m = t.eps_matrix();
    (0..n)
        .map(|i| {
            let dets: Vec<EpsPoly> = (0..n)
                .map(|k| {
                    let mut e = vec![Rational::zero(); n];
                    e[k] = Rational::one();
                    m.with_column(i, &e).det()
                })
                .collect();
            let mut monos: Vec<Vec<u32>> = dets.iter().flat_map(|d| d.terms().map(|(e, _)| e.clone())).collect();
            monos.sort_by(|a, b| significance_cmp(a, b));
            monos.dedup();
            monos.iter().map(|e| dets.iter().map(|d| d.coeff(e)).collect()).collect()
        })
        .collect()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

enum PieceVerdict {
    Sign(i32),
    Split(Vec<Vec<QVec>>),
}

/// Sign of the leading functional on the open cone spanned by `gens`, or a
/// stellar subdivision along its kernel when the sign is not constant.
fn decide(functionals: &[QVec], gens: &[QVec]) -> PieceVerdict {
    for f in functionals {
        let vals: Vec<Rational> = gens.iter().map(|g| dot(f, g)).collect();
        if vals.iter().all(|x| x.is_zero()) {
            continue;
        }
        let pos = vals.iter().position(|x| x.is_positive());
        let neg = vals.iter().position(|x| x.is_negative());
        return match (pos, neg) {
            (Some(p), Some(q)) => {
                let star = vec_add(&vec_scale(&gens[p], &-vals[q].clone()), &vec_scale(&gens[q], &vals[p]));
                let replace = |drop: &[usize]| {
                    let mut g: Vec<QVec> =
                        gens.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, x)| x.clone()).collect();
                    g.push(star.clone());
                    g
                };
                PieceVerdict::Split(vec![replace(&[p]), replace(&[q]), replace(&[p, q])])
            }
            (Some(_), None) => PieceVerdict::Sign(1),
            _ => PieceVerdict::Sign(-1),
        };
    }
    PieceVerdict::Sign(0)
}

/// The rational cone function that `σ_Hill(α₁,…,αₙ)` restricts to on `ℚⁿ`.
pub fn hill_cone_function(t: &GLTuple) -> Result<ConeFunction> {
    let n = t.dim();
    if t.is_degenerate() {
        return Err(Error::DegenerateTuple);
    }
    let u = t.leading_vectors();
    let s = if QMatrix::from_columns(&u).det().is_positive() { 1 } else { -1 };
    let functionals = cramer_functionals(t);

    // Open faces of the closed cone C(u₁,…,uₙ), then refinement.
    let mut stack: Vec<Vec<QVec>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).map(|i| u[i].clone()).collect())
        .collect();
    let mut terms = Vec::new();
    'piece: while let Some(gens) = stack.pop() {
        for fs in &functionals {
            match decide(fs, &gens) {
                PieceVerdict::Sign(x) if x == s => {}
                PieceVerdict::Sign(_) => continue 'piece,
                PieceVerdict::Split(parts) => {
                    stack.extend(parts);
                    continue 'piece;
                }
            }
        }
        terms.push((s as i64, OpenCone::new(gens)?));
    }
    terms.sort_by_key(|(_, c)| std::cmp::Reverse(c.rank()));
    let kappa = ConeFunction::new(terms, 0);
    verify_against_eval(t, &kappa)?;
    Ok(kappa)
}

/// Compares the decomposition with `hill_eval` at interior points of every
/// piece and at a fixed set of test vectors.
fn verify_against_eval(t: &GLTuple, kappa: &ConeFunction) -> Result<()> {
    let n = t.dim();
    let mut points: Vec<QVec> = Vec::new();
    for (_, c) in &kappa.terms {
        let g = c.generators();
        points.push(g.iter().fold(vec![Rational::zero(); n], |acc, x| vec_add(&acc, x)));
        let weighted = g.iter().enumerate().fold(vec![Rational::zero(); n], |acc, (i, x)| {
            vec_add(&acc, &vec_scale(x, &Rational::from_integer((2 * i as i64 + 1).into())))
        });
        points.push(weighted);
    }
    let mut seed: i64 = 7;
    for _ in 0..16 {
        let v: QVec = (0..n)
            .map(|_| {
                seed = (seed * 1103515245 + 12345).rem_euclid(1 << 31);
                Rational::from_integer((seed % 13 - 6).into())
            })
            .collect();
        if !is_zero_vec(&v) {
            points.push(v);
        }
    }
    for v in points {
        let direct = hill_eval(t, &v)?;
        if direct != kappa.eval(&v) {
            return Err(Error::VerificationFailed(format!("mismatch at {:?}", v)));
        }
    }
    Ok(())
}

/// `Σᵢ (−1)ⁱ σ_Hill(α₀,…,α̂ᵢ,…,αₙ)` evaluated at each sample.
pub fn cocycle_defect(ts: &[QMatrix], w: &QMatrix, samples: &[QVec]) -> Result<Vec<i64>> {
    let n = w.rows();
    if ts.len() != n + 1 {
        return Err(Error::DimensionMismatch(format!("expected {} matrices", n + 1)));
    }
    let facets: Vec<GLTuple> = (0..=n)
        .map(|i| {
            let alphas = ts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, a)| a.clone()).collect();
            GLTuple::new(alphas, w.clone())
        })
        .collect::<Result<_>>()?;
    if facets.iter().any(|f| f.is_degenerate()) {
        return Err(Error::DegenerateTuple);
    }
    samples
        .iter()
        .map(|v| {
            let mut acc = 0;
            for (i, f) in facets.iter().enumerate() {
                let x = hill_eval(f, v)?;
                acc += if i % 2 == 0 { x } else { -x };
            }
            Ok(acc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn s_matrix() -> QMatrix {
        QMatrix::from_i64_rows(&[&[0, -1], &[1, 0]])
    }

    fn v(x: &[i64]) -> QVec {
        x.iter().map(|&a| int(a)).collect()
    }

    #[test]
    fn subdivision_is_pointwise_equal() {
        for gens in [[[1i64, 0], [3, 7]], [[2, 1], [-1, 4]], [[19601, 13860], [1, 0]], [[1, 1], [2, 2 + 1]]] {
            let c = OpenCone::from_i64(&[&gens[0], &gens[1]]).unwrap();
            let k = unimodular_subdivision(&c).unwrap();
            for (_, piece) in &k.terms {
                if piece.rank() == 2 {
                    assert_eq!(QMatrix::from_columns(piece.generators()).det().abs(), int(1));
                }
            }
            for x in -12..=12 {
                for y in -12..=12 {
                    let p = v(&[x, y]);
                    assert_eq!(k.eval(&p), i64::from(c.contains(&p)), "{gens:?} at {p:?}");
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let c = OpenCone::from_i64(&[&[1, 0], &[1, 1]]).unwrap();
        assert!(c.contains(&v(&[2, 1])));
        assert!(!c.contains(&v(&[1, 1])));
        let ray = OpenCone::from_i64(&[&[1, 0]]).unwrap();
        assert!(!ray.contains(&v(&[0, 1])));
        assert!(ray.contains(&v(&[3, 0])));
    }

    #[test]
    fn reflection_action() {
        let k = ConeFunction::single(OpenCone::from_i64(&[&[1, 0], &[0, 1]]).unwrap());
        let g = QMatrix::from_i64_rows(&[&[1, 0], &[0, -1]]);
        let gk = gl_act_cone(&g, &k).unwrap();
        assert_eq!(gk.terms[0].0, -1);
        assert_eq!(gk.eval(&v(&[1, -1])), -1);
        assert_eq!(gk.eval(&v(&[1, 1])), 0);
        assert_eq!(gl_act_cone(&QMatrix::identity(2), &k).unwrap(), k);
    }

    #[test]
    fn significance_order_consequences() {
        let e1 = EpsPoly::eps_power(2, 0, 1);
        let e2 = EpsPoly::eps_power(2, 1, 1);
        let one = EpsPoly::constant(2, int(1));
        assert_eq!(lex_leading_sign(&e1.sub(&e2)), 1);
        assert_eq!(lex_leading_sign(&one.sub(&e1)), 1);
        assert_eq!(lex_leading_sign(&EpsPoly::zero(2)), 0);
        // ε₂ is below every positive power of ε₁
        let e1_cubed = EpsPoly::eps_power(2, 0, 3);
        assert_eq!(lex_leading_sign(&e1_cubed.sub(&e2)), 1);
    }

    #[test]
    fn hill_eval_hand_cases() {
        let t = GLTuple::standard(vec![QMatrix::identity(2), s_matrix()]).unwrap();
        assert_eq!(hill_eval(&t, &v(&[0, 1])).unwrap(), 1);
        assert_eq!(hill_eval(&t, &v(&[1, 0])).unwrap(), 0);
        assert_eq!(hill_eval(&t, &v(&[1, 1])).unwrap(), 1);
        assert_eq!(hill_eval(&t, &v(&[0, 0])), Err(Error::ZeroVector));
        let d = GLTuple::standard(vec![QMatrix::identity(2), QMatrix::identity(2)]).unwrap();
        assert_eq!(hill_eval(&d, &v(&[1, 0])).unwrap(), 0);
        assert!(d.is_degenerate());
        assert_eq!(hill_cone_function(&d), Err(Error::DegenerateTuple));
    }

    #[test]
    fn hill_cone_function_i_s() {
        let t = GLTuple::standard(vec![QMatrix::identity(2), s_matrix()]).unwrap();
        let k = hill_cone_function(&t).unwrap();
        let mut gens: Vec<_> = k.terms.iter().map(|(w, c)| (*w, c.generators().to_vec())).collect();
        gens.sort();
        let mut expect = vec![(1, vec![v(&[0, 1])]), (1, vec![v(&[1, 0]), v(&[0, 1])])];
        expect.sort();
        assert_eq!(gens, expect);
    }
}
