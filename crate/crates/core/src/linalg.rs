//! Small dense matrices over ℚ and ℤ, Smith normal form, and the lattice
//! operations built on it (bases from generators, intersections, coset
//! representatives, affine preimages).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::Rational;

pub type QVec = Vec<Rational>;

/// Dense row-major matrix over ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<QVec>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        QMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_columns(cols: &[QVec]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |x| x.len());
        let mut m = Self::zeros(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> QVec {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> QVec {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<QVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = m.get(i, j) + a * o.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rational]) -> QVec {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Rational::zero(), |acc, j| acc + self.get(i, j) * &v[j]))
            .collect()
    }

    pub fn scale(&self, s: &Rational) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// Fraction-free friendly Gaussian elimination over ℚ.
    pub fn det(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Rational::zero();
            };
            if p != c {
                a.swap_rows(p, c);
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det *= &piv;
            for r in c + 1..n {
                let f = a.get(r, c) / &piv;
                if f.is_zero() {
                    continue;
                }
                for k in c..n {
                    let v = a.get(r, k) - &f * a.get(c, k);
                    a.set(r, k, v);
                }
            }
        }
        det
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    pub fn inverse(&self) -> Result<QMatrix> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a.get(r, c).is_zero()).ok_or(Error::SingularMatrix)?;
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let piv = a.get(c, c).clone();
            for k in 0..n {
                let v = a.get(c, k) / &piv;
                a.set(c, k, v);
                let v = inv.get(c, k) / &piv;
                inv.set(c, k, v);
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a.get(r, c).clone();
                if f.is_zero() {
                    continue;
                }
                for k in 0..n {
                    let v = a.get(r, k) - &f * a.get(c, k);
                    a.set(r, k, v);
                    let v = inv.get(r, k) - &f * inv.get(c, k);
                    inv.set(r, k, v);
                }
            }
        }
        Ok(inv)
    }

    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !a.get(r, c).is_zero()) else {
                continue;
            };
            a.swap_rows(p, rank);
            let piv = a.get(rank, c).clone();
            for r in rank + 1..self.rows {
                let f = a.get(r, c) / &piv;
                if f.is_zero() {
                    continue;
                }
                for k in c..self.cols {
                    let v = a.get(r, k) - &f * a.get(rank, k);
                    a.set(r, k, v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Solves `self · x = b` for a full-column-rank matrix; `None` when `b`
    /// lies outside the column span.
    pub fn solve(&self, b: &[Rational]) -> Option<QVec> {
        assert_eq!(b.len(), self.rows);
        let (r, c) = (self.rows, self.cols);
        let mut a = QMatrix::zeros(r, c + 1);
        for i in 0..r {
            for j in 0..c {
                a.set(i, j, self.get(i, j).clone());
            }
            a.set(i, c, b[i].clone());
        }
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..c {
            let Some(p) = (row..r).find(|&i| !a.get(i, col).is_zero()) else {
                continue;
            };
            a.swap_rows(p, row);
            let piv = a.get(row, col).clone();
            for k in 0..=c {
                let v = a.get(row, k) / &piv;
                a.set(row, k, v);
            }
            for i in 0..r {
                if i == row {
                    continue;
                }
                let f = a.get(i, col).clone();
                if f.is_zero() {
                    continue;
                }
                for k in 0..=c {
                    let v = a.get(i, k) - &f * a.get(row, k);
                    a.set(i, k, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        if pivots.len() < c {
            return None;
        }
        if (row..r).any(|i| !a.get(i, c).is_zero()) {
            return None;
        }
        let mut x = vec![Rational::zero(); c];
        for (i, &col) in pivots.iter().enumerate() {
            x[col] = a.get(i, c).clone();
        }
        Some(x)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Least common denominator of all entries.
    pub fn denominator_lcm(&self) -> BigInt {
        self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
    }

    pub fn to_integer(&self) -> ZMatrix {
        assert!(self.is_integral(), "matrix has non-integral entries");
        ZMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.numer().clone()).collect(),
        }
    }
}

pub fn vec_lcm_denominator(v: &[Rational]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn vec_sub(a: &[Rational], b: &[Rational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_add(a: &[Rational], b: &[Rational]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_scale(a: &[Rational], s: &Rational) -> QVec {
    a.iter().map(|x| x * s).collect()
}

/// Primitive integer vector on the same ray as `v` (nonzero).
pub fn primitive_vector(v: &[Rational]) -> Vec<BigInt> {
    let den = vec_lcm_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    assert!(!g.is_zero(), "primitive vector of zero");
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn to_qvec(v: &[BigInt]) -> QVec {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl ZMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ZMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    fn at(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn to_rational(&self) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| Rational::from_integer(x.clone())).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for k in 0..self.rows {
            self.data.swap(k * self.cols + a, k * self.cols + b);
        }
    }

    /// row[dst] += f · row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for k in 0..self.cols {
            let v = self.get(src, k) * f;
            *self.at(dst, k) += v;
        }
    }

    /// col[dst] += f · col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for k in 0..self.rows {
            let v = self.get(k, src) * f;
            *self.at(k, dst) += v;
        }
    }

    fn neg_row(&mut self, r: usize) {
        for k in 0..self.cols {
            let v = -self.get(r, k).clone();
            *self.at(r, k) = v;
        }
    }
}

/// Smith normal form `U · A · V = S` with `U`, `V` unimodular and `S`
/// diagonal with nonnegative entries `d_1 | d_2 | …`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: ZMatrix,
    pub v: ZMatrix,
    pub diag: Vec<BigInt>,
}

pub fn smith_normal_form(a: &ZMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = ZMatrix::identity(m);
    let mut v = ZMatrix::identity(n);
    let steps = m.min(n);
    for t in 0..steps {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = s.get(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < s.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..m {
                let q = s.get(i, t).div_floor(s.get(t, t));
                if !q.is_zero() {
                    s.add_row(i, t, &-q.clone());
                    u.add_row(i, t, &-q);
                }
                if !s.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = s.get(t, j).div_floor(s.get(t, t));
                if !q.is_zero() {
                    s.add_col(j, t, &-q.clone());
                    v.add_col(j, t, &-q);
                }
                if !s.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row.
            let piv = s.get(t, t).clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(s.get(i, j) % &piv).is_zero()));
            match bad {
                Some(i) => {
                    s.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.neg_row(t);
            u.neg_row(t);
        }
    }
    let diag = (0..steps).map(|i| s.get(i, i).clone()).collect();
    Smith { u, v, diag }
}

/// Integer-valued determinant of an integer matrix.
pub fn zdet(a: &ZMatrix) -> BigInt {
    a.to_rational().det().to_integer()
}

/// Basis (as columns of an `n × n` matrix) of the lattice generated by the
/// given rational vectors. The generators must span ℚⁿ.
pub fn lattice_from_generators(gens: &[QVec], n: usize) -> Result<QMatrix> {
    if gens.is_empty() {
        return Err(Error::SingularMatrix);
    }
    let g = QMatrix::from_columns(gens);
    assert_eq!(g.rows(), n);
    let den = g.denominator_lcm();
    let scaled = g.scale(&Rational::from_integer(den.clone())).to_integer();
    let sm = smith_normal_form(&scaled);
    if sm.diag.len() < n || sm.diag.iter().take(n).any(|d| d.is_zero()) {
        return Err(Error::SingularMatrix);
    }
    // columns of A = U⁻¹ S V⁻¹, so the lattice is U⁻¹ · diag(d) · ℤⁿ.
    let u_inv = sm.u.to_rational().inverse()?;
    let d: Vec<Rational> = sm.diag.iter().take(n).map(|x| Rational::from_integer(x.clone())).collect();
    let basis = u_inv.mul(&QMatrix::diagonal(&d));
    Ok(basis.scale(&Rational::new(BigInt::one(), den)))
}

/// Dual lattice basis `(B⁻¹)ᵀ`.
pub fn dual_basis(b: &QMatrix) -> Result<QMatrix> {
    Ok(b.inverse()?.transpose())
}

/// Basis of the intersection of full-rank lattices.
pub fn lattice_intersection(bases: &[QMatrix]) -> Result<QMatrix> {
    let n = bases[0].rows();
    let mut dual_gens = Vec::new();
    for b in bases {
        dual_gens.extend(dual_basis(b)?.columns());
    }
    let sum = lattice_from_generators(&dual_gens, n)?;
    dual_basis(&sum)
}

/// `|det|`, the covolume of the lattice spanned by the columns.
pub fn covolume(b: &QMatrix) -> Rational {
    b.det().abs()
}

/// Whether `v` lies in the lattice whose basis has inverse `b_inv`.
pub fn in_lattice(b_inv: &QMatrix, v: &[Rational]) -> bool {
    b_inv.mul_vec(v).iter().all(|x| x.is_integer())
}

/// Representatives of `M / L` for a full-rank sublattice `L ⊆ M`.
pub fn coset_representatives(big: &QMatrix, small: &QMatrix, limit: u128) -> Result<Vec<QVec>> {
    let k = big.inverse()?.mul(small);
    if !k.is_integral() {
        return Err(Error::InvalidInput("sublattice not contained in lattice".into()));
    }
    let sm = smith_normal_form(&k.to_integer());
    let count = sm.diag.iter().fold(BigInt::one(), |acc, d| acc * d);
    let count_u: u128 = count.to_string().parse().unwrap_or(u128::MAX);
    if count_u > limit {
        return Err(Error::UnboundedEnumeration { count: count_u, limit });
    }
    // ℤⁿ / K ℤⁿ ≅ U⁻¹ (⊕ ℤ/d_i).
    let u_inv = sm.u.to_rational().inverse()?;
    let n = big.rows();
    let caps: Vec<u64> = sm.diag.iter().map(|d| d.to_string().parse::<u64>().unwrap() - 1).collect();
    let mut out = Vec::with_capacity(count_u as usize);
    let mut idx = vec![0u64; n];
    loop {
        let mu: QVec = idx.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
        out.push(big.mul_vec(&u_inv.mul_vec(&mu)));
        let mut advanced = false;
        for i in 0..n {
            if idx[i] < caps[i] {
                idx[i] += 1;
                advanced = true;
                break;
            }
            idx[i] = 0;
        }
        if !advanced {
            break;
        }
    }
    Ok(out)
}

/// Solution set of `K·λ − b ∈ ℤⁿ` for a rational `n × r` matrix of rank `r`:
/// either empty or an affine lattice `λ₀ + basis·ℤʳ` of full rank in ℚʳ.
pub fn affine_preimage(k: &QMatrix, b: &[Rational]) -> Result<Option<(QVec, QMatrix)>> {
    let (n, r) = (k.rows(), k.cols());
    if k.rank() != r {
        return Err(Error::DependentGenerators);
    }
    let den = k.denominator_lcm().lcm(&vec_lcm_denominator(b));
    let nq = Rational::from_integer(den.clone());
    let kk = k.scale(&nq).to_integer();
    let bb: Vec<BigInt> = b.iter().map(|x| (x * &nq).to_integer()).collect();
    let sm = smith_normal_form(&kk);
    // U K V = S; with λ = V μ the condition reads S μ − U b ∈ N ℤⁿ.
    let ub: Vec<BigInt> = (0..n)
        .map(|i| (0..n).fold(BigInt::zero(), |acc, j| acc + sm.u.get(i, j) * &bb[j]))
        .collect();
    for x in ub.iter().skip(r) {
        if !(x % &den).is_zero() {
            return Ok(None);
        }
    }
    let mu0: QVec = (0..r).map(|i| Rational::new(ub[i].clone(), sm.diag[i].clone())).collect();
    let steps: Vec<Rational> = (0..r).map(|i| Rational::new(den.clone(), sm.diag[i].clone())).collect();
    let v = sm.v.to_rational();
    let lam0 = v.mul_vec(&mu0);
    let basis = v.mul(&QMatrix::diagonal(&steps));
    Ok(Some((lam0, basis)))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - Rational::from_integer(x.floor().to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_i64_rows(rows)
    }

    #[test]
    fn det_and_inverse() {
        let m = q(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.det(), int(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), QMatrix::identity(2));
        assert!(q(&[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn smith_reconstructs() {
        let a = q(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]).to_integer();
        let sm = smith_normal_form(&a);
        assert_eq!(sm.diag, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let prod = sm.u.to_rational().mul(&a.to_rational()).mul(&sm.v.to_rational());
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { Rational::from_integer(sm.diag[i].clone()) } else { int(0) };
                assert_eq!(prod.get(i, j), &expect);
            }
        }
    }

    #[test]
    fn intersection_of_scaled_lattices() {
        let a = q(&[&[2, 0], &[0, 1]]);
        let b = q(&[&[3, 0], &[0, 2]]);
        let c = lattice_intersection(&[a, b]).unwrap();
        assert_eq!(covolume(&c), int(12));
        let inv = c.inverse().unwrap();
        assert!(in_lattice(&inv, &[int(6), int(2)]));
        assert!(!in_lattice(&inv, &[int(3), int(2)]));
    }

    #[test]
    fn cosets_count_index() {
        let big = QMatrix::identity(2);
        let small = q(&[&[2, 1], &[0, 3]]);
        let reps = coset_representatives(&big, &small, 100).unwrap();
        assert_eq!(reps.len(), 6);
        let inv = small.inverse().unwrap();
        for i in 0..reps.len() {
            for j in 0..i {
                assert!(!in_lattice(&inv, &vec_sub(&reps[i], &reps[j])));
            }
        }
    }

    #[test]
    fn preimage_of_line() {
        // x·(2,4) ∈ ℤ² iff x ∈ ½ℤ
        let k = QMatrix::from_columns(&[vec![int(2), int(4)]]);
        let (x0, basis) = affine_preimage(&k, &[int(0), int(0)]).unwrap().unwrap();
        assert!(frac(&(x0[0].clone() / basis.get(0, 0))).is_zero() || x0[0].is_integer());
        assert_eq!(basis.get(0, 0).abs(), rat(1, 2));
        // x·(1,0) − (0, 1/2) ∈ ℤ² has no solution
        let k = QMatrix::from_columns(&[vec![int(1), int(0)]]);
        assert!(affine_preimage(&k, &[int(0), rat(1, 2)]).unwrap().is_none());
    }
}
