//! Exact rational linear algebra.
//!
//! A small dense toolkit over [`Scalar`]: Gaussian elimination, kernels,
//! characteristic polynomials, and the simultaneous generalized
//! eigendecomposition of a commuting family. Only rational spectra are
//! supported; a characteristic polynomial that does not split over Q is
//! reported as an error instead of falling back to floating point.

use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrices {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("characteristic polynomial has no full rational root set")]
    IrrationalSpectrum,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty matrix family")]
    EmptyFamily,
}

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RationalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Scalar>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let mut m = Self::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), r, "ragged columns");
            for i in 0..r {
                m[(i, j)] = col[i].clone();
            }
        }
        m
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

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] += &prod;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        let prod = &self[(i, j)] * &v[j];
                        acc += &prod;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    /// `self - c * I`.
    pub fn sub_scalar_diag(&self, c: &Scalar) -> Self {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] -= c;
        }
        out
    }

    pub fn pow(&self, mut k: usize) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        let mut t = Scalar::zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        t
    }

    /// In-place reduction to reduced row echelon form; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, row * self.cols + j);
                }
            }
            let inv = self[(row, col)].recip();
            for j in col..self.cols {
                self[(row, j)] *= &inv;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let factor = self[(r, col)].clone();
                    for j in col..self.cols {
                        let delta = &factor * &self[(row, j)];
                        self[(r, j)] -= &delta;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Basis of the right kernel, one vector per free column. Free
    /// coordinates are set to 1 in column order, so the output is
    /// deterministic.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![Scalar::zero(); self.cols];
            vec[free] = Scalar::one();
            for (col, &p) in pivot_set.iter().enumerate() {
                if let Some(r) = p {
                    vec[col] = -&m[(r, free)];
                }
            }
            basis.push(vec);
        }
        basis
    }

    /// Solves `self * X = rhs` exactly. Returns `None` when inconsistent;
    /// free variables are fixed to zero.
    pub fn solve(&self, rhs: &RationalMatrix) -> Option<RationalMatrix> {
        assert_eq!(self.rows, rhs.rows, "rhs height mismatch");
        let mut aug = Self::zero(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..rhs.cols {
                aug[(i, self.cols + j)] = rhs[(i, j)].clone();
            }
        }
        let pivots = aug.rref_in_place();
        if pivots.iter().any(|&c| c >= self.cols) {
            return None; // a pivot in the rhs block means inconsistency
        }
        let mut x = Self::zero(self.cols, rhs.cols);
        for (r, &c) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(c, j)] = aug[(r, self.cols + j)].clone();
            }
        }
        Some(x)
    }

    pub fn solve_vec(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        let rhs = RationalMatrix::from_columns(&[rhs.to_vec()]);
        self.solve(&rhs).map(|x| x.column(0))
    }

    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let inv = self.solve(&Self::identity(self.rows))?;
        // solve() returns Some even when rank-deficient; verify.
        if self.mul(&inv) == Self::identity(self.rows) {
            Some(inv)
        } else {
            None
        }
    }

    pub fn determinant(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[(r, col)].is_zero()) else {
                return Scalar::zero();
            };
            if p != col {
                for j in 0..n {
                    m.data.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            det *= &m[(col, col)];
            let inv = m[(col, col)].recip();
            for r in (col + 1)..n {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] * &inv;
                for j in col..n {
                    let delta = &factor * &m[(col, j)];
                    m[(r, j)] -= &delta;
                }
            }
        }
        det
    }

    /// Monic characteristic polynomial coefficients `[c_0, ..., c_{n-1}, 1]`
    /// by the Faddeev–LeVerrier recurrence (division-free apart from exact
    /// integer divisions).
    pub fn char_poly(&self) -> Vec<Scalar> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut m = self.clone();
        for k in 1..=n {
            let c = -(&m.trace() / &Scalar::from_int(k as i64));
            coeffs[n - k] = c.clone();
            if k < n {
                for i in 0..n {
                    m[(i, i)] += &c;
                }
                m = self.mul(&m);
            }
        }
        coeffs
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

/// One joint generalized eigenspace of a commuting family: the eigenvalue
/// of each input matrix together with a basis (ambient coordinates).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenBlock {
    pub eigenvalues: Vec<Scalar>,
    pub basis: Vec<Vec<Scalar>>,
}

impl EigenBlock {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Simultaneous generalized eigenspace decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenDecomposition {
    pub blocks: Vec<EigenBlock>,
}

impl EigenDecomposition {
    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(EigenBlock::dim).sum()
    }
}

fn validate_family(mats: &[RationalMatrix]) -> Result<usize, LinalgError> {
    if mats.is_empty() {
        return Err(LinalgError::EmptyFamily);
    }
    let n = mats[0].rows();
    for m in mats {
        if !m.is_square() || m.rows() != n {
            return Err(LinalgError::DimensionMismatch(format!(
                "expected square {n}x{n}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
    }
    for i in 0..mats.len() {
        for j in (i + 1)..mats.len() {
            if mats[i].mul(&mats[j]) != mats[j].mul(&mats[i]) {
                return Err(LinalgError::NonCommuting(i, j));
            }
        }
    }
    Ok(n)
}

/// Rescales rational coefficients to an integer polynomial.
fn clear_denominators(poly: &[Scalar]) -> Vec<BigInt> {
    let mut denom_lcm = BigInt::one();
    for c in poly {
        denom_lcm = denom_lcm.lcm(&c.denom());
    }
    let lcm_s = Scalar::from_bigint(denom_lcm);
    poly.iter()
        .map(|c| (c * &lcm_s).to_bigint().expect("cleared denominator"))
        .collect()
}

/// All rational roots of a polynomial with multiplicity. Returns `None`
/// when the polynomial does not split into rational linear factors.
pub fn rational_roots(poly: &[Scalar]) -> Option<Vec<(Scalar, usize)>> {
    let deg = poly.len().checked_sub(1).expect("empty polynomial");
    if deg == 0 {
        return Some(Vec::new());
    }
    let mut ints = clear_denominators(poly);
    while ints.last().is_some_and(Zero::is_zero) {
        ints.pop();
    }
    let mut roots: Vec<(Scalar, usize)> = Vec::new();
    // Deflate roots at zero first.
    let mut zero_mult = 0usize;
    while ints.first().is_some_and(Zero::is_zero) && ints.len() > 1 {
        ints.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Scalar::zero(), zero_mult));
    }
    while ints.len() > 1 {
        let Some(root) = find_one_rational_root(&ints) else {
            return if ints.len() == 1 { Some(roots) } else { None };
        };
        let mut mult = 0usize;
        while let Some(next) = deflate(&ints, &root) {
            ints = next;
            mult += 1;
        }
        debug_assert!(mult > 0);
        roots.push((root, mult));
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Some(roots)
}

/// Synthetic division by `(x - root)`; `None` if `root` is not a root.
fn deflate(ints: &[BigInt], root: &Scalar) -> Option<Vec<BigInt>> {
    let coeffs: Vec<Scalar> = ints.iter().map(|c| Scalar::from_bigint(c.clone())).collect();
    let n = coeffs.len() - 1;
    let mut quotient = vec![Scalar::zero(); n];
    let mut carry = Scalar::zero();
    for k in (0..=n).rev() {
        let val = &coeffs[k] + &(&carry * root);
        if k == 0 {
            if !val.is_zero() {
                return None;
            }
        } else {
            quotient[k - 1] = val.clone();
            carry = val;
        }
    }
    Some(clear_denominators(&quotient))
}

fn find_one_rational_root(ints: &[BigInt]) -> Option<Scalar> {
    debug_assert!(ints.len() > 1);
    debug_assert!(!ints[0].is_zero());
    let lead = ints.last().unwrap();
    let candidates_num = small_divisors(&ints[0].abs());
    let candidates_den = small_divisors(&lead.abs());
    for q in &candidates_den {
        for p in &candidates_num {
            for sign in [1i64, -1] {
                let cand = &(&Scalar::from_bigint(p.clone()) / &Scalar::from_bigint(q.clone()))
                    * &Scalar::from_int(sign);
                if eval_int_poly(ints, &cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn eval_int_poly(ints: &[BigInt], x: &Scalar) -> Scalar {
    let mut acc = Scalar::zero();
    for c in ints.iter().rev() {
        acc = &(&acc * x) + &Scalar::from_bigint(c.clone());
    }
    acc
}

/// Divisors via trial division. Factors above the trial bound are kept as a
/// single pseudo-prime cofactor, which is fine for the desk-scale spectra
/// this library targets: a missed divisor can only cause a conservative
/// `IrrationalSpectrum` error, never a wrong decomposition.
fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut rest = n.clone();
    let mut p = BigInt::from(2u32);
    let bound = BigInt::from(1_000_000u64);
    while &p * &p <= rest && p <= bound {
        let mut mult = 0;
        while (&rest % &p).is_zero() {
            rest = &rest / &p;
            mult += 1;
        }
        if mult > 0 {
            factors.push((p.clone(), mult));
        }
        p += if p.to_u32() == Some(2) { 1u32 } else { 2u32 };
    }
    if rest > BigInt::one() {
        factors.push((rest, 1));
    }
    let mut divisors = vec![BigInt::one()];
    for (prime, mult) in factors {
        let mut extended = Vec::new();
        for d in &divisors {
            let mut power = BigInt::one();
            for _ in 0..=mult {
                extended.push(d * &power);
                power = &power * &prime;
            }
        }
        divisors = extended;
    }
    divisors.sort();
    divisors.dedup();
    divisors
}

/// Refines the ambient space into joint generalized eigenspaces of a
/// pairwise-commuting family of rational matrices.
pub fn simultaneous_generalized_eigenspaces(
    mats: &[RationalMatrix],
) -> Result<EigenDecomposition, LinalgError> {
    let n = validate_family(mats)?;
    let full: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut v = vec![Scalar::zero(); n];
            v[i] = Scalar::one();
            v
        })
        .collect();
    let mut blocks = vec![EigenBlock { eigenvalues: Vec::new(), basis: full }];
    for m in mats {
        let mut refined = Vec::new();
        for block in blocks {
            let b = RationalMatrix::from_columns(&block.basis);
            let restricted = restrict(m, &b)?;
            let roots =
                rational_roots(&restricted.char_poly()).ok_or(LinalgError::IrrationalSpectrum)?;
            if roots.iter().map(|r| r.1).sum::<usize>() != block.dim() {
                return Err(LinalgError::IrrationalSpectrum);
            }
            for (value, _) in roots {
                let shifted = restricted.sub_scalar_diag(&value);
                let kernel = shifted.pow(block.dim()).kernel_basis();
                debug_assert!(!kernel.is_empty());
                let lifted: Vec<Vec<Scalar>> = kernel.iter().map(|k| b.mul_vec(k)).collect();
                let mut eigenvalues = block.eigenvalues.clone();
                eigenvalues.push(value);
                refined.push(EigenBlock { eigenvalues, basis: lifted });
            }
        }
        blocks = refined;
    }
    Ok(EigenDecomposition { blocks })
}

/// One exact joint eigenvector of a commuting family, together with its
/// eigenvalue tuple. The smallest rational eigenvalue is chosen at each
/// refinement step so the result is deterministic.
pub fn joint_eigenvector(
    mats: &[RationalMatrix],
) -> Result<(Vec<Scalar>, Vec<Scalar>), LinalgError> {
    let n = validate_family(mats)?;
    let mut basis: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            let mut v = vec![Scalar::zero(); n];
            v[i] = Scalar::one();
            v
        })
        .collect();
    let mut eigenvalues = Vec::new();
    for m in mats {
        let b = RationalMatrix::from_columns(&basis);
        let restricted = restrict(m, &b)?;
        let roots =
            rational_roots(&restricted.char_poly()).ok_or(LinalgError::IrrationalSpectrum)?;
        let value = roots.first().ok_or(LinalgError::IrrationalSpectrum)?.0.clone();
        let kernel = restricted.sub_scalar_diag(&value).kernel_basis();
        debug_assert!(!kernel.is_empty(), "chosen value is an eigenvalue");
        basis = kernel.iter().map(|k| b.mul_vec(k)).collect();
        eigenvalues.push(value);
    }
    let mut v = basis.swap_remove(0);
    // Normalize so the first nonzero coordinate is 1.
    if let Some(first) = v.iter().find(|c| !c.is_zero()).cloned() {
        let inv = first.recip();
        for c in &mut v {
            *c *= &inv;
        }
    }
    Ok((eigenvalues, v))
}

/// Coordinates of `m` restricted to the column span of `basis`.
fn restrict(m: &RationalMatrix, basis: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
    let image = m.mul(basis);
    basis.solve(&image).ok_or_else(|| {
        LinalgError::DimensionMismatch("subspace not invariant under the family".into())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    #[test]
    fn rref_and_kernel() {
        let m = RationalMatrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn char_poly_matches_hand_expansion() {
        // [[2,1],[0,2]] has char poly (x-2)^2 = x^2 - 4x + 4.
        let m = RationalMatrix::from_int_rows(&[&[2, 1], &[0, 2]]);
        assert_eq!(m.char_poly(), vec![s(4), s(-4), s(1)]);
    }

    #[test]
    fn rational_roots_with_multiplicity() {
        // (x-2)^2 (x+1/2): 2x^3 - 7x^2 + 4x + 4 over 2
        let poly = vec![s(2), s(2), &s(-7) / &s(2), s(1)];
        let roots = rational_roots(&poly).unwrap();
        assert_eq!(roots, vec![(Scalar::new(-1, 2), 1), (s(2), 2)]);
        // x^2 + 1 has no rational roots
        assert_eq!(rational_roots(&[s(1), s(0), s(1)]), None);
        // x^2 - 2 splits only over an extension
        assert_eq!(rational_roots(&[s(-2), s(0), s(1)]), None);
    }

    #[test]
    fn single_jordan_block() {
        let m = RationalMatrix::from_int_rows(&[&[2, 1], &[0, 2]]);
        let dec = simultaneous_generalized_eigenspaces(&[m]).unwrap();
        assert_eq!(dec.blocks.len(), 1);
        assert_eq!(dec.blocks[0].eigenvalues, vec![s(2)]);
        assert_eq!(dec.blocks[0].dim(), 2);
    }

    #[test]
    fn diagonal_pair_splits() {
        let a = RationalMatrix::from_int_rows(&[&[1, 0], &[0, 3]]);
        let b = RationalMatrix::from_int_rows(&[&[5, 0], &[0, 5]]);
        let dec = simultaneous_generalized_eigenspaces(&[a, b]).unwrap();
        assert_eq!(dec.blocks.len(), 2);
        assert_eq!(dec.blocks[0].eigenvalues, vec![s(1), s(5)]);
        assert_eq!(dec.blocks[1].eigenvalues, vec![s(3), s(5)]);
        assert_eq!(dec.total_dim(), 2);
    }

    /// Oracle: matrix of d/dx on span{e^{2x} x^k : k <= 3}, built by hand.
    /// Differentiating gives 2 e^{2x} x^k + k e^{2x} x^{k-1}: diagonal 2,
    /// superdiagonal 1, 2, 3.
    fn exp_poly_matrix() -> RationalMatrix {
        RationalMatrix::from_int_rows(&[
            &[2, 1, 0, 0],
            &[0, 2, 2, 0],
            &[0, 0, 2, 3],
            &[0, 0, 0, 2],
        ])
    }

    #[test]
    fn exp_poly_block() {
        let dec = simultaneous_generalized_eigenspaces(&[exp_poly_matrix()]).unwrap();
        assert_eq!(dec.blocks.len(), 1);
        assert_eq!(dec.blocks[0].eigenvalues, vec![s(2)]);
        assert_eq!(dec.blocks[0].dim(), 4);
    }

    #[test]
    fn exp_poly_joint_eigenvector() {
        let (values, v) = joint_eigenvector(&[exp_poly_matrix()]).unwrap();
        assert_eq!(values, vec![s(2)]);
        // e^{2x} itself: first coordinate only.
        assert_eq!(v, vec![s(1), s(0), s(0), s(0)]);
    }

    #[test]
    fn nilpotent_jordan_block_eigenvector() {
        let m = RationalMatrix::from_int_rows(&[&[0, 1], &[0, 0]]);
        let (values, v) = joint_eigenvector(&[m]).unwrap();
        assert_eq!(values, vec![s(0)]);
        assert_eq!(v, vec![s(1), s(0)]);
    }

    #[test]
    fn identity_has_unit_eigenvector() {
        let (values, v) = joint_eigenvector(&[RationalMatrix::identity(3)]).unwrap();
        assert_eq!(values, vec![s(1)]);
        assert!(v.iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn non_commuting_rejected() {
        let a = RationalMatrix::from_int_rows(&[&[0, 1], &[0, 0]]);
        let b = RationalMatrix::from_int_rows(&[&[0, 0], &[1, 0]]);
        assert!(matches!(
            simultaneous_generalized_eigenspaces(&[a, b]),
            Err(LinalgError::NonCommuting(0, 1))
        ));
    }

    #[test]
    fn irrational_spectrum_rejected() {
        let m = RationalMatrix::from_int_rows(&[&[0, 2], &[1, 0]]); // x^2 - 2
        assert!(matches!(
            simultaneous_generalized_eigenspaces(&[m]),
            Err(LinalgError::IrrationalSpectrum)
        ));
    }

    #[test]
    fn blocks_are_invariant_and_annihilated() {
        // Commuting family: A and A^2 + I for a mixed-spectrum A.
        let a = RationalMatrix::from_int_rows(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 4]]);
        let a2 = a.mul(&a);
        let dec = simultaneous_generalized_eigenspaces(&[a.clone(), a2.clone()]).unwrap();
        assert_eq!(dec.total_dim(), 3);
        for block in &dec.blocks {
            for (m, value) in [(&a, &block.eigenvalues[0]), (&a2, &block.eigenvalues[1])] {
                let shifted = m.sub_scalar_diag(value).pow(block.dim());
                for v in &block.basis {
                    assert!(shifted.mul_vec(v).iter().all(Scalar::is_zero));
                }
            }
        }
    }

    #[test]
    fn conjugating_back_reproduces_input() {
        let a = RationalMatrix::from_int_rows(&[&[1, 1, 0], &[0, 1, 0], &[0, 0, 4]]);
        let dec = simultaneous_generalized_eigenspaces(&[a.clone()]).unwrap();
        let basis: Vec<Vec<Scalar>> =
            dec.blocks.iter().flat_map(|b| b.basis.iter().cloned()).collect();
        let p = RationalMatrix::from_columns(&basis);
        let p_inv = p.inverse().expect("change of basis invertible");
        let block_form = p_inv.mul(&a.mul(&p));
        assert_eq!(p.mul(&block_form).mul(&p_inv), a);
        // Block form is block-diagonal: entries across block boundaries vanish.
        let mut offset = 0;
        for b in &dec.blocks {
            for i in offset..offset + b.dim() {
                for j in 0..3 {
                    if !(offset..offset + b.dim()).contains(&j) {
                        assert!(block_form[(i, j)].is_zero());
                    }
                }
            }
            offset += b.dim();
        }
    }
}
