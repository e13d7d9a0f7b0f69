//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision. Matrices are dense and row-major;
//! vectors are plain slices so callers can keep their own layouts.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinAlgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (entry ({row}, {col}) differs from its transpose)")]
    NotSymmetric { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ragged rows: row {row} has {found} entries, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("matrix is singular")]
    Singular,
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<Int>;
pub type RatMatrix = Matrix<Rat>;

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[r * self.cols + c])?;
            }
        }
        write!(f, "]")
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        assert!(r < self.rows && c < self.cols, "matrix index out of range");
        &mut self.data[r * self.cols + c]
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinAlgError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(LinAlgError::Ragged { row: i, expected: ncols, found: row.len() });
            }
            data.extend(row);
        }
        Ok(Self { rows: nrows, cols: ncols, data })
    }

    /// Builds a matrix from a flat row-major buffer.
    pub fn from_flat(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinAlgError> {
        if data.len() != rows * cols {
            return Err(LinAlgError::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
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

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// Keeps the given rows, in order.
    pub fn select_rows(&self, which: &[usize]) -> Self {
        let mut data = Vec::with_capacity(which.len() * self.cols);
        for &r in which {
            data.extend_from_slice(self.row(r));
        }
        Self { rows: which.len(), cols: self.cols, data }
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + for<'a> core::ops::Mul<&'a T, Output = T>,
    for<'a> &'a T: core::ops::Mul<&'a T, Output = T>,
{
    pub fn mul(&self, other: &Self) -> Result<Self, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    let slot = &mut out[(i, j)];
                    *slot = core::mem::replace(slot, T::zero()) + prod;
                }
            }
        }
        Ok(out)
    }

    /// `v^T · self`, i.e. the row vector `v` times this matrix.
    pub fn left_mul_vec(&self, v: &[T]) -> Result<Vec<T>, LinAlgError> {
        if v.len() != self.rows {
            return Err(LinAlgError::DimensionMismatch { expected: self.rows, found: v.len() });
        }
        let mut out = vec![T::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, slot) in out.iter_mut().enumerate() {
                *slot = core::mem::replace(slot, T::zero()) + vi * &self[(i, j)];
            }
        }
        Ok(out)
    }

    /// The bilinear form `x^T · self · y`.
    pub fn bilinear(&self, x: &[T], y: &[T]) -> Result<T, LinAlgError> {
        if y.len() != self.cols {
            return Err(LinAlgError::DimensionMismatch { expected: self.cols, found: y.len() });
        }
        let xg = self.left_mul_vec(x)?;
        Ok(xg.iter().zip(y).fold(T::zero(), |acc, (a, b)| acc + a * b))
    }

    /// `B · self · B^T`, the Gram matrix of the rows of `b`.
    pub fn congruent(&self, b: &Self) -> Result<Self, LinAlgError> {
        b.mul(self)?.mul(&b.transpose())
    }
}

impl<T: Clone + PartialEq> Matrix<T> {
    pub fn is_symmetric(&self) -> bool {
        self.symmetry_defect().is_none()
    }

    fn symmetry_defect(&self) -> Option<(usize, usize)> {
        if self.rows != self.cols {
            return Some((0, 0));
        }
        for r in 0..self.rows {
            for c in r + 1..self.cols {
                if self.data[r * self.cols + c] != self.data[c * self.cols + r] {
                    return Some((r, c));
                }
            }
        }
        None
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, LinAlgError> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect())
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| Rat::from_integer(x.clone()))
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        for c in 0..self.cols {
            let add = &self[(src, c)] * k;
            self[(dst, c)] += add;
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &Int) {
        for r in 0..self.rows {
            let add = &self[(r, src)] * k;
            self[(r, dst)] += add;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -core::mem::take(&mut self[(r, c)]);
            self[(r, c)] = v;
        }
    }
}

impl RatMatrix {
    /// Splits into integer numerators over one positive common denominator.
    pub fn to_common_denominator(&self) -> (IntMatrix, Int) {
        let den = common_denominator(self.data.iter());
        let num = self.map(|x| (x * Rat::from_integer(den.clone())).to_integer());
        (num, den)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero()).ok_or(LinAlgError::Singular)?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = a[(col, col)].clone();
            for c in 0..n {
                a[(col, c)] = &a[(col, c)] / &p;
                inv[(col, c)] = &inv[(col, c)] / &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for c in 0..n {
                    let da = &f * &a[(col, c)];
                    a[(r, c)] -= da;
                    let di = &f * &inv[(col, c)];
                    inv[(r, c)] -= di;
                }
            }
        }
        Ok(inv)
    }
}

/// Least common multiple of the denominators; always positive.
pub fn common_denominator<'a>(xs: impl Iterator<Item = &'a Rat>) -> Int {
    xs.fold(Int::one(), |acc, x| acc.lcm(x.denom()))
}

/// Fraction-free (Bareiss) determinant.
pub fn det(a: &IntMatrix) -> Result<Int, LinAlgError> {
    if !a.is_square() {
        return Err(LinAlgError::NotSquare { rows: a.rows, cols: a.cols });
    }
    let n = a.rows;
    if n == 0 {
        return Ok(Int::one());
    }
    let mut m = a.clone();
    let mut sign = Int::one();
    let mut prev = Int::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&r| !m[(r, k)].is_zero()) {
                Some(r) => {
                    m.swap_rows(k, r);
                    sign = -sign;
                }
                None => return Ok(Int::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                m[(i, j)] = v;
            }
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * &m[(n - 1, n - 1)])
}

/// Result of a Smith normal form computation: `left · A · right = diag`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub left: IntMatrix,
    pub diag: IntMatrix,
    pub right: IntMatrix,
    /// Inverse of `right`; its leading rows span the saturation of the row space.
    pub right_inv: IntMatrix,
    pub rank: usize,
}

impl Smith {
    /// Nonzero diagonal entries in order; each divides the next.
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.rank).map(|i| self.diag[(i, i)].clone()).collect()
    }

    /// Diagonal entries different from one.
    pub fn invariant_factors(&self) -> Vec<Int> {
        self.diagonal().into_iter().filter(|d| !d.is_one()).collect()
    }
}

/// Smith normal form with unimodular transforms, pivoting on the smallest
/// absolute entry. Works for any shape, including rank-deficient input.
pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    let mut left = IntMatrix::identity(m);
    let mut right = IntMatrix::identity(n);
    let mut right_inv = IntMatrix::identity(n);
    let mut t = 0;

    // Column operations on `d` act on `right` the same way and on `right_inv`
    // by the inverse row operation.
    let col_add = |d: &mut IntMatrix, r: &mut IntMatrix, ri: &mut IntMatrix, dst: usize, src: usize, k: &Int| {
        d.add_col_multiple(dst, src, k);
        r.add_col_multiple(dst, src, k);
        ri.add_row_multiple(src, dst, &-k);
    };
    let col_swap = |d: &mut IntMatrix, r: &mut IntMatrix, ri: &mut IntMatrix, x: usize, y: usize| {
        d.swap_cols(x, y);
        r.swap_cols(x, y);
        ri.swap_rows(x, y);
    };

    while t < m.min(n) {
        let Some((pr, pc)) = min_abs_entry(&d, t, t) else { break };
        d.swap_rows(t, pr);
        left.swap_rows(t, pr);
        col_swap(&mut d, &mut right, &mut right_inv, t, pc);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&d[(i, t)] / &d[(t, t)]);
                d.add_row_multiple(i, t, &q);
                left.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&d[(t, j)] / &d[(t, t)]);
                col_add(&mut d, &mut right, &mut right_inv, j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                // A remainder is now smaller than the pivot; promote it.
                let mut best = (t, t);
                for i in t + 1..m {
                    if !d[(i, t)].is_zero() && d[(i, t)].abs() < d[best].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..n {
                    if !d[(t, j)].is_zero() && d[(t, j)].abs() < d[best].abs() {
                        best = (t, j);
                    }
                }
                if best.0 != t {
                    d.swap_rows(t, best.0);
                    left.swap_rows(t, best.0);
                } else if best.1 != t {
                    col_swap(&mut d, &mut right, &mut right_inv, t, best.1);
                }
                continue;
            }
            // Enforce the divisibility chain.
            let p = d[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, &Int::one());
                    left.add_row_multiple(t, i, &Int::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
        t += 1;
    }
    Smith { left, diag: d, right, right_inv, rank: t }
}

fn min_abs_entry(d: &IntMatrix, r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in r0..d.rows {
        for c in c0..d.cols {
            let v = &d[(r, c)];
            if v.is_zero() {
                continue;
            }
            if best.map_or(true, |b| v.abs() < d[b].abs()) {
                best = Some((r, c));
            }
        }
    }
    best
}

/// Rank over the rationals.
pub fn rank(a: &IntMatrix) -> usize {
    smith_normal_form(a).rank
}

/// Inertia of a symmetric form: counts of positive, negative and zero squares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn is_nondegenerate(&self) -> bool {
        self.zero == 0
    }
}

/// Signature by rational congruence diagonalisation. A hyperbolic step
/// (`e_i += e_j`) is used when every remaining diagonal entry vanishes.
pub fn signature(a: &IntMatrix) -> Result<Signature, LinAlgError> {
    if !a.is_square() {
        return Err(LinAlgError::NotSquare { rows: a.rows, cols: a.cols });
    }
    if let Some((row, col)) = a.symmetry_defect() {
        return Err(LinAlgError::NotSymmetric { row, col });
    }
    let n = a.rows;
    let mut m = a.to_rational();
    let mut sig = Signature { positive: 0, negative: 0, zero: 0 };
    for k in 0..n {
        if m[(k, k)].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !m[(i, i)].is_zero()) {
                m.swap_rows(k, i);
                m.swap_cols(k, i);
            } else if let Some(j) = (k + 1..n).find(|&j| !m[(k, j)].is_zero()) {
                // m[k][k] becomes 2 m[k][j] != 0
                for c in 0..n {
                    let v = m[(j, c)].clone();
                    m[(k, c)] += v;
                }
                for r in 0..n {
                    let v = m[(r, j)].clone();
                    m[(r, k)] += v;
                }
            } else {
                sig.zero += 1;
                continue;
            }
        }
        let p = m[(k, k)].clone();
        if p.is_positive() {
            sig.positive += 1;
        } else {
            sig.negative += 1;
        }
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let f = &m[(i, k)] / &p;
            for c in k..n {
                let v = &f * &m[(k, c)];
                m[(i, c)] -= v;
            }
            for r in k..n {
                let v = &f * &m[(r, k)];
                m[(r, i)] -= v;
            }
        }
    }
    Ok(sig)
}

/// Integer solution of `A x = b`, if one exists.
pub fn solve_integral(a: &IntMatrix, b: &[Int]) -> Result<Option<Vec<Int>>, LinAlgError> {
    if b.len() != a.rows {
        return Err(LinAlgError::DimensionMismatch { expected: a.rows, found: b.len() });
    }
    let s = smith_normal_form(a);
    Ok(solve_with_smith(&s, b))
}

/// Reuses a precomputed Smith form of `A` to solve `A x = b` over the integers.
pub fn solve_with_smith(s: &Smith, b: &[Int]) -> Option<Vec<Int>> {
    let n = s.right.rows;
    let ub: Vec<Int> = (0..s.left.rows)
        .map(|i| s.left.row(i).iter().zip(b).map(|(u, x)| u * x).sum())
        .collect();
    let mut y = vec![Int::zero(); n];
    for (i, ubi) in ub.iter().enumerate() {
        if i < s.rank {
            let (q, r) = ubi.div_rem(&s.diag[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !ubi.is_zero() {
            return None;
        }
    }
    Some((0..n).map(|i| s.right.row(i).iter().zip(&y).map(|(v, yi)| v * yi).sum()).collect())
}

/// A basis (as rows) of the Z-span of the rows of `g`.
pub fn row_span_basis(g: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(g);
    let mut rows = Vec::with_capacity(s.rank);
    for i in 0..s.rank {
        let d = &s.diag[(i, i)];
        rows.push(s.right_inv.row(i).iter().map(|x| x * d).collect());
    }
    IntMatrix::from_rows(rows).unwrap_or_else(|_| IntMatrix::zeros(0, g.cols))
}

/// Integer relations `c` with `c · g = 0`, as rows of a basis of the left kernel.
pub fn left_kernel(g: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(g);
    let which: Vec<usize> = (s.rank..g.rows).collect();
    s.left.select_rows(&which)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    fn ints(xs: &[i64]) -> Vec<Int> {
        xs.iter().map(|&x| Int::from(x)).collect()
    }

    #[test]
    fn det_small() {
        assert_eq!(det(&m(&[&[2, 1], &[1, 2]])).unwrap(), Int::from(3));
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])).unwrap(), Int::from(-1));
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])).unwrap(), Int::zero());
        assert!(matches!(det(&m(&[&[1, 2, 3]])), Err(LinAlgError::NotSquare { .. })));
    }

    #[test]
    fn snf_transforms_hold() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.left.mul(&a).unwrap().mul(&s.right).unwrap(), s.diag);
        assert_eq!(s.diagonal(), ints(&[2, 6, 12]));
        assert_eq!(s.right.mul(&s.right_inv).unwrap(), IntMatrix::identity(3));
    }

    #[test]
    fn snf_rank_deficient() {
        let a = m(&[&[1, 2], &[2, 4], &[3, 6]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.rank, 1);
        assert_eq!(left_kernel(&a).rows(), 2);
    }

    #[test]
    fn signature_hyperbolic() {
        let u = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(signature(&u).unwrap(), Signature { positive: 1, negative: 1, zero: 0 });
        assert!(matches!(signature(&m(&[&[0, 1], &[2, 0]])), Err(LinAlgError::NotSymmetric { .. })));
    }

    #[test]
    fn solve_integral_cases() {
        let a = m(&[&[2, 0], &[0, 3]]);
        assert_eq!(solve_integral(&a, &ints(&[4, 9])).unwrap(), Some(ints(&[2, 3])));
        assert_eq!(solve_integral(&a, &ints(&[1, 0])).unwrap(), None);
        assert!(solve_integral(&a, &ints(&[1])).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[&[2, 1], &[1, 1]]).to_rational();
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RatMatrix::identity(2));
    }
}
