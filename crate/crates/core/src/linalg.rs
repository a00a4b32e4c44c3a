//! Dense vectors and matrices over a [`Scalar`], plus the exact elimination
//! routines used for ranks, kernels and span membership.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use crate::scalar::Scalar;

/// Coordinates of an element of a Lie algebra in its fixed basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector<S> {
    coords: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Self { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { coords: vec![S::zero(); dim] }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[index] = S::one();
        v
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Self { coords: values.iter().map(|&v| S::from_i64(v)).collect() }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Scalar::is_zero)
    }

    pub fn is_negligible(&self, tol: f64) -> bool {
        self.coords.iter().all(|c| c.is_negligible(tol))
    }

    pub fn max_abs(&self) -> f64 {
        self.coords.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() - b.clone()).collect() }
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self { coords: self.coords.iter().map(|a| a.clone() * factor.clone()).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { coords: self.coords.iter().map(|a| -a.clone()).collect() }
    }

    /// `self += factor * other`
    pub fn axpy(&mut self, factor: &S, other: &Self) {
        if factor.is_zero() {
            return;
        }
        for (a, b) in self.coords.iter_mut().zip(&other.coords) {
            if !b.is_zero() {
                *a += factor.clone() * b.clone();
            }
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Vector<T> {
        Vector { coords: self.coords.iter().map(f).collect() }
    }
}

impl<S> Index<usize> for Vector<S> {
    type Output = S;
    fn index(&self, index: usize) -> &S {
        &self.coords[index]
    }
}

impl<S> IndexMut<usize> for Vector<S> {
    fn index_mut(&mut self, index: usize) -> &mut S {
        &mut self.coords[index]
    }
}

impl<S: Scalar> fmt::Display for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Option<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return None;
        }
        Some(Self { rows: nrows, cols: ncols, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector<S> {
        Vector::new((0..self.rows).map(|r| self[(r, c)].clone()).collect())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &Vector<S>) -> Vector<S> {
        assert_eq!(self.cols, v.dim(), "matrix-vector shape mismatch");
        let mut out = Vector::zeros(self.rows);
        for c in 0..self.cols {
            let x = &v[c];
            if x.is_zero() {
                continue;
            }
            for r in 0..self.rows {
                let a = &self[(r, c)];
                if !a.is_zero() {
                    out[r] += a.clone() * x.clone();
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect() }
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.clone() * factor.clone()).collect() }
    }

    /// `self += factor * other`
    pub fn axpy(&mut self, factor: &S, other: &Self) {
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += factor.clone() * b.clone();
            }
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Rank by fraction-free elimination.
    pub fn rank(&self, tol: f64) -> usize {
        Echelon::new(self, tol).pivots.len()
    }

    /// Basis of the kernel `{v : self v = 0}`.
    pub fn kernel(&self, tol: f64) -> Vec<Vector<S>> {
        let ech = Echelon::new(self, tol);
        let pivot_cols: Vec<usize> = ech.pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_cols.contains(c)) {
            let mut v = Vector::zeros(self.cols);
            v[free] = S::one();
            // back substitution through the echelon rows, last pivot first
            for &(r, c) in ech.pivots.iter().rev() {
                let mut acc = S::zero();
                for j in c + 1..self.cols {
                    let a = &ech.matrix[(r, j)];
                    if !a.is_zero() && !v[j].is_zero() {
                        acc += a.clone() * v[j].clone();
                    }
                }
                v[c] = -acc / ech.matrix[(r, c)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Indices of a maximal linearly independent subset of the columns.
    pub fn independent_columns(&self, tol: f64) -> Vec<usize> {
        Echelon::new(self, tol).pivots.iter().map(|&(_, c)| c).collect()
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

/// Row echelon form by Bareiss' fraction-free elimination. Over exact rationals
/// every intermediate division is exact, so pivots never depend on a tolerance.
struct Echelon<S> {
    matrix: Matrix<S>,
    /// (row, column) of each pivot, in elimination order.
    pivots: Vec<(usize, usize)>,
}

impl<S: Scalar> Echelon<S> {
    fn new(input: &Matrix<S>, tol: f64) -> Self {
        let mut m = input.clone();
        let mut pivots = Vec::new();
        let mut prev = S::one();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let candidate = if S::EXACT {
                (row..m.rows).find(|&r| !m[(r, col)].is_zero())
            } else {
                (row..m.rows).filter(|&r| !m[(r, col)].is_negligible(tol)).max_by(|&a, &b| m[(a, col)].magnitude().total_cmp(&m[(b, col)].magnitude()))
            };
            let Some(p) = candidate else { continue };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let pivot = m[(row, col)].clone();
            for r in row + 1..m.rows {
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    let value = (pivot.clone() * m[(r, c)].clone() - factor.clone() * m[(row, c)].clone()) / prev.clone();
                    m[(r, c)] = value;
                }
            }
            prev = pivot;
            pivots.push((row, col));
            row += 1;
        }
        Self { matrix: m, pivots }
    }
}

/// A linear map `g -> g` in column convention: column `j` is the image of `x_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearEndo<S> {
    matrix: Matrix<S>,
}

impl<S: Scalar> LinearEndo<S> {
    pub fn from_matrix(matrix: Matrix<S>) -> Option<Self> {
        matrix.is_square().then_some(Self { matrix })
    }

    /// Builds the map from the images of the basis vectors.
    pub fn from_columns(columns: &[Vector<S>]) -> Self {
        let n = columns.len();
        Self { matrix: Matrix::from_fn(n, n, |r, c| columns[c][r].clone()) }
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: Matrix::identity(n) }
    }

    pub fn zero(n: usize) -> Self {
        Self { matrix: Matrix::zeros(n, n) }
    }

    /// Diagonal projection onto the span of the given basis indices.
    pub fn projection(n: usize, indices: &[usize]) -> Self {
        let mut m = Matrix::zeros(n, n);
        for &i in indices {
            m[(i, i)] = S::one();
        }
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn apply(&self, v: &Vector<S>) -> Vector<S> {
        self.matrix.apply(v)
    }

    pub fn compose(&self, inner: &Self) -> Self {
        Self { matrix: self.matrix.mul(&inner.matrix) }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { matrix: self.matrix.add(&other.matrix) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { matrix: self.matrix.sub(&other.matrix) }
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self { matrix: self.matrix.scale(factor) }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self { matrix: self.matrix.commutator(&other.matrix) }
    }

    pub fn rank(&self, tol: f64) -> usize {
        self.matrix.rank(tol)
    }

    pub fn kernel(&self, tol: f64) -> Vec<Vector<S>> {
        self.matrix.kernel(tol)
    }

    /// Basis of the image, taken from independent columns.
    pub fn image(&self, tol: f64) -> Vec<Vector<S>> {
        self.matrix.independent_columns(tol).into_iter().map(|c| self.matrix.column(c)).collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LinearEndo<T> {
        LinearEndo { matrix: self.matrix.map(f) }
    }
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span<S: Scalar>(basis: &[Vector<S>], v: &Vector<S>, tol: f64) -> bool {
    let Some(first) = basis.first().or(Some(v)) else { return true };
    let n = first.dim();
    let base = Matrix::from_fn(n, basis.len(), |r, c| basis[c][r].clone());
    let extended = Matrix::from_fn(n, basis.len() + 1, |r, c| if c < basis.len() { basis[c][r].clone() } else { v[r].clone() });
    base.rank(tol) == extended.rank(tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn rank_and_kernel_exact() {
        let m = Matrix::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(1), q(0), q(1)]]).unwrap();
        assert_eq!(m.rank(0.0), 2);
        let ker = m.kernel(0.0);
        assert_eq!(ker.len(), 1);
        assert!(m.apply(&ker[0]).is_zero());
    }

    #[test]
    fn span_membership() {
        let basis = vec![Vector::<Rational>::from_i64(&[1, 0, 1]), Vector::from_i64(&[0, 1, 0])];
        assert!(in_span(&basis, &Vector::from_i64(&[2, 3, 2]), 0.0));
        assert!(!in_span(&basis, &Vector::from_i64(&[1, 0, 0]), 0.0));
        assert!(in_span(&[], &Vector::<Rational>::zeros(3), 0.0));
    }

    #[test]
    fn float_rank_uses_tolerance() {
        let m = Matrix::from_rows(vec![vec![1.0, 1.0], vec![1.0, 1.0 + 1e-14]]).unwrap();
        assert_eq!(m.rank(1e-10), 1);
    }
}
