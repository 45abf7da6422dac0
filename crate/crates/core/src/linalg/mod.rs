//! Dense matrices and vectors over a [`Scalar`] field.
//!
//! Rank and column spaces on the exact path go through fraction-free
//! (Bareiss) elimination over the integers; the floating-point path uses
//! partially pivoted Gaussian elimination with a relative zero threshold.

pub mod bareiss;
pub mod eigen;
pub mod roots;

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, DEFAULT_RANK_TOL, DEFAULT_TOL};

pub use eigen::EigenPair;

#[derive(Debug, Clone, PartialEq)]
pub struct Vector<F> {
    pub entries: Vec<F>,
}

impl<F: Scalar> Vector<F> {
    pub fn new(entries: Vec<F>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![F::zero(); dim])
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| F::from_i64(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.entries.iter().map(|e| e.mul_ref(c)).collect())
    }

    /// Bilinear pairing `Σ a_i b_i` (no conjugation).
    pub fn dot(&self, other: &Self) -> F {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(F::zero(), |acc, (a, b)| acc + a.mul_ref(b))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.entries.iter().map(F::magnitude).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Vector<G> {
        Vector::new(self.entries.iter().map(f).collect())
    }
}

impl<F> Index<usize> for Vector<F> {
    type Output = F;
    fn index(&self, i: usize) -> &F {
        &self.entries[i]
    }
}

impl<F> IndexMut<usize> for Vector<F> {
    fn index_mut(&mut self, i: usize) -> &mut F {
        &mut self.entries[i]
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                op: "Matrix::from_vec",
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    op: "Matrix::from_rows",
                    expected: c,
                    got: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self { rows: r, cols: c, data })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| F::from_i64(v)).collect())
                .collect(),
        )
        .expect("rows of equal length")
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vector<F>]) -> Result<Self> {
        let rows = cols.first().map_or(0, Vector::dim);
        if let Some(bad) = cols.iter().find(|c| c.dim() != rows) {
            return Err(Error::DimensionMismatch {
                op: "Matrix::from_columns",
                expected: rows,
                got: bad.dim(),
            });
        }
        Ok(Self::from_fn(rows, cols.len(), |r, c| cols[c][r].clone()))
    }

    pub fn diagonal(values: &[F]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
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

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector<F> {
        Vector::new((0..self.rows).map(|r| self[(r, c)].clone()).collect())
    }

    pub fn columns(&self) -> Vec<Vector<F>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_fn(self.rows, idx.len(), |r, c| self[(r, idx[c])].clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|e| e.mul_ref(c))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "Matrix::sub")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub_ref(b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "Matrix::add")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add_ref(b)).collect(),
        })
    }

    fn same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                op,
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(())
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(F::magnitude).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn mul_vec(&self, x: &Vector<F>) -> Result<Vector<F>> {
        if x.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                op: "Matrix::mul_vec",
                expected: self.cols,
                got: x.dim(),
            });
        }
        let out = (0..self.rows)
            .map(|r| {
                let mut acc = F::zero();
                for (a, b) in self.row(r).iter().zip(&x.entries) {
                    if !a.is_zero() {
                        acc = acc + a.mul_ref(b);
                    }
                }
                acc
            })
            .collect();
        Ok(Vector::new(out))
    }

    /// Entrywise comparison: exact on the rational path, otherwise
    /// `max |a - b| <= tol * (1 + max |a|)`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.rows != other.rows || self.cols != other.cols {
            return false;
        }
        let scale = 1.0 + self.max_magnitude().max(other.max_magnitude());
        self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, scale, tol))
    }
}

impl<F> Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (r, c): (usize, usize)) -> &F {
        &self.data[r * self.cols + c]
    }
}

impl<F> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut F {
        &mut self.data[r * self.cols + c]
    }
}

pub fn matmul<F: Scalar>(a: &Matrix<F>, b: &Matrix<F>) -> Result<Matrix<F>> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch {
            op: "matmul",
            expected: a.cols,
            got: b.rows,
        });
    }
    let mut out = Matrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = &a[(i, k)];
            if aik.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let bkj = &b[(k, j)];
                if bkj.is_zero() {
                    continue;
                }
                let prod = aik.mul_ref(bkj);
                let slot: &mut F = &mut out[(i, j)];
                *slot = slot.add_ref(&prod);
            }
        }
    }
    Ok(out)
}

pub fn rank<F: Scalar>(a: &Matrix<F>) -> usize {
    rank_with_tol(a, DEFAULT_RANK_TOL)
}

pub fn rank_with_tol<F: Scalar>(a: &Matrix<F>, tol: f64) -> usize {
    F::pivot_columns(a, tol).len()
}

/// Pivot columns of `a`, which form a basis of its column space.
pub fn column_space_basis<F: Scalar>(a: &Matrix<F>) -> Matrix<F> {
    column_space_basis_with_tol(a, DEFAULT_RANK_TOL)
}

pub fn column_space_basis_with_tol<F: Scalar>(a: &Matrix<F>, tol: f64) -> Matrix<F> {
    a.select_columns(&F::pivot_columns(a, tol))
}

/// Gauss–Jordan reduction to reduced row echelon form.
///
/// Returns the reduced matrix and its pivot columns. On the floating-point
/// path an entry is treated as zero when `|p| <= tol * max|a|`.
pub fn row_reduce<F: Scalar>(mut m: Matrix<F>, tol: f64) -> (Matrix<F>, Vec<usize>) {
    let scale = m.max_magnitude();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let candidate = if F::is_exact() {
            (r..m.rows).find(|&i| !m[(i, c)].is_zero())
        } else {
            (r..m.rows)
                .filter(|&i| !m[(i, c)].negligible(scale, tol))
                .max_by(|&i, &j| m[(i, c)].magnitude().total_cmp(&m[(j, c)].magnitude()))
        };
        let Some(p) = candidate else { continue };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = F::one().div_ref(&m[(r, c)]);
        for j in c..m.cols {
            m[(r, j)] = m[(r, j)].mul_ref(&inv);
        }
        let pivot_row: Vec<F> = m.row(r).to_vec();
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let factor = m[(i, c)].clone();
            if factor.is_zero() {
                continue;
            }
            for j in c..m.cols {
                if pivot_row[j].is_zero() {
                    continue;
                }
                m[(i, j)] = m[(i, j)].sub_ref(&factor.mul_ref(&pivot_row[j]));
            }
            if !F::is_exact() {
                m[(i, c)] = F::zero();
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

pub fn inverse<F: Scalar>(a: &Matrix<F>) -> Result<Matrix<F>> {
    inverse_with_tol(a, DEFAULT_RANK_TOL)
}

pub fn inverse_with_tol<F: Scalar>(a: &Matrix<F>, tol: f64) -> Result<Matrix<F>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            op: "inverse",
            expected: a.rows,
            got: a.cols,
        });
    }
    let n = a.rows;
    let aug = Matrix::from_fn(n, 2 * n, |r, c| {
        if c < n {
            a[(r, c)].clone()
        } else if c - n == r {
            F::one()
        } else {
            F::zero()
        }
    });
    let (red, pivots) = row_reduce(aug, tol);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::SingularMatrix);
    }
    Ok(Matrix::from_fn(n, n, |r, c| red[(r, n + c)].clone()))
}

/// Basis of the right kernel `{v : a v = 0}` from the reduced echelon form.
pub fn kernel_basis<F: Scalar>(a: &Matrix<F>, tol: f64) -> Vec<Vector<F>> {
    let (red, pivots) = row_reduce(a.clone(), tol);
    let free: Vec<usize> = (0..a.cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = Vector::zeros(a.cols);
            v[f] = F::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -red[(r, f)].clone();
            }
            v
        })
        .collect()
}

/// Solve `b c = y` through the normal equations `bᴴ b c = bᴴ y`.
///
/// `b` must have full column rank. Fails with `InconsistentSystem` when the
/// columns of `y` are not in the span of `b` (exactly, or to `DEFAULT_TOL`).
pub fn solve_least_squares_exact<F: Scalar>(b: &Matrix<F>, y: &Matrix<F>) -> Result<Matrix<F>> {
    solve_least_squares_with_tol(b, y, DEFAULT_RANK_TOL, DEFAULT_TOL)
}

pub fn solve_least_squares_with_tol<F: Scalar>(
    b: &Matrix<F>,
    y: &Matrix<F>,
    rank_tol: f64,
    tol: f64,
) -> Result<Matrix<F>> {
    if b.rows != y.rows {
        return Err(Error::DimensionMismatch {
            op: "solve_least_squares_exact",
            expected: b.rows,
            got: y.rows,
        });
    }
    let bh = b.conj_transpose();
    let gram = matmul(&bh, b)?;
    let rhs = matmul(&bh, y)?;
    let k = b.cols;
    let aug = Matrix::from_fn(k, k + y.cols, |r, c| {
        if c < k {
            gram[(r, c)].clone()
        } else {
            rhs[(r, c - k)].clone()
        }
    });
    let (red, pivots) = row_reduce(aug, rank_tol);
    if pivots.len() < k || pivots[k - 1] >= k {
        return Err(Error::SingularMatrix);
    }
    let c = Matrix::from_fn(k, y.cols, |r, j| red[(r, k + j)].clone());
    let residual = matmul(b, &c)?.sub(y)?;
    let worst = residual.max_magnitude();
    let scale = 1.0 + y.max_magnitude();
    if residual.entries().iter().any(|e| !e.negligible(scale, tol)) {
        return Err(Error::InconsistentSystem { residual: worst });
    }
    Ok(c)
}

pub fn eigendecompose_distinct<F: Scalar>(m: &Matrix<F>) -> Result<Vec<EigenPair<F>>> {
    eigendecompose_distinct_with_tol(m, DEFAULT_TOL)
}

/// `tol` is the relative eigenvalue separation required on the
/// floating-point path; the exact path ignores it.
pub fn eigendecompose_distinct_with_tol<F: Scalar>(
    m: &Matrix<F>,
    tol: f64,
) -> Result<Vec<EigenPair<F>>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            op: "eigendecompose_distinct",
            expected: m.rows,
            got: m.cols,
        });
    }
    F::eigen_distinct(m, tol)
}

/// One eigenpair of the pencil `a w = λ b w` (equivalently of `b⁻¹ a`),
/// chosen by `pick` from the eigenvalue list. Fails with `SingularMatrix`
/// when `b` is singular and with `EigenvaluesNotDistinct` on repeated values.
pub fn generalized_eigenpair<F: Scalar>(
    a: &Matrix<F>,
    b: &Matrix<F>,
    rank_tol: f64,
    tol: f64,
    pick: &dyn Fn(&[F]) -> usize,
) -> Result<EigenPair<F>> {
    for m in [a, b] {
        if !m.is_square() || m.rows != a.rows {
            return Err(Error::DimensionMismatch {
                op: "generalized_eigenpair",
                expected: a.rows,
                got: m.cols,
            });
        }
    }
    F::generalized_eigenpair(a, b, rank_tol, tol, pick)
}
