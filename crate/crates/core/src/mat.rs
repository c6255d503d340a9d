//! Dense row-major matrices sized for small state-space work (dims ≤ ~10).
//!
//! Every constructor validates shape and finiteness; every arithmetic
//! operation that could produce a NaN or infinity reports an error instead
//! of returning one. Inversion is Gauss-Jordan with partial pivoting, which
//! is robust and exactly reproducible at these sizes.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Pivot magnitudes below this are treated as exact zeros during
/// elimination and factorization.
pub const PIVOT_TOL: f64 = 1e-12;

/// Dense real matrix with explicit dimensions, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    /// Builds a matrix from row-major data.
    ///
    /// Errors if either dimension is zero, the data length is not
    /// `rows * cols`, or any entry is non-finite.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::InvalidDimensions {
                rows,
                cols,
                len: data.len(),
            });
        }
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite { op: "matrix construction" });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from fixed-size row arrays, e.g.
    /// `Matrix::from_rows([[1.0, 2.0], [3.0, 4.0]])`.
    pub fn from_rows<const R: usize, const C: usize>(rows: [[f64; C]; R]) -> Result<Self> {
        let mut data = Vec::with_capacity(R * C);
        for row in &rows {
            data.extend_from_slice(row);
        }
        Self::new(R, C, data)
    }

    /// Builds a column vector (d×1) from a slice.
    pub fn column(entries: &[f64]) -> Result<Self> {
        Self::new(entries.len(), 1, entries.to_vec())
    }

    /// Builds a diagonal matrix from the given diagonal entries.
    pub fn diag(entries: &[f64]) -> Result<Self> {
        let n = entries.len();
        if n == 0 {
            return Err(Error::InvalidDimensions { rows: 0, cols: 0, len: 0 });
        }
        let mut m = Self::zeros(n, n);
        for (i, &v) in entries.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { op: "matrix construction" });
            }
            m.data[i * n + i] = v;
        }
        Ok(m)
    }

    /// All-zeros matrix. Panics if either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// n×n identity. Panics if `n` is zero.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Wraps already-validated data; internal shortcut for operation outputs.
    fn from_parts(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    /// Checks every entry of an operation output for finiteness.
    fn finite_checked(self, op: &'static str) -> Result<Self> {
        if self.data.iter().all(|v| v.is_finite()) {
            Ok(self)
        } else {
            Err(Error::NonFinite { op })
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major view of the entries.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Entry accessor. Panics on out-of-range indices.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        self.data[i * self.cols + j]
    }

    /// Entry mutator. Panics on out-of-range indices or a non-finite value.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        assert!(v.is_finite(), "matrix entries must be finite");
        self.data[i * self.cols + j] = v;
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = vec![0.0; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                for j in 0..other.cols {
                    out[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Matrix::from_parts(self.rows, other.cols, out).finite_checked("matmul")
    }

    /// Elementwise sum.
    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    /// Elementwise difference.
    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, op: &'static str, f: impl Fn(f64, f64) -> f64) -> Result<Matrix> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Matrix::from_parts(self.rows, self.cols, data).finite_checked(op)
    }

    /// Scalar multiple.
    pub fn scale(&self, s: f64) -> Result<Matrix> {
        let data = self.data.iter().map(|&v| v * s).collect();
        Matrix::from_parts(self.rows, self.cols, data).finite_checked("scale")
    }

    /// Transpose.
    pub fn transpose(&self) -> Matrix {
        let mut out = vec![0.0; self.data.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        Matrix::from_parts(self.cols, self.rows, out)
    }

    /// Symmetric part `(self + selfᵀ) / 2`. Panics if not square.
    pub fn symmetrize(&self) -> Matrix {
        assert!(self.is_square(), "symmetrize requires a square matrix");
        let n = self.rows;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                // Halve before adding so entries near f64::MAX cannot overflow.
                out[i * n + j] = self.data[i * n + j] / 2.0 + self.data[j * n + i] / 2.0;
            }
        }
        Matrix::from_parts(n, n, out)
    }

    /// Largest absolute elementwise difference. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "max_abs_diff requires equal shapes");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| math::abs(a - b))
            .fold(0.0, f64::max)
    }

    /// True when the matrix is square and `|a[i][j] - a[j][i]| <= tol`
    /// everywhere.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let n = self.rows;
        for i in 0..n {
            for j in (i + 1)..n {
                if math::abs(self.data[i * n + j] - self.data[j * n + i]) > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Inverse via Gauss-Jordan elimination with partial pivoting.
    ///
    /// Errors with the failing column index when the best available pivot
    /// magnitude drops below [`PIVOT_TOL`].
    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut inv = Matrix::identity(n).data;
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = math::abs(a[col * n + col]);
            for r in (col + 1)..n {
                let mag = math::abs(a[r * n + col]);
                if mag > pivot_mag {
                    pivot_row = r;
                    pivot_mag = mag;
                }
            }
            if pivot_mag < PIVOT_TOL {
                return Err(Error::SingularMatrix { column: col });
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                    inv.swap(col * n + j, pivot_row * n + j);
                }
            }
            let pivot = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= pivot;
                inv[col * n + j] /= pivot;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] -= factor * a[col * n + j];
                    inv[r * n + j] -= factor * inv[col * n + j];
                }
            }
        }
        Matrix::from_parts(n, n, inv).finite_checked("inverse")
    }

    /// Determinant via the LU factors of the same pivoted elimination.
    ///
    /// Returns 0.0 when elimination meets a pivot below [`PIVOT_TOL`].
    /// Panics if not square.
    pub fn det(&self) -> f64 {
        assert!(self.is_square(), "determinant requires a square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut sign = 1.0;
        let mut det = 1.0;
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = math::abs(a[col * n + col]);
            for r in (col + 1)..n {
                let mag = math::abs(a[r * n + col]);
                if mag > pivot_mag {
                    pivot_row = r;
                    pivot_mag = mag;
                }
            }
            if pivot_mag < PIVOT_TOL {
                return 0.0;
            }
            if pivot_row != col {
                for j in col..n {
                    a.swap(col * n + j, pivot_row * n + j);
                }
                sign = -sign;
            }
            let pivot = a[col * n + col];
            det *= pivot;
            for r in (col + 1)..n {
                let factor = a[r * n + col] / pivot;
                if factor == 0.0 {
                    continue;
                }
                for j in col..n {
                    a[r * n + j] -= factor * a[col * n + j];
                }
            }
        }
        sign * det
    }

    /// Lower-triangular Cholesky factor `L` with `L Lᵀ = self`.
    ///
    /// Only the lower triangle is read; callers that care about symmetry
    /// must check it separately. Errors with the failing index when a
    /// pivot (the squared diagonal entry before the root) is not strictly
    /// positive.
    pub fn cholesky(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = self.data[j * n + j];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if d <= 0.0 {
                return Err(Error::NotPositiveDefinite { index: j });
            }
            let root = math::sqrt(d);
            l[j * n + j] = root;
            for i in (j + 1)..n {
                let mut s = self.data[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / root;
            }
        }
        Matrix::from_parts(n, n, l).finite_checked("cholesky")
    }

    /// Smallest Cholesky pivot encountered, without failing on
    /// non-positive values.
    ///
    /// Pivots are the pre-root diagonal quantities `a[j][j] - Σ L[j][k]²`.
    /// When a pivot is not strictly positive its column is zeroed and the
    /// factorization continues, so the return value measures how far the
    /// matrix is from positive semidefinite (≥ 0 means PSD up to roundoff).
    /// Panics if not square.
    pub fn min_cholesky_pivot(&self) -> f64 {
        assert!(self.is_square(), "cholesky pivots require a square matrix");
        let n = self.rows;
        let mut l = vec![0.0; n * n];
        let mut min_pivot = f64::INFINITY;
        for j in 0..n {
            let mut d = self.data[j * n + j];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            min_pivot = min_pivot.min(d);
            if d <= 0.0 {
                continue;
            }
            let root = math::sqrt(d);
            l[j * n + j] = root;
            for i in (j + 1)..n {
                let mut s = self.data[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / root;
            }
        }
        min_pivot
    }

    /// True when the matrix is square, symmetric within `tol`, and every
    /// Cholesky pivot exceeds `tol`.
    ///
    /// Negative tolerances ask for "positive semidefinite up to roundoff";
    /// the symmetry check then degrades gracefully to exact symmetry.
    pub fn is_spd(&self, tol: f64) -> bool {
        self.is_square() && self.is_symmetric(tol.max(0.0)) && self.min_cholesky_pivot() > tol
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}
