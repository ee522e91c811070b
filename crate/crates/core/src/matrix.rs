//! Dense complex matrices, the universal numeric carrier for every other module.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex matrix in row-major order.
///
/// The wire format is `{"rows": n, "cols": m, "data": [[re, im], ...]}`,
/// shared by the whole toolkit and the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

/// Serialized form of [`Matrix`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl TryFrom<MatrixJson> for Matrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let data: Vec<C64> = j.data.iter().map(|[re, im]| C64::new(*re, *im)).collect();
        Matrix::new(j.rows, j.cols, data)
    }
}

impl From<Matrix> for MatrixJson {
    fn from(m: Matrix) -> Self {
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl Matrix {
    /// Builds a matrix from row-major entries, rejecting size mismatches and
    /// non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {}x{} = {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Shape("matrix entries must be finite".into()));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Convenience constructor from real row slices.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Matrix::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    /// Column vector from complex entries.
    pub fn col_vec(entries: &[C64]) -> Self {
        Matrix {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    /// Computational basis column vector `|k⟩` in dimension `dim`.
    pub fn basis_vec(dim: usize, k: usize) -> Self {
        let mut v = Matrix::zeros(dim, 1);
        v[(k, 0)] = C64::new(1.0, 0.0);
        v
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

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// Stacks the given column vectors (each `rows x 1`) into a `rows x k` matrix.
    pub fn from_columns(cols: &[Matrix]) -> Result<Self> {
        let k = cols.len();
        if k == 0 {
            return Ok(Matrix::zeros(0, 0));
        }
        let n = cols[0].rows;
        for c in cols {
            if c.rows != n || c.cols != 1 {
                return Err(Error::Shape("from_columns expects column vectors of equal length".into()));
            }
        }
        Ok(Matrix::from_fn(n, k, |i, j| cols[j][(i, 0)]))
    }

    pub fn column(&self, j: usize) -> Matrix {
        Matrix::from_fn(self.rows, 1, |i, _| self[(i, j)])
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: C64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Matrix {
        self.scale(C64::new(s, 0.0))
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product, left factor varying slowest.
    pub fn tensor(&self, other: &Matrix) -> Matrix {
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        Matrix::from_fn(r1 * r2, c1 * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }

    /// Largest entrywise modulus, the `‖·‖_max` used by every tolerance check.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖self − other‖_max`.
    pub fn max_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Hilbert–Schmidt inner product `Tr(self† other)`.
    pub fn hs_inner(&self, other: &Matrix) -> C64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Hilbert–Schmidt (Frobenius) norm.
    pub fn hs_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Euclidean inner product `⟨self, other⟩ = self† · other` for column vectors.
    pub fn vec_inner(&self, other: &Matrix) -> C64 {
        assert_eq!(self.cols, 1);
        assert_eq!(other.cols, 1);
        self.hs_inner(other)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let gram = self.adjoint().matmul(self);
        gram.max_diff(&Matrix::identity(self.rows)) <= tol
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitize(&self) -> Matrix {
        self.add(&self.adjoint()).scale_re(0.5)
    }

    /// Flattens a square matrix into a row-major column vector of length `rows²`,
    /// so that `vec(A X B) = (A ⊗ Bᵀ) vec(X)`.
    pub fn vectorize(&self) -> Matrix {
        Matrix {
            rows: self.rows * self.cols,
            cols: 1,
            data: self.data.clone(),
        }
    }

    /// Inverse of [`Matrix::vectorize`] for square targets.
    pub fn unvectorize(v: &Matrix, n: usize) -> Matrix {
        assert_eq!(v.cols, 1);
        assert_eq!(v.rows, n * n);
        Matrix {
            rows: n,
            cols: n,
            data: v.data.clone(),
        }
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.matmul(other).sub(&other.matmul(self))
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Outer product `u v†` of two column vectors.
pub fn outer(u: &Matrix, v: &Matrix) -> Matrix {
    assert_eq!(u.cols(), 1);
    assert_eq!(v.cols(), 1);
    Matrix::from_fn(u.rows(), v.rows(), |i, j| u[(i, 0)] * v[(j, 0)].conj())
}
