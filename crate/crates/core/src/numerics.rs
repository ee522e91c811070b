//! Deterministic dense linear algebra kernel shared by all modules:
//! Hermitian eigendecomposition, matrix functions, partial trace.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Tolerance policy shared across the toolkit.
///
/// `eq_tol` is the absolute entrywise tolerance for equality checks;
/// `rank_tol` is the relative singular-value threshold for rank decisions.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub eq_tol: f64,
    pub rank_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eq_tol: 1e-9,
            rank_tol: 1e-8,
        }
    }
}

impl Tolerance {
    pub fn new(eq_tol: f64, rank_tol: f64) -> Result<Self> {
        if eq_tol <= 0.0 || rank_tol <= 0.0 {
            return Err(Error::Invalid("tolerances must be strictly positive".into()));
        }
        Ok(Tolerance { eq_tol, rank_tol })
    }
}

/// Eigendecomposition of a Hermitian matrix: `M = V diag(λ) V†` with `λ`
/// ascending and `V` unitary.
#[derive(Debug, Clone)]
pub struct EigH {
    pub eigenvalues: Vec<f64>,
    pub vectors: Matrix,
}

impl EigH {
    /// Rebuilds `V f(diag) V†` for a scalar function of the spectrum.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> Matrix {
        let n = self.eigenvalues.len();
        let v = &self.vectors;
        let mut scaled = v.clone();
        for j in 0..n {
            let fj = f(self.eigenvalues[j]);
            for i in 0..n {
                scaled[(i, j)] = v[(i, j)] * fj;
            }
        }
        scaled.matmul(&v.adjoint())
    }

    /// Principal-branch complex power `M^z`; requires a strictly positive spectrum.
    pub fn complex_power(&self, z: C64) -> Result<Matrix> {
        let max = self.eigenvalues.iter().cloned().fold(0.0, f64::max);
        if let Some(&bad) = self.eigenvalues.iter().find(|&&l| l <= 0.0 || l <= f64::EPSILON * max) {
            return Err(Error::NotPositiveDefinite { eigenvalue: bad });
        }
        Ok(self.apply(|l| (z * l.ln()).exp()))
    }

    pub fn reconstruct(&self) -> Matrix {
        self.apply(|l| C64::new(l, 0.0))
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// The sweep order is fixed (row-major over index pairs), so the result is
/// reproducible bit-for-bit on a given platform. Intended for the desk scale
/// this toolkit targets (dimension ≲ 64).
pub fn eig_hermitian(m: &Matrix, tol: Tolerance) -> Result<EigH> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let dev = m.max_diff(&m.adjoint());
    if dev > tol.eq_tol {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol: tol.eq_tol,
        });
    }

    let n = m.rows();
    let mut a = m.hermitize();
    let mut v = Matrix::identity(n);
    let scale = a.max_abs().max(1.0);
    let stop = 1e-15 * scale;

    for _sweep in 0..64 {
        let mut largest = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                largest = largest.max(r);
                if r <= stop {
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // tan θ from t² − ((aqq−app)/r)·t − 1 = 0, smaller-magnitude root
                let b = (aqq - app) / (2.0 * r);
                let t = if b == 0.0 {
                    1.0
                } else {
                    -b.signum() / (b.abs() + (b * b + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                let cs = C64::new(c, 0.0);
                let s_ph = phase * s; // s·e^{iφ}
                let s_phc = phase.conj() * s; // s·e^{−iφ}

                // columns: col_p ← c·col_p + s e^{−iφ}·col_q ; col_q ← −s e^{iφ}·col_p + c·col_q
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = cs * akp + s_phc * akq;
                    a[(k, q)] = -s_ph * akp + cs * akq;
                }
                // rows: row_p ← c·row_p + s e^{iφ}·row_q ; row_q ← −s e^{−iφ}·row_p + c·row_q
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = cs * apk + s_ph * aqk;
                    a[(q, k)] = -s_phc * apk + cs * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = cs * vkp + s_phc * vkq;
                    v[(k, q)] = -s_ph * vkp + cs * vkq;
                }
            }
        }
        if largest <= stop {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .expect("finite eigenvalues")
            .then(i.cmp(&j))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(EigH {
        eigenvalues,
        vectors,
    })
}

/// Scalar function applied to a Hermitian matrix through its spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatFun {
    Exp,
    Log,
    /// `M^z` for a complex exponent, principal branch.
    Power(C64),
}

pub fn mat_fun(m: &Matrix, f: MatFun, tol: Tolerance) -> Result<Matrix> {
    let eig = eig_hermitian(m, tol)?;
    let max = eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let pd_floor = tol.rank_tol * max.max(0.0);
    let require_pd = |eig: &EigH| -> Result<()> {
        if let Some(&bad) = eig.eigenvalues.iter().find(|&&l| l <= pd_floor) {
            return Err(Error::NotPositiveDefinite { eigenvalue: bad });
        }
        Ok(())
    };
    match f {
        MatFun::Exp => Ok(eig.apply(|l| C64::new(l.exp(), 0.0))),
        MatFun::Log => {
            require_pd(&eig)?;
            Ok(eig.apply(|l| C64::new(l.ln(), 0.0)))
        }
        MatFun::Power(z) => {
            let is_int = z.im == 0.0 && z.re.fract() == 0.0;
            if is_int && z.re >= 0.0 {
                let k = z.re as i32;
                Ok(eig.apply(|l| C64::new(l.powi(k), 0.0)))
            } else {
                require_pd(&eig)?;
                Ok(eig.apply(|l| (z * l.ln()).exp()))
            }
        }
    }
}

/// Square root of a positive semidefinite matrix; eigenvalues below zero
/// (roundoff) are clamped.
pub fn psd_sqrt(m: &Matrix, tol: Tolerance) -> Result<Matrix> {
    let eig = eig_hermitian(m, tol)?;
    Ok(eig.apply(|l| C64::new(l.max(0.0).sqrt(), 0.0)))
}

/// Which tensor factor to trace out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceSide {
    /// Trace out the first factor, leaving a `dB × dB` matrix.
    First,
    /// Trace out the second factor, leaving a `dA × dA` matrix.
    Second,
}

/// Partial trace of a matrix on a `dA·dB`-dimensional product space,
/// with the first factor varying slowest (matching [`Matrix::tensor`]).
pub fn partial_trace(m: &Matrix, side: TraceSide, da: usize, db: usize) -> Result<Matrix> {
    let n = da * db;
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "partial trace expects a {n}x{n} matrix for factors {da}x{db}, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    match side {
        TraceSide::Second => Ok(Matrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        })),
        TraceSide::First => Ok(Matrix::from_fn(db, db, |k, l| {
            (0..da).map(|i| m[(i * db + k, i * db + l)]).sum()
        })),
    }
}
