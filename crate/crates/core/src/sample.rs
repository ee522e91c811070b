//! Seeded random generators for matrices, states, and frames.
//!
//! Everything here takes an explicit RNG; nothing reads wall-clock entropy.

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::matrix::Matrix;
use crate::numerics::{eig_hermitian, Tolerance};
use crate::subspaces::{ScalarField, Subspace};

pub fn random_complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| random_complex(rng))
}

pub fn random_real_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| C64::new(rng.gen_range(-1.0..1.0), 0.0))
}

pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> Matrix {
    random_matrix(rng, n, n).hermitize()
}

/// Random unitary from Gram–Schmidt on a random square matrix.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, n, n);
        if let Some(q) = gram_schmidt_full(&m) {
            return q;
        }
    }
}

/// Random unit column vector.
pub fn random_unit_vector(rng: &mut impl Rng, n: usize) -> Matrix {
    loop {
        let v = random_matrix(rng, n, 1);
        let norm = v.hs_norm();
        if norm > 1e-3 {
            return v.scale_re(1.0 / norm);
        }
    }
}

/// Random faithful density matrix with spectrum bounded away from zero
/// (each eigenvalue at least `floor / n`).
pub fn random_faithful_density(rng: &mut impl Rng, n: usize, floor: f64) -> Matrix {
    let mut weights: Vec<f64> = (0..n).map(|_| rng.gen_range(floor..1.0)).collect();
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let u = random_unitary(rng, n);
    let mut d = Matrix::zeros(n, n);
    for (i, w) in weights.iter().enumerate() {
        d[(i, i)] = C64::new(*w, 0.0);
    }
    u.matmul(&d).matmul(&u.adjoint())
}

/// Random density matrix (possibly near-singular).
pub fn random_density(rng: &mut impl Rng, n: usize) -> Matrix {
    let a = random_matrix(rng, n, n);
    let g = a.matmul(&a.adjoint());
    let tr = g.trace().re;
    g.scale_re(1.0 / tr)
}

/// Orthonormalizes the columns of a square matrix; `None` if rank-deficient.
fn gram_schmidt_full(m: &Matrix) -> Option<Matrix> {
    let n = m.rows();
    let mut cols: Vec<Matrix> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = m.column(j);
        for u in &cols {
            let c = u.vec_inner(&v);
            v = v.sub(&u.scale(c));
        }
        // re-orthogonalize once; plain MGS drifts for larger n
        for u in &cols {
            let c = u.vec_inner(&v);
            v = v.sub(&u.scale(c));
        }
        let norm = v.hs_norm();
        if norm < 1e-8 {
            return None;
        }
        cols.push(v.scale_re(1.0 / norm));
    }
    Matrix::from_columns(&cols).ok()
}

/// Rank-1 projectors onto the columns of a random unitary: a projective
/// resolution of identity with non-trivial geometry.
pub fn random_rank1_resolution(rng: &mut impl Rng, n: usize) -> Vec<Matrix> {
    let u = random_unitary(rng, n);
    (0..n)
        .map(|k| {
            let col = u.column(k);
            crate::matrix::outer(&col, &col)
        })
        .collect()
}

/// Random subspace of the given dimension over the chosen scalar field.
pub fn random_subspace(
    rng: &mut impl Rng,
    ambient_dim: usize,
    dim: usize,
    field: ScalarField,
    tol: Tolerance,
) -> Subspace {
    let vectors: Vec<Matrix> = (0..dim)
        .map(|_| match field {
            ScalarField::Complex => random_matrix(rng, ambient_dim, 1),
            ScalarField::Real => random_real_matrix(rng, ambient_dim, 1),
        })
        .collect();
    let s = crate::subspaces::from_spanning(ambient_dim, &vectors, tol).expect("consistent dims");
    debug_assert_eq!(s.dim(), dim, "random vectors should be in general position");
    s
}

/// Random subspace of dimension `dim` inside `outer`: mixes the outer frame's
/// columns by a random unitary and keeps the first `dim` of them.
pub fn random_subspace_within(
    rng: &mut impl Rng,
    outer: &Subspace,
    dim: usize,
    tol: Tolerance,
) -> Subspace {
    assert!(dim <= outer.dim());
    if outer.dim() == 0 {
        return Subspace::zero(outer.ambient_dim());
    }
    let u = random_unitary(rng, outer.dim());
    let mixed = outer.frame().matmul(&u);
    let vectors: Vec<Matrix> = (0..dim).map(|j| mixed.column(j)).collect();
    crate::subspaces::from_spanning(outer.ambient_dim(), &vectors, tol).expect("consistent dims")
}

/// Random projector of the given rank.
pub fn random_projector(rng: &mut impl Rng, n: usize, rank: usize) -> Matrix {
    let u = random_unitary(rng, n);
    let mut p = Matrix::zeros(n, n);
    for k in 0..rank {
        let col = u.column(k);
        p = p.add(&crate::matrix::outer(&col, &col));
    }
    p
}

/// Sanity helper for tests: spectrum of a Hermitian matrix.
pub fn spectrum(m: &Matrix, tol: Tolerance) -> Vec<f64> {
    eig_hermitian(m, tol).expect("Hermitian input").eigenvalues
}
