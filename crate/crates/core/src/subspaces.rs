//! Closed subspaces of a finite-dimensional inner-product space, stored as
//! orthonormal frames: meet, join, orthocomplement, relevance, and generation
//! of finite sublattices for cross-checks against the abstract lattice module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::FiniteLattice;
use crate::matrix::{Matrix, MatrixJson};
use crate::numerics::{eig_hermitian, Tolerance};

/// Scalar field of the ambient space. Quaternions are deliberately out of
/// scope; real and complex cover every check in the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarField {
    Real,
    Complex,
}

/// A closed subspace, represented by an `ambient_dim × k` frame with
/// orthonormal columns (`k = 0` encodes the zero subspace).
///
/// Equality of subspaces is projector equality; frames are gauge-dependent.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "SubspaceJson", into = "SubspaceJson")]
pub struct Subspace {
    ambient_dim: usize,
    frame: Matrix,
}

/// Wire format: the frame's matrix JSON plus the ambient dimension.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct SubspaceJson {
    ambient_dim: usize,
    #[serde(flatten)]
    frame: MatrixJson,
}

impl TryFrom<SubspaceJson> for Subspace {
    type Error = Error;

    fn try_from(j: SubspaceJson) -> Result<Self> {
        let frame: Matrix = j.frame.try_into()?;
        if frame.rows() != j.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "frame has {} rows but ambient_dim is {}",
                frame.rows(),
                j.ambient_dim
            )));
        }
        let k = frame.cols();
        let gram = frame.adjoint().matmul(&frame);
        if gram.max_diff(&Matrix::identity(k)) > 1e-7 {
            return Err(Error::Invalid(
                "subspace frame columns are not orthonormal".into(),
            ));
        }
        Ok(Subspace {
            ambient_dim: j.ambient_dim,
            frame,
        })
    }
}

impl From<Subspace> for SubspaceJson {
    fn from(s: Subspace) -> Self {
        SubspaceJson {
            ambient_dim: s.ambient_dim,
            frame: s.frame.into(),
        }
    }
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            frame: Matrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            frame: Matrix::identity(ambient_dim),
        }
    }

    /// Line spanned by a single vector (must be nonzero).
    pub fn line(v: &Matrix, tol: Tolerance) -> Result<Self> {
        from_spanning(v.rows(), std::slice::from_ref(v), tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.frame.cols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn frame(&self) -> &Matrix {
        &self.frame
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> Matrix {
        if self.is_zero() {
            return Matrix::zeros(self.ambient_dim, self.ambient_dim);
        }
        self.frame.matmul(&self.frame.adjoint())
    }

    fn check_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions differ: {} vs {}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }

    /// Projector-level equality within `10·eq_tol`.
    pub fn approx_eq(&self, other: &Subspace, tol: Tolerance) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.projector().max_diff(&other.projector()) <= 10.0 * tol.eq_tol
    }
}

/// Builds the subspace spanned by the given vectors. The rank decision is a
/// pivoted Gram–Schmidt: a direction survives while its residual against the
/// accepted frame exceeds `rank_tol` times the largest input norm. Pivoting
/// keeps the decision stable at the threshold (residual noise is at machine
/// epsilon, unlike a Gram-matrix route, which squares singular values).
pub fn from_spanning(ambient_dim: usize, vectors: &[Matrix], tol: Tolerance) -> Result<Subspace> {
    for v in vectors {
        if v.rows() != ambient_dim || v.cols() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "expected {ambient_dim}x1 vectors, got {}x{}",
                v.rows(),
                v.cols()
            )));
        }
    }
    let scale = vectors.iter().map(Matrix::hs_norm).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(Subspace::zero(ambient_dim));
    }
    let cut = tol.rank_tol * scale;
    let mut residuals: Vec<Matrix> = vectors.to_vec();
    let mut frame_cols: Vec<Matrix> = Vec::new();
    loop {
        // largest remaining residual, first index on ties
        let (best, norm) = residuals
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.hs_norm()))
            .fold((usize::MAX, 0.0), |acc, (i, n)| {
                if n > acc.1 {
                    (i, n)
                } else {
                    acc
                }
            });
        if best == usize::MAX || norm <= cut {
            break;
        }
        let mut u = residuals[best].scale_re(1.0 / norm);
        // reorthogonalize once against the accepted frame
        for col in &frame_cols {
            let c = col.vec_inner(&u);
            u = u.sub(&col.scale(c));
        }
        let n2 = u.hs_norm();
        let u = u.scale_re(1.0 / n2);
        for r in residuals.iter_mut() {
            let c = u.vec_inner(r);
            *r = r.sub(&u.scale(c));
        }
        frame_cols.push(u);
    }
    Ok(Subspace {
        ambient_dim,
        frame: Matrix::from_columns(&frame_cols)?,
    })
}

/// Intersection, computed as the spectral projector of `(P_x + P_y)/2` for
/// eigenvalue 1 within `rank_tol`. Avoids iterative alternating projections.
pub fn meet(x: &Subspace, y: &Subspace, tol: Tolerance) -> Result<Subspace> {
    x.check_same_ambient(y)?;
    let avg = x.projector().add(&y.projector()).scale_re(0.5);
    let eig = eig_hermitian(&avg, tol)?;
    let cols: Vec<Matrix> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l >= 1.0 - tol.rank_tol)
        .map(|(i, _)| eig.vectors.column(i))
        .collect();
    Ok(Subspace {
        ambient_dim: x.ambient_dim,
        frame: Matrix::from_columns(&cols)?,
    })
}

/// Span of the combined frames.
pub fn join(x: &Subspace, y: &Subspace, tol: Tolerance) -> Result<Subspace> {
    x.check_same_ambient(y)?;
    let mut vs = Vec::new();
    for j in 0..x.dim() {
        vs.push(x.frame.column(j));
    }
    for j in 0..y.dim() {
        vs.push(y.frame.column(j));
    }
    from_spanning(x.ambient_dim, &vs, tol)
}

/// Orthogonal complement: eigenvectors of the projector at eigenvalue 0.
pub fn ortho(x: &Subspace, tol: Tolerance) -> Result<Subspace> {
    let eig = eig_hermitian(&x.projector(), tol)?;
    let cols: Vec<Matrix> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l <= tol.rank_tol)
        .map(|(i, _)| eig.vectors.column(i))
        .collect();
    Ok(Subspace {
        ambient_dim: x.ambient_dim,
        frame: Matrix::from_columns(&cols)?,
    })
}

/// Inclusion `x ≤ y`, decided by `P_y` acting as the identity on `x`'s frame.
pub fn leq(x: &Subspace, y: &Subspace, tol: Tolerance) -> Result<bool> {
    x.check_same_ambient(y)?;
    if x.is_zero() {
        return Ok(true);
    }
    let py = y.projector();
    let diff = py.matmul(x.frame()).max_diff(x.frame());
    Ok(diff <= 10.0 * tol.eq_tol)
}

/// Relevance of question `q2` with respect to `q1`: true iff `q2 ∧ q1⊥ = 0`.
/// A nonzero intersection with `q1⊥` is what renders `q1` irrelevant.
pub fn is_relevant(q2: &Subspace, q1: &Subspace, tol: Tolerance) -> Result<bool> {
    q2.check_same_ambient(q1)?;
    let q1_perp = ortho(q1, tol)?;
    Ok(meet(q2, &q1_perp, tol)?.is_zero())
}

/// Closure of a family of subspaces under meet, join, and orthocomplement,
/// returned as an abstract [`FiniteLattice`] mirroring inclusion plus the
/// dictionary of subspaces backing each element.
///
/// Generic families generate unbounded closures; the budget turns runaway
/// growth into [`Error::ClosureBudgetExceeded`].
pub fn generate_lattice(
    family: &[Subspace],
    budget: usize,
    tol: Tolerance,
) -> Result<(FiniteLattice, Vec<Subspace>)> {
    if family.is_empty() {
        return Err(Error::Invalid("family must not be empty".into()));
    }
    let d = family[0].ambient_dim;
    for s in family {
        if s.ambient_dim != d {
            return Err(Error::DimensionMismatch(
                "family members have different ambient dimensions".into(),
            ));
        }
    }

    let mut set: Vec<Subspace> = vec![Subspace::zero(d), Subspace::full(d)];
    let push = |set: &mut Vec<Subspace>, s: Subspace| -> Result<bool> {
        if set.iter().any(|t| t.approx_eq(&s, tol)) {
            return Ok(false);
        }
        set.push(s);
        if set.len() > budget {
            return Err(Error::ClosureBudgetExceeded { budget });
        }
        Ok(true)
    };
    for s in family {
        push(&mut set, s.clone())?;
    }

    loop {
        let len = set.len();
        let mut grew = false;
        for i in 0..len {
            let oi = ortho(&set[i], tol)?;
            grew |= push(&mut set, oi)?;
        }
        for i in 0..len {
            for j in (i + 1)..len {
                let m = meet(&set[i], &set[j], tol)?;
                grew |= push(&mut set, m)?;
                let jn = join(&set[i], &set[j], tol)?;
                grew |= push(&mut set, jn)?;
            }
        }
        if !grew && set.len() == len {
            break;
        }
    }

    let n = set.len();
    let labels: Vec<String> = set
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if s.is_zero() {
                "0".to_string()
            } else if s.dim() == d {
                "1".to_string()
            } else {
                format!("s{i}")
            }
        })
        .collect();
    let mut leq_mat = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            leq_mat[i][j] = leq(&set[i], &set[j], tol)?;
        }
    }
    let mut perp = vec![0usize; n];
    for i in 0..n {
        let oi = ortho(&set[i], tol)?;
        perp[i] = set
            .iter()
            .position(|t| t.approx_eq(&oi, tol))
            .expect("closure contains orthocomplements");
    }
    let lat = FiniteLattice::from_leq(labels, leq_mat, Some(perp))?;
    Ok((lat, set))
}
