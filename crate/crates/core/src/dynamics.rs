//! Hamiltonian unitary flow with group-law checks and the ancilla-based POVM
//! construction: measuring a projective question on an ancilla after a joint
//! unitary is equivalent to a generalized measurement on the system alone.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, MatrixJson};
use crate::numerics::{eig_hermitian, partial_trace, Tolerance, TraceSide};
use crate::states::DensityMatrix;

/// A self-adjoint generator of time evolution.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct Hamiltonian {
    mat: Matrix,
}

impl TryFrom<MatrixJson> for Hamiltonian {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        Hamiltonian::new(j.try_into()?, Tolerance::default())
    }
}

impl From<Hamiltonian> for MatrixJson {
    fn from(h: Hamiltonian) -> Self {
        h.mat.into()
    }
}

impl Hamiltonian {
    pub fn new(mat: Matrix, tol: Tolerance) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::NotSquare {
                rows: mat.rows(),
                cols: mat.cols(),
            });
        }
        let dev = mat.max_diff(&mat.adjoint());
        if dev > tol.eq_tol {
            return Err(Error::NotHermitian {
                deviation: dev,
                tol: tol.eq_tol,
            });
        }
        Ok(Hamiltonian { mat })
    }

    pub fn mat(&self) -> &Matrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }
}

/// A positive operator-valued measure: positive effects summing to identity.
/// Unlike projective resolutions the effects need not be mutually orthogonal.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Povm {
    effects: Vec<Matrix>,
}

impl Povm {
    pub fn new(effects: Vec<Matrix>, tol: Tolerance) -> Result<Self> {
        if effects.is_empty() {
            return Err(Error::Invalid("POVM needs at least one effect".into()));
        }
        let d = effects[0].rows();
        let mut sum = Matrix::zeros(d, d);
        for e in &effects {
            if e.rows() != d || e.cols() != d {
                return Err(Error::DimensionMismatch(
                    "POVM effects have mixed dimensions".into(),
                ));
            }
            let dev = e.max_diff(&e.adjoint());
            if dev > tol.eq_tol {
                return Err(Error::NotHermitian {
                    deviation: dev,
                    tol: tol.eq_tol,
                });
            }
            let eig = eig_hermitian(e, tol)?;
            if let Some(&l) = eig.eigenvalues.iter().find(|&&l| l < -10.0 * tol.eq_tol) {
                return Err(Error::NotAnEffect { eigenvalue: l });
            }
            sum = sum.add(e);
        }
        let dev = sum.max_diff(&Matrix::identity(d));
        if dev > 10.0 * tol.eq_tol {
            return Err(Error::Invalid(format!(
                "effects do not resolve the identity: ‖ΣE − I‖_max = {dev:.3e}"
            )));
        }
        Ok(Povm { effects })
    }

    pub fn effects(&self) -> &[Matrix] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.effects[0].rows()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }
}

/// Unitary flow `U(t) = exp(−itH)` generated by a Hamiltonian.
pub fn evolve(h: &Hamiltonian, t: f64, tol: Tolerance) -> Result<Matrix> {
    let eig = eig_hermitian(h.mat(), tol)?;
    Ok(eig.apply(|l| (C64::new(0.0, -t * l)).exp()))
}

/// Largest deviation `|⟨Ux, Uy⟩ − ⟨x, y⟩|` over the sample pairs: the
/// inner-product preservation a symmetry transformation must satisfy.
pub fn wigner_check(u: &Matrix, pairs: &[(Matrix, Matrix)]) -> f64 {
    pairs
        .iter()
        .map(|(x, y)| {
            let before = x.vec_inner(y);
            let after = u.matmul(x).vec_inner(&u.matmul(y));
            (after - before).norm()
        })
        .fold(0.0, f64::max)
}

/// Builds the POVM induced on the system by coupling it to an ancilla,
/// evolving jointly, and asking a projective question on the ancilla:
///
/// `E_b = Tr_P((I ⊗ ρ_P) · U · (I ⊗ P_b) · U†)`
///
/// Tensor order is fixed as system ⊗ ancilla; the ancilla projectors are
/// supplied on the ancilla factor alone and lifted internally.
pub fn ancilla_povm(
    u: &Matrix,
    rho_p: &DensityMatrix,
    projectors: &[Matrix],
    tol: Tolerance,
) -> Result<Povm> {
    let dp = rho_p.dim();
    let n = u.rows();
    if !u.is_square() || !n.is_multiple_of(dp) || n / dp < 1 {
        return Err(Error::DimensionMismatch(format!(
            "unitary is {}x{}, not compatible with ancilla dimension {dp}",
            u.rows(),
            u.cols()
        )));
    }
    let ds = n / dp;
    let u_dev = u.adjoint().matmul(u).max_diff(&Matrix::identity(n));
    if u_dev > 10.0 * tol.eq_tol {
        return Err(Error::NotUnitary { deviation: u_dev });
    }

    let mut sum = Matrix::zeros(dp, dp);
    for p in projectors {
        if p.rows() != dp || p.cols() != dp {
            return Err(Error::NotAResolution(format!(
                "projector is {}x{}, ancilla dimension is {dp}",
                p.rows(),
                p.cols()
            )));
        }
        if p.max_diff(&p.adjoint()) > tol.eq_tol {
            return Err(Error::NotAResolution("projector not Hermitian".into()));
        }
        if p.matmul(p).max_diff(p) > 10.0 * tol.eq_tol {
            return Err(Error::NotAResolution("projector not idempotent".into()));
        }
        sum = sum.add(p);
    }
    if sum.max_diff(&Matrix::identity(dp)) > 10.0 * tol.eq_tol {
        return Err(Error::NotAResolution(
            "projectors do not sum to the identity".into(),
        ));
    }

    let i_s = Matrix::identity(ds);
    let lifted_state = i_s.tensor(rho_p.mat());
    let u_dag = u.adjoint();
    let effects: Vec<Matrix> = projectors
        .iter()
        .map(|p| {
            let heisenberg = u.matmul(&i_s.tensor(p)).matmul(&u_dag);
            partial_trace(&lifted_state.matmul(&heisenberg), TraceSide::Second, ds, dp)
        })
        .collect::<Result<_>>()?;

    Povm::new(effects, tol)
}

/// Outcome probability from the joint picture:
/// `p(b) = Tr(U(ρ_S ⊗ ρ_P)U† (I ⊗ P_b))`.
pub fn joint_probability(
    u: &Matrix,
    rho_s: &DensityMatrix,
    rho_p: &DensityMatrix,
    p_b: &Matrix,
) -> f64 {
    let ds = rho_s.dim();
    let joint = rho_s.mat().tensor(rho_p.mat());
    let evolved = u.matmul(&joint).matmul(&u.adjoint());
    evolved
        .matmul(&Matrix::identity(ds).tensor(p_b))
        .trace()
        .re
}

/// Outcome probability from the reduced picture: `p(b) = Tr_S(ρ_S E_b)`.
pub fn reduced_probability(rho_s: &DensityMatrix, effect: &Matrix) -> f64 {
    rho_s.mat().matmul(effect).trace().re
}
