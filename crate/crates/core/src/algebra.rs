//! Finite-dimensional matrix *-algebras: generation from operators, commutant
//! and double commutant, center and factor test, kinematic independence,
//! joint-state extension feasibility, and the nonselective no-information
//! operation `T_E`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, MatrixJson};
use crate::numerics::{eig_hermitian, psd_sqrt, Tolerance};
use crate::states::DensityMatrix;
use crate::subspaces::{from_spanning, meet, Subspace};

/// A *-closed linear span of matrices acting on ℂ^d, stored as a basis
/// orthonormal under the Hilbert–Schmidt inner product `Tr(A†B)`.
#[derive(Debug, Clone)]
pub struct MatrixAlgebra {
    ambient_dim: usize,
    basis: Vec<Matrix>,
    contains_identity: bool,
}

/// Input form of an algebra: generators plus the unitality flag.
///
/// Wire format: `{"ambient_dim": d, "generators": [MatrixJSON, ...], "with_identity": bool}`
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub ambient_dim: usize,
    pub generators: Vec<MatrixJson>,
    pub with_identity: bool,
}

/// A state on the ambient space, used as a functional `A ↦ Tr(ρA)` restricted
/// to an algebra.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraState {
    pub rho: DensityMatrix,
}

impl AlgebraState {
    pub fn expectation(&self, a: &Matrix) -> C64 {
        self.rho.mat().matmul(a).trace()
    }

    /// A state is faithful when `ω(A†A) = 0` forces `A = 0`; at finite
    /// dimension that is full rank of the density matrix.
    pub fn is_faithful(&self, tol: Tolerance) -> Result<bool> {
        let eig = eig_hermitian(self.rho.mat(), tol)?;
        let max = eig.eigenvalues.last().copied().unwrap_or(0.0);
        let min = eig.eigenvalues.first().copied().unwrap_or(0.0);
        Ok(min > tol.rank_tol * max)
    }
}

impl MatrixAlgebra {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn contains_identity(&self) -> bool {
        self.contains_identity
    }

    /// Hilbert–Schmidt projector onto the span, an operator on ℂ^{d²}.
    /// Gauge-free: two algebras are equal iff their span projectors are.
    pub fn span_projector(&self) -> Matrix {
        let d2 = self.ambient_dim * self.ambient_dim;
        let mut p = Matrix::zeros(d2, d2);
        for b in &self.basis {
            let v = b.vectorize();
            p = p.add(&crate::matrix::outer(&v, &v));
        }
        p
    }

    /// Span equality at tolerance `10·eq_tol` on the Hilbert–Schmidt
    /// projectors.
    pub fn equals_span(&self, other: &MatrixAlgebra, tol: Tolerance) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.span_projector().max_diff(&other.span_projector()) <= 10.0 * tol.eq_tol
    }

    /// The span viewed as a subspace of ℂ^{d²} under vectorization.
    pub fn span_subspace(&self, tol: Tolerance) -> Result<Subspace> {
        let d2 = self.ambient_dim * self.ambient_dim;
        let vecs: Vec<Matrix> = self.basis.iter().map(|b| b.vectorize()).collect();
        from_spanning(d2, &vecs, tol)
    }

    /// Distance of a matrix from the span.
    pub fn span_distance(&self, m: &Matrix) -> f64 {
        let mut res = m.clone();
        for b in &self.basis {
            let c = b.hs_inner(&res);
            res = res.sub(&b.scale(c));
        }
        res.hs_norm()
    }
}

fn hs_add_to_basis(basis: &mut Vec<Matrix>, candidate: &Matrix, rank_tol: f64) -> bool {
    let scale = candidate.hs_norm();
    if scale <= rank_tol {
        return false;
    }
    let mut res = candidate.clone();
    for _ in 0..2 {
        for b in basis.iter() {
            let c = b.hs_inner(&res);
            res = res.sub(&b.scale(c));
        }
    }
    let norm = res.hs_norm();
    if norm > rank_tol * scale.max(1.0) {
        basis.push(res.scale_re(1.0 / norm));
        true
    } else {
        false
    }
}

/// Generates the smallest *-closed linear span containing the generators
/// (and the identity when requested): the fixpoint of span ∪ adjoints ∪
/// pairwise products. The basis is built by Gram–Schmidt in insertion order,
/// so the result is deterministic.
pub fn generate(generators: &[Matrix], with_identity: bool, tol: Tolerance) -> Result<MatrixAlgebra> {
    let d = match generators.first() {
        Some(g) => g.rows(),
        None => {
            return Err(Error::Invalid(
                "generator list is empty; pass the identity explicitly for the scalar algebra"
                    .into(),
            ))
        }
    };
    for g in generators {
        if g.rows() != d || g.cols() != d {
            return Err(Error::DimensionMismatch(
                "generators must be square matrices of equal dimension".into(),
            ));
        }
    }

    let mut basis: Vec<Matrix> = Vec::new();
    if with_identity {
        hs_add_to_basis(&mut basis, &Matrix::identity(d), tol.rank_tol);
    }
    for g in generators {
        hs_add_to_basis(&mut basis, g, tol.rank_tol);
    }

    loop {
        let len = basis.len();
        let snapshot = basis.clone();
        for b in &snapshot {
            hs_add_to_basis(&mut basis, &b.adjoint(), tol.rank_tol);
        }
        for a in &snapshot {
            for b in &snapshot {
                hs_add_to_basis(&mut basis, &a.matmul(b), tol.rank_tol);
            }
        }
        if basis.len() == len {
            break;
        }
        debug_assert!(basis.len() <= d * d);
    }

    let alg = MatrixAlgebra {
        ambient_dim: d,
        contains_identity: {
            let mut probe = basis.clone();
            !hs_add_to_basis(&mut probe, &Matrix::identity(d), tol.rank_tol)
        },
        basis,
    };
    debug_assert!(closure_defect(&alg) <= 1e-9);
    Ok(alg)
}

/// Builds an algebra from a parsed [`AlgebraSpec`].
pub fn from_spec(spec: &AlgebraSpec, tol: Tolerance) -> Result<MatrixAlgebra> {
    let generators: Vec<Matrix> = spec
        .generators
        .iter()
        .cloned()
        .map(Matrix::try_from)
        .collect::<Result<_>>()?;
    for g in &generators {
        if g.rows() != spec.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "generator is {}x{} but ambient_dim is {}",
                g.rows(),
                g.cols(),
                spec.ambient_dim
            )));
        }
    }
    if generators.is_empty() {
        if !spec.with_identity {
            return Err(Error::Invalid(
                "an algebra needs generators or with_identity".into(),
            ));
        }
        return generate(&[Matrix::identity(spec.ambient_dim)], true, tol);
    }
    generate(&generators, spec.with_identity, tol)
}

/// Worst distance of any basis product or adjoint from the span; zero for a
/// genuinely closed algebra.
pub fn closure_defect(alg: &MatrixAlgebra) -> f64 {
    let mut worst = 0.0_f64;
    for a in &alg.basis {
        worst = worst.max(alg.span_distance(&a.adjoint()));
        for b in &alg.basis {
            worst = worst.max(alg.span_distance(&a.matmul(b)));
        }
    }
    worst
}

/// Commutant `A′ = {X : [X, a] = 0 for all a ∈ A}`, computed as the joint
/// null space of the commutator maps of the basis elements. The result is
/// automatically *-closed and unital.
pub fn commutant(alg: &MatrixAlgebra, tol: Tolerance) -> Result<MatrixAlgebra> {
    let d = alg.ambient_dim;
    let d2 = d * d;
    // vec([X, b]) = (I⊗bᵀ − b⊗I) vec(X) under row-major vectorization
    let id = Matrix::identity(d);
    let mut gram = Matrix::zeros(d2, d2);
    for b in &alg.basis {
        let k = id.tensor(&b.transpose()).sub(&b.tensor(&id));
        gram = gram.add(&k.adjoint().matmul(&k));
    }
    let eig = eig_hermitian(&gram, tol)?;
    let lmax = eig.eigenvalues.last().copied().unwrap_or(0.0).max(1.0);
    let cut = tol.rank_tol * lmax;
    let mut basis: Vec<Matrix> = Vec::new();
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l <= cut {
            let x = Matrix::unvectorize(&eig.vectors.column(i), d);
            hs_add_to_basis(&mut basis, &x, tol.rank_tol);
        }
    }
    let out = MatrixAlgebra {
        ambient_dim: d,
        contains_identity: true,
        basis,
    };
    debug_assert!(closure_defect(&out) <= 1e-8);
    Ok(out)
}

/// Dimensions along the commutant tower, with the two theorem-level checks:
/// `A″ = A` for unital algebras and `A‴ = A′` always.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DoubleCommutantReport {
    pub dim: usize,
    pub dim_commutant: usize,
    pub dim_bicommutant: usize,
    /// `A″ = A` as spans. True whenever the algebra contains the identity;
    /// reported (not errored) otherwise, where `A″` is strictly larger.
    pub equals: bool,
    /// `A‴ = A′` as spans; holds unconditionally.
    pub tricommutant_is_commutant: bool,
}

pub fn double_commutant_audit(alg: &MatrixAlgebra, tol: Tolerance) -> Result<DoubleCommutantReport> {
    let c1 = commutant(alg, tol)?;
    let c2 = commutant(&c1, tol)?;
    let c3 = commutant(&c2, tol)?;
    Ok(DoubleCommutantReport {
        dim: alg.dim(),
        dim_commutant: c1.dim(),
        dim_bicommutant: c2.dim(),
        equals: alg.equals_span(&c2, tol),
        tricommutant_is_commutant: c1.equals_span(&c3, tol),
    })
}

/// Center `A ∩ A′` (as the intersection of Hilbert–Schmidt spans) and the
/// factor flag: a factor has trivial center, scalars only.
pub fn center_factor(alg: &MatrixAlgebra, tol: Tolerance) -> Result<(MatrixAlgebra, bool)> {
    if !alg.contains_identity {
        return Err(Error::NotUnital);
    }
    let c1 = commutant(alg, tol)?;
    let s1 = alg.span_subspace(tol)?;
    let s2 = c1.span_subspace(tol)?;
    let inter = meet(&s1, &s2, tol)?;
    let d = alg.ambient_dim;
    let mut basis = Vec::new();
    for j in 0..inter.dim() {
        let m = Matrix::unvectorize(&inter.frame().column(j), d);
        hs_add_to_basis(&mut basis, &m, tol.rank_tol);
    }
    let center = MatrixAlgebra {
        ambient_dim: d,
        contains_identity: true,
        basis,
    };
    let is_factor = center.dim() == 1;
    Ok((center, is_factor))
}

/// Kinematic independence: every element of one algebra commutes with every
/// element of the other. Returns the flag and the worst commutator norm.
pub fn kinematic_independence(
    a: &MatrixAlgebra,
    b: &MatrixAlgebra,
    tol: Tolerance,
) -> Result<(bool, f64)> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::DimensionMismatch(
            "algebras live on different ambient spaces".into(),
        ));
    }
    let mut worst = 0.0_f64;
    for x in &a.basis {
        for y in &b.basis {
            worst = worst.max(x.commutator(y).max_abs());
        }
    }
    Ok((worst <= 10.0 * tol.eq_tol, worst))
}

/// The nonselective measurement operation
/// `T_E(A) = E^{1/2} A E^{1/2} + (I−E)^{1/2} A (I−E)^{1/2}`
/// for an effect `0 ⪯ E ⪯ I`. Satisfies `T_E(I) = I`.
pub fn cbh_te(e: &Matrix, a: &Matrix, tol: Tolerance) -> Result<Matrix> {
    if !e.is_square() || e.rows() != a.rows() || !a.is_square() {
        return Err(Error::DimensionMismatch(
            "effect and operand must be square of equal dimension".into(),
        ));
    }
    let eig = eig_hermitian(e, tol)?;
    if let Some(&l) = eig
        .eigenvalues
        .iter()
        .find(|&&l| l < -tol.eq_tol || l > 1.0 + tol.eq_tol)
    {
        return Err(Error::NotAnEffect { eigenvalue: l });
    }
    let sq_e = eig.apply(|l| C64::new(l.max(0.0).sqrt(), 0.0));
    let one_minus = Matrix::identity(e.rows()).sub(e);
    let sq_rest = psd_sqrt(&one_minus, tol)?;
    Ok(sq_e
        .matmul(a)
        .matmul(&sq_e)
        .add(&sq_rest.matmul(a).matmul(&sq_rest)))
}

/// Feasibility report of the joint-state search. A residual above threshold
/// after `max_iters` means "infeasible within budget", not a proof of
/// infeasibility — except when the marginal constraints were linearly
/// contradictory, which is detected exactly.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JointExtensionReport {
    pub state: Option<DensityMatrix>,
    /// Worst violation of any marginal constraint by the returned iterate.
    pub residual: f64,
    pub iterations: usize,
    /// The affine constraint system itself was contradictory.
    pub affine_inconsistent: bool,
    pub feasible: bool,
}

/// Searches for a density matrix on the common ambient space whose
/// restrictions to the two algebras match the given states, by Dykstra-
/// corrected alternating projections between the affine constraint set and
/// the positive-trace-one set (eigenvalue clipping plus renormalization).
pub fn joint_state_extension(
    a: &MatrixAlgebra,
    b: &MatrixAlgebra,
    rho1: &AlgebraState,
    rho2: &AlgebraState,
    max_iters: usize,
    tol: Tolerance,
) -> Result<JointExtensionReport> {
    let d = a.ambient_dim;
    if b.ambient_dim != d || rho1.rho.dim() != d || rho2.rho.dim() != d {
        return Err(Error::DimensionMismatch(
            "algebras and states must share one ambient space".into(),
        ));
    }

    // Hermitian constraint matrices with real targets; each basis element
    // splits into a Hermitian and an anti-Hermitian part.
    let mut raw: Vec<(Matrix, f64)> = vec![(Matrix::identity(d), 1.0)];
    for (alg, st) in [(a, rho1), (b, rho2)] {
        for m in alg.basis() {
            let target = st.expectation(m);
            let herm = m.hermitize();
            if herm.hs_norm() > 1e-13 {
                raw.push((herm, target.re));
            }
            let anti = m.sub(&m.adjoint()).scale(C64::new(0.0, -0.5));
            if anti.hs_norm() > 1e-13 {
                raw.push((anti, target.im));
            }
        }
    }

    // Orthonormalize constraints under the real Hilbert–Schmidt pairing,
    // carrying targets along; a dependent row whose implied target mismatches
    // exposes a contradiction exactly.
    let re_inner = |x: &Matrix, y: &Matrix| -> f64 { x.hs_inner(y).re };
    let mut ortho: Vec<(Matrix, f64)> = Vec::new();
    let mut affine_inconsistent = false;
    for (h, t) in &raw {
        let mut m = h.clone();
        let mut target = *t;
        for (u, ut) in &ortho {
            let c = re_inner(u, &m);
            m = m.sub(&u.scale_re(c));
            target -= c * ut;
        }
        let norm = m.hs_norm();
        if norm > 1e-10 {
            ortho.push((m.scale_re(1.0 / norm), target / norm));
        } else if target.abs() > 1e-8 {
            affine_inconsistent = true;
        }
    }

    let project_affine = |x: &Matrix| -> Matrix {
        let mut y = x.clone();
        for (u, t) in &ortho {
            let c = re_inner(u, &y);
            y = y.add(&u.scale_re(t - c));
        }
        y
    };
    let project_psd = |x: &Matrix| -> Matrix {
        let eig = eig_hermitian(&x.hermitize(), tol).expect("Hermitian iterate");
        let clipped = eig.apply(|l| C64::new(l.max(0.0), 0.0));
        let tr = clipped.trace().re;
        if tr <= tol.rank_tol {
            Matrix::identity(x.rows()).scale_re(1.0 / x.rows() as f64)
        } else {
            clipped.scale_re(1.0 / tr)
        }
    };
    let residual_of = |x: &Matrix| -> f64 {
        raw.iter()
            .map(|(h, t)| (x.matmul(h).trace().re - t).abs())
            .fold(0.0, f64::max)
    };

    let mut x = Matrix::identity(d).scale_re(1.0 / d as f64);
    let mut p = Matrix::zeros(d, d);
    let mut q = Matrix::zeros(d, d);
    let mut iterations = 0;
    let mut residual = residual_of(&x);

    if !affine_inconsistent {
        for it in 0..max_iters {
            let y = project_affine(&x.add(&p));
            p = x.add(&p).sub(&y);
            let next = project_psd(&y.add(&q));
            q = y.add(&q).sub(&next);
            x = next;
            iterations = it + 1;
            residual = residual_of(&x);
            if residual <= 1e-9 {
                break;
            }
        }
    }

    let feasible = !affine_inconsistent && residual <= 1e-7;
    let state = if feasible {
        Some(DensityMatrix::new(x, tol)?)
    } else {
        None
    };
    Ok(JointExtensionReport {
        state,
        residual,
        iterations,
        affine_inconsistent,
        feasible,
    })
}

/// Generators embedding `M_2` as the first tensor factor of `M_4`.
pub fn qubit_factor_left() -> Vec<Matrix> {
    let id = Matrix::identity(2);
    [crate::fixtures::pauli_x(), crate::fixtures::pauli_z()]
        .iter()
        .map(|p| p.tensor(&id))
        .collect()
}

/// Generators embedding `M_2` as the second tensor factor of `M_4`.
pub fn qubit_factor_right() -> Vec<Matrix> {
    let id = Matrix::identity(2);
    [crate::fixtures::pauli_x(), crate::fixtures::pauli_z()]
        .iter()
        .map(|p| id.tensor(p))
        .collect()
}
