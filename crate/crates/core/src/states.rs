//! Density matrices, projectors, the Born rule, recovery of a state from a
//! frame function, and a non-contextuality audit.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{outer, Matrix, MatrixJson};
use crate::numerics::{eig_hermitian, Tolerance};
use crate::sample;

/// A density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct DensityMatrix {
    mat: Matrix,
}

impl TryFrom<MatrixJson> for DensityMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        DensityMatrix::new(j.try_into()?, Tolerance::default())
    }
}

impl From<DensityMatrix> for MatrixJson {
    fn from(d: DensityMatrix) -> Self {
        d.mat.into()
    }
}

impl DensityMatrix {
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
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol.eq_tol || tr.im.abs() > tol.eq_tol {
            return Err(Error::Invalid(format!(
                "density matrix trace is {:.12} + {:.3e}i, expected 1",
                tr.re, tr.im
            )));
        }
        let eig = eig_hermitian(&mat, tol)?;
        if let Some(&l) = eig.eigenvalues.iter().find(|&&l| l < -10.0 * tol.eq_tol) {
            return Err(Error::Invalid(format!(
                "density matrix has negative eigenvalue {l:.3e}"
            )));
        }
        Ok(DensityMatrix { mat })
    }

    /// Pure state `|ψ⟩⟨ψ|` from a unit vector.
    pub fn pure(psi: &Matrix, tol: Tolerance) -> Result<Self> {
        let norm = psi.hs_norm();
        if (norm - 1.0).abs() > tol.eq_tol {
            return Err(Error::Invalid(format!(
                "state vector norm is {norm:.12}, expected 1"
            )));
        }
        DensityMatrix::new(outer(psi, psi), tol)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityMatrix {
            mat: Matrix::identity(d).scale_re(1.0 / d as f64),
        }
    }

    pub fn mat(&self) -> &Matrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }
}

/// A yes-no question: Hermitian idempotent.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct Projector {
    mat: Matrix,
}

impl TryFrom<MatrixJson> for Projector {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        Projector::new(j.try_into()?, Tolerance::default())
    }
}

impl From<Projector> for MatrixJson {
    fn from(p: Projector) -> Self {
        p.mat.into()
    }
}

impl Projector {
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
        let idem = mat.matmul(&mat).max_diff(&mat);
        if idem > 10.0 * tol.eq_tol {
            return Err(Error::Invalid(format!(
                "not idempotent: ‖P² − P‖_max = {idem:.3e}"
            )));
        }
        Ok(Projector { mat })
    }

    /// Rank-1 projector onto a (not necessarily normalized) vector.
    pub fn onto_line(v: &Matrix, tol: Tolerance) -> Result<Self> {
        let norm = v.hs_norm();
        if norm <= tol.rank_tol {
            return Err(Error::Invalid("cannot project onto the zero vector".into()));
        }
        let u = v.scale_re(1.0 / norm);
        Projector::new(outer(&u, &u), tol)
    }

    pub fn mat(&self) -> &Matrix {
        &self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn rank(&self) -> usize {
        self.mat.trace().re.round() as usize
    }
}

/// One evaluation of a frame function: a rank-1 question and its assigned
/// probability.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FrameSample {
    pub projector: Projector,
    pub value: f64,
}

impl FrameSample {
    pub fn new(projector: Projector, value: f64, tol: Tolerance) -> Result<Self> {
        if !(-tol.eq_tol..=1.0 + tol.eq_tol).contains(&value) {
            return Err(Error::OutOfRange { value });
        }
        Ok(FrameSample { projector, value })
    }
}

/// Born rule: the probability of a yes answer to question `p` in state `rho`
/// is `Tr(ρP)`. Takes no frame argument: the value is defined by the
/// projector alone, independent of any completing frame.
pub fn born(rho: &DensityMatrix, p: &Projector, tol: Tolerance) -> Result<f64> {
    if rho.dim() != p.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dim {} vs projector dim {}",
            rho.dim(),
            p.dim()
        )));
    }
    let t = rho.mat().matmul(p.mat()).trace();
    let value = t.re;
    if !(-tol.eq_tol..=1.0 + tol.eq_tol).contains(&value) || t.im.abs() > tol.eq_tol {
        return Err(Error::OutOfRange { value });
    }
    Ok(value.clamp(0.0, 1.0))
}

/// A resolution of the identity into `d` random rank-1 projectors,
/// deterministic for a given seed.
pub fn random_frame(d: usize, seed: u64) -> Result<Vec<Projector>> {
    if d < 2 {
        return Err(Error::Invalid("frames need dimension at least 2".into()));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let tol = Tolerance::default();
    sample::random_rank1_resolution(&mut rng, d)
        .into_iter()
        .map(|m| Projector::new(m, tol))
        .collect()
}

/// Result of recovering a state from frame samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GleasonRecovery {
    pub rho: DensityMatrix,
    /// `max_k |Tr(ρP_k) − f_k|` over the input samples.
    pub residual: f64,
    /// Total magnitude of clipped negative eigenvalues plus the trace
    /// renormalization applied to repair mild infeasibility (0 when the
    /// least-squares solution was already a state).
    pub psd_repair: f64,
}

/// Orthonormal basis of Hermitian `d×d` matrices under the Hilbert–Schmidt
/// inner product: identity, symmetric and antisymmetric off-diagonal pairs,
/// and diagonal generators (the generalized Gell-Mann basis).
pub fn hermitian_basis(d: usize) -> Vec<Matrix> {
    let mut basis = Vec::with_capacity(d * d);
    basis.push(Matrix::identity(d).scale_re(1.0 / (d as f64).sqrt()));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = Matrix::zeros(d, d);
            sym[(j, k)] = C64::new(s, 0.0);
            sym[(k, j)] = C64::new(s, 0.0);
            basis.push(sym);
            let mut asym = Matrix::zeros(d, d);
            asym[(j, k)] = C64::new(0.0, -s);
            asym[(k, j)] = C64::new(0.0, s);
            basis.push(asym);
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = Matrix::zeros(d, d);
        for j in 0..l {
            diag[(j, j)] = C64::new(norm, 0.0);
        }
        diag[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        basis.push(diag);
    }
    basis
}

/// Least-squares recovery of the unique density matrix behind a frame
/// function, from rank-1 samples. Requires `d ≥ 3` (the uniqueness theorem
/// fails at `d = 2`, so recovery is refused rather than extrapolated) and a
/// sample design spanning all `d²` Hermitian dimensions.
pub fn gleason_recover(samples: &[FrameSample], d: usize, tol: Tolerance) -> Result<GleasonRecovery> {
    if d < 3 {
        return Err(Error::DimensionTooSmall { dim: d });
    }
    for s in samples {
        if s.projector.dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "sample projector dim {} vs requested {}",
                s.projector.dim(),
                d
            )));
        }
        if s.projector.rank() != 1 {
            return Err(Error::Invalid(
                "frame samples must use rank-1 projectors".into(),
            ));
        }
    }

    let basis = hermitian_basis(d);
    let n_params = d * d;
    // design rows a_k[α] = Tr(G_α P_k), real for Hermitian pairs
    let design: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| {
            basis
                .iter()
                .map(|g| g.matmul(s.projector.mat()).trace().re)
                .collect()
        })
        .collect();

    // rank of the design via its Gram matrix
    let mut gram = Matrix::zeros(n_params, n_params);
    for row in &design {
        for (i, &ri) in row.iter().enumerate() {
            for (j, &rj) in row.iter().enumerate() {
                gram[(i, j)] += C64::new(ri * rj, 0.0);
            }
        }
    }
    let gram_eig = eig_hermitian(&gram, tol)?;
    let lmax = gram_eig.eigenvalues.last().copied().unwrap_or(0.0).max(0.0);
    let rank = gram_eig
        .eigenvalues
        .iter()
        .filter(|&&l| l > tol.rank_tol * lmax && l > 0.0)
        .count();
    if rank < n_params {
        return Err(Error::InsufficientSpan {
            rank,
            needed: n_params,
        });
    }

    // Tr ρ = 1 pins the identity coefficient; solve normal equations for the rest
    let c0 = 1.0 / (d as f64).sqrt();
    let m = n_params - 1;
    let mut normal = Matrix::zeros(m, m);
    let mut rhs = vec![0.0; m];
    for (row, s) in design.iter().zip(samples) {
        let target = s.value - c0 * row[0];
        for i in 0..m {
            rhs[i] += row[i + 1] * target;
            for j in 0..m {
                normal[(i, j)] += C64::new(row[i + 1] * row[j + 1], 0.0);
            }
        }
    }
    let neig = eig_hermitian(&normal, tol)?;
    // PD because the design has full rank
    let coeffs: Vec<f64> = {
        let vt_rhs: Vec<f64> = (0..m)
            .map(|k| {
                (0..m)
                    .map(|i| neig.vectors[(i, k)].conj().re * rhs[i])
                    .sum::<f64>()
                    / neig.eigenvalues[k]
            })
            .collect();
        (0..m)
            .map(|i| {
                (0..m)
                    .map(|k| neig.vectors[(i, k)].re * vt_rhs[k])
                    .sum::<f64>()
            })
            .collect()
    };

    let mut rho_hat = basis[0].scale_re(c0);
    for (i, &c) in coeffs.iter().enumerate() {
        rho_hat = rho_hat.add(&basis[i + 1].scale_re(c));
    }

    // repair mild PSD infeasibility; anything larger means bad input
    let eig = eig_hermitian(&rho_hat, tol)?;
    let min_eig = eig.eigenvalues.first().copied().unwrap_or(0.0);
    if min_eig < -1e-6 {
        return Err(Error::RecoveryInfeasible {
            min_eigenvalue: min_eig,
        });
    }
    let mut psd_repair = 0.0;
    let rho_final = if min_eig < 0.0 {
        let clipped = eig.apply(|l| C64::new(l.max(0.0), 0.0));
        let tr = clipped.trace().re;
        psd_repair = eig
            .eigenvalues
            .iter()
            .filter(|&&l| l < 0.0)
            .map(|l| l.abs())
            .sum::<f64>()
            + (tr - 1.0).abs();
        clipped.scale_re(1.0 / tr)
    } else {
        rho_hat
    };

    let rho = DensityMatrix::new(rho_final, tol)?;
    let residual = samples
        .iter()
        .map(|s| (rho.mat().matmul(s.projector.mat()).trace().re - s.value).abs())
        .fold(0.0, f64::max);

    Ok(GleasonRecovery {
        rho,
        residual,
        psd_repair,
    })
}

/// Evaluates the frame function of `rho` forward: samples over `frames`
/// random frames, one [`FrameSample`] per frame member.
pub fn sample_frame_function(
    rho: &DensityMatrix,
    frames: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<Vec<FrameSample>> {
    let d = rho.dim();
    let mut out = Vec::with_capacity(frames * d);
    for f in 0..frames {
        for p in random_frame(d, seed.wrapping_add(f as u64))? {
            let value = born(rho, &p, tol)?;
            out.push(FrameSample::new(p, value, tol)?);
        }
    }
    Ok(out)
}

/// Re-evaluates the Born probability of the same rank-1 question embedded in
/// `trials` different completing frames and reports the largest deviation.
/// The probability is defined without reference to the completing frame, so
/// the deviation stays within numerical tolerance.
pub fn noncontextuality_audit(
    rho: &DensityMatrix,
    p: &Projector,
    trials: usize,
    seed: u64,
    tol: Tolerance,
) -> Result<f64> {
    if p.rank() != 1 {
        return Err(Error::Invalid("audit expects a rank-1 projector".into()));
    }
    if rho.dim() != p.dim() {
        return Err(Error::DimensionMismatch(
            "state and projector dimensions differ".into(),
        ));
    }
    let d = rho.dim();
    let base = born(rho, p, tol)?;

    // unit vector spanning the range of p
    let eig = eig_hermitian(p.mat(), tol)?;
    let v = eig.vectors.column(d - 1);

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        // complete v to an orthonormal frame with random remaining directions
        let mut cols = vec![v.clone()];
        while cols.len() < d {
            let cand = sample::random_matrix(&mut rng, d, 1);
            let mut w = cand;
            for u in &cols {
                let c = u.vec_inner(&w);
                w = w.sub(&u.scale(c));
            }
            let norm = w.hs_norm();
            if norm > 1e-6 {
                cols.push(w.scale_re(1.0 / norm));
            }
        }
        // the first frame member is the same question, re-orthonormalized
        let rebuilt = Projector::new(outer(&cols[0], &cols[0]), tol)?;
        let value = born(rho, &rebuilt, tol)?;
        worst = worst.max((value - base).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    const TOL: Tolerance = Tolerance {
        eq_tol: 1e-9,
        rank_tol: 1e-8,
    };

    fn diag_density(entries: &[f64]) -> DensityMatrix {
        let d = entries.len();
        let mut m = Matrix::zeros(d, d);
        for (i, &p) in entries.iter().enumerate() {
            m[(i, i)] = C64::new(p, 0.0);
        }
        DensityMatrix::new(m, TOL).unwrap()
    }

    #[test]
    fn born_on_maximally_mixed() {
        let rho = DensityMatrix::maximally_mixed(3);
        for p in random_frame(3, 1).unwrap() {
            let v = born(&rho, &p, TOL).unwrap();
            assert!((v - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn born_of_pure_state_on_itself() {
        let psi = Matrix::basis_vec(2, 0);
        let rho = DensityMatrix::pure(&psi, TOL).unwrap();
        let p = Projector::onto_line(&psi, TOL).unwrap();
        assert!((born(&rho, &p, TOL).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn born_direct_trace_value() {
        let rho = diag_density(&[0.5, 1.0 / 3.0, 1.0 / 6.0]);
        let p = Projector::onto_line(&Matrix::basis_vec(3, 1), TOL).unwrap();
        assert!((born(&rho, &p, TOL).unwrap() - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn frames_resolve_identity_and_are_orthogonal() {
        let frame = random_frame(3, 42).unwrap();
        let sum = frame
            .iter()
            .fold(Matrix::zeros(3, 3), |acc, p| acc.add(p.mat()));
        assert!(sum.max_diff(&Matrix::identity(3)) <= TOL.eq_tol);
        for (i, p) in frame.iter().enumerate() {
            for (j, q) in frame.iter().enumerate() {
                if i != j {
                    assert!(p.mat().matmul(q.mat()).max_abs() <= TOL.eq_tol);
                }
            }
        }
    }

    #[test]
    fn frames_are_deterministic_per_seed() {
        let a = random_frame(4, 7).unwrap();
        let b = random_frame(4, 7).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert_eq!(p.mat(), q.mat());
        }
        let c = random_frame(4, 8).unwrap();
        assert!(a[0].mat().max_diff(c[0].mat()) > 1e-3);
    }

    #[test]
    fn born_sums_to_one_over_frames() {
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for d in [2usize, 3, 4] {
            let rho = DensityMatrix::new(sample::random_density(&mut rng, d), TOL).unwrap();
            for seed in 0..5 {
                let total: f64 = random_frame(d, seed)
                    .unwrap()
                    .iter()
                    .map(|p| born(&rho, p, TOL).unwrap())
                    .sum();
                assert!((total - 1.0).abs() <= d as f64 * TOL.eq_tol);
            }
        }
    }

    #[test]
    fn born_is_affine_in_the_state() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let d = 3;
        let rho1 = DensityMatrix::new(sample::random_density(&mut rng, d), TOL).unwrap();
        let rho2 = DensityMatrix::new(sample::random_density(&mut rng, d), TOL).unwrap();
        let p = random_frame(d, 5).unwrap().remove(0);
        for _ in 0..20 {
            let lambda: f64 = rng.gen_range(0.0..1.0);
            let mix = DensityMatrix::new(
                rho1.mat()
                    .scale_re(lambda)
                    .add(&rho2.mat().scale_re(1.0 - lambda)),
                TOL,
            )
            .unwrap();
            let lhs = born(&mix, &p, TOL).unwrap();
            let rhs = lambda * born(&rho1, &p, TOL).unwrap()
                + (1.0 - lambda) * born(&rho2, &p, TOL).unwrap();
            assert!((lhs - rhs).abs() <= TOL.eq_tol);
        }
    }

    #[test]
    fn recovery_round_trip_diag_target() {
        let target = diag_density(&[0.5, 1.0 / 3.0, 1.0 / 6.0]);
        let samples = sample_frame_function(&target, 30, 11, TOL).unwrap();
        let rec = gleason_recover(&samples, 3, TOL).unwrap();
        assert!(rec.rho.mat().max_diff(target.mat()) <= 1e-8);
        assert!(rec.residual <= 1e-9);
    }

    #[test]
    fn recovery_of_maximally_mixed() {
        let target = DensityMatrix::maximally_mixed(3);
        let samples = sample_frame_function(&target, 30, 2, TOL).unwrap();
        let rec = gleason_recover(&samples, 3, TOL).unwrap();
        assert!(rec.rho.mat().max_diff(target.mat()) <= 1e-9);
    }

    #[test]
    fn too_few_samples_is_insufficient_span() {
        let target = DensityMatrix::maximally_mixed(3);
        let mut samples = sample_frame_function(&target, 1, 2, TOL).unwrap();
        samples.truncate(2);
        assert!(matches!(
            gleason_recover(&samples, 3, TOL),
            Err(Error::InsufficientSpan { .. })
        ));
    }

    #[test]
    fn dimension_two_is_refused() {
        let target = DensityMatrix::maximally_mixed(2);
        let samples = sample_frame_function(&target, 20, 2, TOL).unwrap();
        assert!(matches!(
            gleason_recover(&samples, 2, TOL),
            Err(Error::DimensionTooSmall { dim: 2 })
        ));
    }

    #[test]
    fn noncontextuality_deviation_is_numerically_zero() {
        let rho = diag_density(&[0.9, 0.1]);
        let plus = Matrix::basis_vec(2, 0)
            .add(&Matrix::basis_vec(2, 1))
            .scale_re(std::f64::consts::FRAC_1_SQRT_2);
        let p = Projector::onto_line(&plus, TOL).unwrap();
        let dev = noncontextuality_audit(&rho, &p, 50, 9, TOL).unwrap();
        assert!(dev <= TOL.eq_tol);

        let mut rng = ChaCha20Rng::seed_from_u64(10);
        let rho4 = DensityMatrix::new(sample::random_density(&mut rng, 4), TOL).unwrap();
        let v = sample::random_unit_vector(&mut rng, 4);
        let p4 = Projector::onto_line(&v, TOL).unwrap();
        assert!(noncontextuality_audit(&rho4, &p4, 50, 12, TOL).unwrap() <= TOL.eq_tol);
    }
}
