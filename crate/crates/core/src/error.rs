//! Shared error type for the toolkit.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed matrix or vector shape.
    #[error("shape error: {0}")]
    Shape(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: ‖M − M†‖_max = {deviation:.3e} exceeds {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("matrix is not positive definite: eigenvalue {eigenvalue:.3e} below threshold")]
    NotPositiveDefinite { eigenvalue: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("order relation has a cycle through element `{element}`; not a partial order")]
    NotAPoset { element: String },

    #[error("not a lattice: elements `{x}` and `{y}` have no unique {which}")]
    NotALattice { x: String, y: String, which: String },

    #[error("lattice has no orthocomplement map")]
    NoOrthoMap,

    #[error("subalgebra enumeration exceeded budget of {budget}")]
    EnumerationBudgetExceeded { budget: usize },

    #[error("isomorphism search limited to {max} elements, got {n}")]
    SearchBudgetExceeded { n: usize, max: usize },

    #[error("subspace closure exceeded budget of {budget} (generic families generate unbounded closures)")]
    ClosureBudgetExceeded { budget: usize },

    #[error("value {value} outside [0, 1] beyond tolerance")]
    OutOfRange { value: f64 },

    #[error("frame samples span only {rank} of the {needed} Hermitian dimensions needed for recovery")]
    InsufficientSpan { rank: usize, needed: usize },

    #[error("state recovery requires dimension ≥ 3; Gleason's theorem does not hold for d = {dim}")]
    DimensionTooSmall { dim: usize },

    #[error("recovered operator violates positivity: min eigenvalue {min_eigenvalue:.3e}")]
    RecoveryInfeasible { min_eigenvalue: f64 },

    #[error("ancilla projectors do not form a projective resolution of identity: {0}")]
    NotAResolution(String),

    #[error("matrix is not unitary: ‖U†U − I‖_max = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("state is not faithful: eigenvalue ratio {ratio:.3e} below rank threshold")]
    NotFaithful { ratio: f64 },

    #[error("operator is not an effect: eigenvalue {eigenvalue:.3e} outside [0, 1]")]
    NotAnEffect { eigenvalue: f64 },

    #[error("algebra does not contain the identity")]
    NotUnital,

    #[error("{0}")]
    Invalid(String),
}
