//! Finite-dimensional verification toolkit for the structures underlying
//! quantum theory: orthomodular lattices, subspace lattices of inner-product
//! spaces, Born-rule state recovery, ancilla-induced POVMs, matrix *-algebras
//! with commutants and independence tests, and Tomita–Takesaki modular flow
//! with KMS verification.
//!
//! Every operation is a pure function on immutable values with explicit
//! tolerances and, where randomness enters, an explicit seed.

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod fixtures;
pub mod lattice;
pub mod matrix;
pub mod modular;
pub mod numerics;
pub mod sample;
pub mod states;
pub mod subspaces;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use numerics::Tolerance;
