//! Canonical fixtures used across tests and the CLI: Pauli matrices, the GHZ
//! state, the non-commuting 6×6 effect pair E/F, standard gates, and the
//! small lattices every quantum-logic discussion leans on (2ⁿ, N5, O6, MOn).
//!
//! These are the single source of truth; the data files the CLI emits are
//! generated from here and covered by a drift test.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;

use crate::lattice::{build_lattice, FiniteLattice, LatticeSpec};
use crate::matrix::Matrix;

pub fn pauli_x() -> Matrix {
    Matrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]])
}

pub fn pauli_y() -> Matrix {
    Matrix::from_fn(2, 2, |i, j| match (i, j) {
        (0, 1) => C64::new(0.0, -1.0),
        (1, 0) => C64::new(0.0, 1.0),
        _ => C64::new(0.0, 0.0),
    })
}

pub fn pauli_z() -> Matrix {
    Matrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]])
}

/// GHZ three-qubit state vector `(|000⟩ + |111⟩)/√2`.
pub fn ghz_vec() -> Matrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut v = Matrix::zeros(8, 1);
    v[(0, 0)] = C64::new(s, 0.0);
    v[(7, 0)] = C64::new(s, 0.0);
    v
}

/// GHZ density matrix with exact entries 1/2 at the four corners of the
/// `{|000⟩, |111⟩}` block.
pub fn ghz_density() -> Matrix {
    let mut m = Matrix::zeros(8, 8);
    let half = C64::new(0.5, 0.0);
    for (i, j) in [(0, 0), (0, 7), (7, 0), (7, 7)] {
        m[(i, j)] = half;
    }
    m
}

/// The 6×6 projection `E = diag(1,0,1,0,1,0)`. Together with [`cbh_f`] it
/// generates a pair of algebras that admit joint states with arbitrary
/// marginals yet do not commute.
pub fn cbh_e() -> Matrix {
    Matrix::from_real(&[
        &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    ])
}

/// The 6×6 projection partner of [`cbh_e`]; its last block is the averaging
/// projection `[[1/2, 1/2], [1/2, 1/2]]`.
pub fn cbh_f() -> Matrix {
    Matrix::from_real(&[
        &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0, 0.5, 0.5],
        &[0.0, 0.0, 0.0, 0.0, 0.5, 0.5],
    ])
}

/// SWAP on a qubit pair.
pub fn swap2() -> Matrix {
    let mut m = Matrix::zeros(4, 4);
    let one = C64::new(1.0, 0.0);
    m[(0, 0)] = one;
    m[(1, 2)] = one;
    m[(2, 1)] = one;
    m[(3, 3)] = one;
    m
}

/// CNOT with the first qubit (system) controlling the second (ancilla).
pub fn cnot() -> Matrix {
    let mut m = Matrix::zeros(4, 4);
    let one = C64::new(1.0, 0.0);
    m[(0, 0)] = one;
    m[(1, 1)] = one;
    m[(2, 3)] = one;
    m[(3, 2)] = one;
    m
}

/// `exp(−iθ·SWAP) = cos θ · I − i sin θ · SWAP`, exact since SWAP² = I.
pub fn partial_swap(theta: f64) -> Matrix {
    let i4 = Matrix::identity(4);
    i4.scale(C64::new(theta.cos(), 0.0))
        .add(&swap2().scale(C64::new(0.0, -theta.sin())))
}

/// Two-element chain `{0 < 1}` with `0 ↔ 1` as orthocomplement.
pub fn chain2_spec() -> LatticeSpec {
    LatticeSpec {
        elements: vec!["0".into(), "1".into()],
        leq: vec![("0".into(), "1".into())],
        ortho: Some(BTreeMap::from([("0".to_string(), "1".to_string())])),
    }
}

pub fn chain2() -> FiniteLattice {
    build_lattice(&chain2_spec()).expect("fixture")
}

/// Boolean algebra 2ⁿ of subsets of an n-set; labels are bitstrings, ortho is
/// set complement.
pub fn boolean_cube_spec(n: usize) -> LatticeSpec {
    assert!(n <= 6);
    let size = 1usize << n;
    let label = |s: usize| -> String {
        (0..n)
            .rev()
            .map(|b| if s >> b & 1 == 1 { '1' } else { '0' })
            .collect()
    };
    let elements: Vec<String> = (0..size).map(label).collect();
    let mut leq = Vec::new();
    for s in 0..size {
        for t in 0..size {
            if s != t && s & t == s {
                leq.push((label(s), label(t)));
            }
        }
    }
    let ortho = (0..size)
        .map(|s| (label(s), label(!s & (size - 1))))
        .collect();
    LatticeSpec {
        elements,
        leq,
        ortho: Some(ortho),
    }
}

pub fn boolean_cube(n: usize) -> FiniteLattice {
    build_lattice(&boolean_cube_spec(n)).expect("fixture")
}

/// Pentagon N5: `0 < a < c < 1` with `b` incomparable to both. The smallest
/// non-modular lattice; it carries no orthocomplement.
pub fn n5_spec() -> LatticeSpec {
    LatticeSpec {
        elements: vec!["0".into(), "a".into(), "b".into(), "c".into(), "1".into()],
        leq: vec![
            ("0".into(), "a".into()),
            ("a".into(), "c".into()),
            ("c".into(), "1".into()),
            ("0".into(), "b".into()),
            ("b".into(), "1".into()),
        ],
        ortho: None,
    }
}

pub fn n5() -> FiniteLattice {
    build_lattice(&n5_spec()).expect("fixture")
}

/// Benzene ring O6: `0 < a < b < 1` and `0 < b⊥ < a⊥ < 1`. Orthocomplemented
/// but not orthomodular; the canonical counterexample.
pub fn o6_spec() -> LatticeSpec {
    LatticeSpec {
        elements: vec![
            "0".into(),
            "a".into(),
            "b".into(),
            "b_perp".into(),
            "a_perp".into(),
            "1".into(),
        ],
        leq: vec![
            ("0".into(), "a".into()),
            ("a".into(), "b".into()),
            ("b".into(), "1".into()),
            ("0".into(), "b_perp".into()),
            ("b_perp".into(), "a_perp".into()),
            ("a_perp".into(), "1".into()),
        ],
        ortho: Some(BTreeMap::from([
            ("0".to_string(), "1".to_string()),
            ("a".to_string(), "a_perp".to_string()),
            ("b".to_string(), "b_perp".to_string()),
        ])),
    }
}

pub fn o6() -> FiniteLattice {
    build_lattice(&o6_spec()).expect("fixture")
}

/// MO2: atoms `a, a⊥, b, b⊥` with the two pairs mutually incomparable.
/// Orthomodular but not distributive; isomorphic to the lattice generated by
/// two distinct lines in ℂ².
pub fn mo2_spec() -> LatticeSpec {
    LatticeSpec {
        elements: vec![
            "0".into(),
            "a".into(),
            "a_perp".into(),
            "b".into(),
            "b_perp".into(),
            "1".into(),
        ],
        leq: vec![
            ("0".into(), "a".into()),
            ("0".into(), "a_perp".into()),
            ("0".into(), "b".into()),
            ("0".into(), "b_perp".into()),
            ("a".into(), "1".into()),
            ("a_perp".into(), "1".into()),
            ("b".into(), "1".into()),
            ("b_perp".into(), "1".into()),
        ],
        ortho: Some(BTreeMap::from([
            ("0".to_string(), "1".to_string()),
            ("a".to_string(), "a_perp".to_string()),
            ("b".to_string(), "b_perp".to_string()),
        ])),
    }
}

pub fn mo2() -> FiniteLattice {
    build_lattice(&mo2_spec()).expect("fixture")
}

/// MOn: n incomparable atom/co-atom pairs between 0 and 1.
pub fn mo_n_spec(n: usize) -> LatticeSpec {
    let mut elements = vec!["0".to_string()];
    let mut leq = Vec::new();
    let mut ortho = BTreeMap::from([("0".to_string(), "1".to_string())]);
    for k in 1..=n {
        let a = format!("a{k}");
        let ap = format!("a{k}_perp");
        elements.push(a.clone());
        elements.push(ap.clone());
        leq.push(("0".to_string(), a.clone()));
        leq.push(("0".to_string(), ap.clone()));
        leq.push((a.clone(), "1".to_string()));
        leq.push((ap.clone(), "1".to_string()));
        ortho.insert(a, ap);
    }
    elements.push("1".to_string());
    LatticeSpec {
        elements,
        leq,
        ortho: Some(ortho),
    }
}

pub fn mo_n(n: usize) -> FiniteLattice {
    build_lattice(&mo_n_spec(n)).expect("fixture")
}
