//! Exact equivariant Ehrhart theory.
//!
//! Given a lattice polytope invariant (up to translation) under a finite
//! group of lattice automorphisms, this crate computes the character-valued
//! counting function `L(m)`, the equivariant H*-series `phi[t]` as a rational
//! class function, and the structural tests attached to them: polynomiality,
//! effectiveness, reciprocity, reflexivity, leading coefficients and
//! fixed-point criteria. All arithmetic is exact; no floating point enters
//! any result.

pub mod check;
pub mod ehrhart;
pub mod equivariant;
pub mod exact_arith;
pub mod fixed_locus;
pub mod gallery;
pub mod lattice_group;
pub mod linalg;
pub mod polytope;

pub use equivariant::{EquivariantContext, EquivariantHStar, HStarVerdict};
pub use exact_arith::{CyclotomicValue, IntPolynomial, RationalFunction};
pub use lattice_group::{
    AffineLatticeAutomorphism, CharacterTable, ClassFunction, FiniteMatrixGroup,
};
pub use polytope::RationalPolytope;
