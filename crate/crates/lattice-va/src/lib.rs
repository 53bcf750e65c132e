//! Exact-arithmetic vertex algebras over even lattices, with the Heisenberg
//! module machinery they are built from and a machine-checkable axiom
//! harness.
//!
//! Everything is computed over the rationals with zero tolerance: mode
//! products, cocycles, Virasoro brackets, graded dimensions. The crate is
//! organized bottom-up:
//!
//! - [`scalar`], [`lincomb`], [`linalg`]: exact rationals, sparse linear
//!   combinations, and the commuting-family eigendecomposition.
//! - [`heisenberg`]: the Heisenberg Lie algebra on a finite index set and
//!   its standard, twisted, and exotic function-space realizations.
//! - [`lattice`]: quadratic spaces, possibly degenerate even lattices, the
//!   sign 2-cocycle, dual vectors, and splitting bases.
//! - [`fock`]: the level-1 Fock space, exact mode products, the conformal
//!   vector, and Virasoro operators.
//! - [`vertex`]: the lattice vertex algebra, its modules (including exotic
//!   ones), sector-shift operators, and canonical (de)serialization.
//! - [`affine`]: the cross-product affine algebra available when the form
//!   vanishes on the lattice, with its module-condition checks.
//! - [`axioms`]: the exact identity-checking harness and batch suites.

pub mod scalar;
pub mod lincomb;
pub mod linalg;
pub mod lattice;
pub mod heisenberg;
pub mod fock;

pub use scalar::Scalar;
