//! Abelian invariants of maximal tori of the spinor groups `Spin±2l(q)`.
//!
//! Each torus is labelled by a signed cycle type of the Weyl group `W(D_l)`
//! (form `+`) or of its nontrivial coset in `W(C_l)` (form `-`). Its
//! structure is available two ways: from closed-form cyclic decompositions
//! ([`theory`]) and from the Smith normal form of `q·S·R·S⁻¹ − E`
//! ([`lattice`], [`smith`]).

pub mod cli;
pub mod lattice;
pub mod matrix;
pub mod report;
pub mod smith;
pub mod theory;
pub mod weyl;

pub use matrix::{HalfIntMatrix, IntMatrix, MatrixError};
pub use smith::{invariant_factors, smith_normal_form, AbelianInvariants, SnfResult};
pub use weyl::{enumerate_classes, Parity, Sign, SignedCycleType, SignedPermutation};
