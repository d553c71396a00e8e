//! Exact equation machinery for wreath products of a finite semigroup with
//! zero by the infinite cyclic semigroup.
//!
//! The crate is organized around four layers:
//!
//! - [`semigroup`] and [`vector`]: finite semigroups given by multiplication
//!   tables, finitely supported vectors over them, and the wreath-product
//!   multiplication.
//! - [`term`] and [`system`]: words, additive terms, the decomposition of a
//!   word into its vector and additive parts, shift terms, projections,
//!   equations, one-parameter schema families, and points.
//! - [`solver`]: exact solving of additive systems over the positive or
//!   nonnegative integers (minimal particular solutions plus a Hilbert
//!   basis), term equivalence and order, finite equivalent subsystems, and
//!   discriminating points.
//! - [`noether`], [`qcompact`] and [`bounded`]: the witness constructions for
//!   failure of the finite-subsystem property, the counterexample transport
//!   pipeline, and the brute-force box oracle they are checked against.

pub mod bounded;
pub mod noether;
pub mod qcompact;
pub mod semigroup;
pub mod solver;
pub mod system;
pub mod term;
pub mod vector;

pub use semigroup::{Elem, FiniteSemigroupWithZero, SemigroupError, ValidationReport};
pub use system::{EqRef, Equation, Schema, SysEq, System, SystemError, WreathPoint};
pub use term::{AddTerm, AddTermOrZero, SemiWord, TermError, Var};
pub use vector::{FinSuppVector, Start, VectorError, WreathElement};
