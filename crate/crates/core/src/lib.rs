//! Normalization by evaluation for the Lambek calculus with unit and
//! tensor, and for the commutative (MILL) and dual-context (DILL) linear
//! variants.
//!
//! The pipeline for the ordered calculus is
//! [`syntax`] → [`nbe::eval`] into the Kripke model of [`sem`] →
//! [`nbe::reify`] into the normal forms of [`nf`]. The rewrite system in
//! [`rewrite`] is an independent ground truth used by the test suites.

pub mod batch;
pub mod dill;
pub mod error;
pub mod gen;
pub mod linear;
pub mod mill;
pub mod names;
pub mod nbe;
pub mod nf;
pub mod rewrite;
pub mod sem;
pub mod syntax;
pub mod text;

pub use error::{Error, Result};
pub use nbe::nbe;
pub use nf::{Ne, Nf};
pub use syntax::{typecheck, Context, Derivation, Formula, Sequent};
