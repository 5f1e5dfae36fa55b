//! Finite-dimensional models of twisted CAR algebras.
//!
//! The crate builds explicit matrix representations of the algebra generated
//! by `a_1, …, a_n` with
//!
//! ```text
//! a_i* a_i + a_i a_i* = 1
//! a_i* a_j = e^{2πiΘ_ij} a_j a_i*      a_i a_j = e^{-2πiΘ_ij} a_j a_i
//! ```
//!
//! for a real skew-symmetric `Θ`, together with the phase calculus of the
//! Rieffel twist, the hypercube fiber catalog and the isomorphism tests.
//! Whenever `Θ` has rational entries all matrices are built over an exact
//! cyclotomic scalar, so relation residuals are certified zero rather than
//! small.

pub mod car;
pub mod classify;
pub mod error;
pub mod fibers;
pub mod graded;
pub mod numerics;
pub mod sample;
pub mod selftest;
pub mod torus;

pub use error::{Error, Result};
