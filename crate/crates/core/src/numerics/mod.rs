//! Exact phases, exact cyclotomic scalars, and the dense/sparse matrix layer.

pub mod cyclo;
pub mod dense;
pub mod phase;
pub mod real;
pub mod scalar;
pub mod sparse;

pub use cyclo::Cyclo;
pub use dense::{hermitian_spectrum, kron, CMatrix};
pub use phase::{phase_to_complex, Phase, PHASE_TOL};
pub use real::{Rational, Real};
pub use scalar::Scalar;
pub use sparse::{Residual, SparseMat};

/// Default tolerance for float comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;
