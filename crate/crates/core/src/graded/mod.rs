//! ℤⁿ-graded operators and the Rieffel phase twist.
//!
//! On a homogeneous operator of degree `p` acting on a vector of degree `q`
//! the twist multiplies by `e^{2πi⟨Θp, q⟩}`; products of twisted operators
//! then pick up exactly the cocycle `e^{2πi⟨Θp, q⟩}` of the deformed product.

pub mod matrix_deformation;
pub mod operator;
pub mod skew;

pub use matrix_deformation::{build_omega, verify_matrix_deformation, MatrixDeformationReport, OmegaVector};
pub use operator::{
    check_double_deformation, decompose_homogeneous, homogeneous_phase, rieffel_twist, Degree, GradedOperator,
    GradedSpace,
};
pub use skew::SkewMatrix;
