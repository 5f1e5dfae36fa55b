//! Matrix representations of the twisted CAR algebra.

pub mod analysis;
pub mod fock;
pub mod rep;
pub mod single;
pub mod tau;

pub use analysis::{hom_space, number_operator_spectra, HomSpace, IndexSpectrum, SpectraReport};
pub use fock::{fock_car_theta, fock_generators};
pub use rep::{
    verify_car_relations, CarRep, CarReport, Generators, Letter, Provenance, RelationKind, RelationResidual, Word,
};
pub use single::{
    car1_irrep, check_b_membership, fiber_generator_psi, membership_grid, spatial_h, word_membership, BMembershipReport,
};
pub use tau::{build_tau_x, build_tau_x_irreducible, build_tau_x_with, minimal_level, TorusChoice};
