//! Twisted CAR from the untwisted Fock representation: `ã_i` acts in slot
//! `i` of `(ℂ²)^{⊗n}` and is homogeneous of degree `δ_i`; twisting by `Θ/2`
//! produces the `Θ`-relations.

use num::complex::Complex64;

use super::rep::{CarRep, Generators, Provenance};
use crate::graded::{decompose_homogeneous, rieffel_twist, GradedSpace, SkewMatrix};
use crate::numerics::{Cyclo, Real, Scalar, SparseMat};

/// Untwisted `ã_i = 1^{⊗(i−1)} ⊗ a ⊗ 1^{⊗(n−i)}` with `a = E₁₀`.
pub fn fock_generators<S: Scalar>(n: usize) -> Vec<SparseMat<S>> {
    let mut a = SparseMat::zeros(2, 2);
    a.set(1, 0, S::one());
    let id = SparseMat::identity(2);
    (0..n)
        .map(|i| {
            let factors: Vec<_> = (0..n).map(|k| if k == i { a.clone() } else { id.clone() }).collect();
            SparseMat::kron_all(&factors)
        })
        .collect()
}

fn twisted<S: Scalar>(theta: &SkewMatrix) -> Vec<SparseMat<S>> {
    let n = theta.n();
    let space = GradedSpace::fock(n);
    let half = theta.scale(Real::ratio(1, 2));
    fock_generators::<S>(n)
        .iter()
        .map(|g| {
            let op = decompose_homogeneous(g, &space).expect("dimensions agree");
            rieffel_twist(&op, &half).expect("ℤⁿ grading accepts every Θ").matrix()
        })
        .collect()
}

pub fn fock_car_theta(theta: &SkewMatrix) -> CarRep {
    let generators = if theta.is_exact() {
        Generators::Exact(twisted::<Cyclo>(theta))
    } else {
        Generators::Approx(twisted::<Complex64>(theta))
    };
    CarRep { theta: theta.clone(), generators, provenance: Provenance::Fock, point: None, torus_level: None }
}
