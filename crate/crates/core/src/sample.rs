//! Seeded random instances for property checks and the self-test runner.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::classify::SignedPermutation;
use crate::graded::{decompose_homogeneous, Degree, GradedOperator, GradedSpace, SkewMatrix};
use crate::numerics::{Cyclo, Rational, Real, SparseMat};

/// `Θ` with entries `p/d`, `1 ≤ d ≤ max_den`, `|p| < 2d`.
pub fn rational_theta<R: Rng>(rng: &mut R, n: usize, max_den: i64) -> SkewMatrix {
    SkewMatrix::from_upper_fn(n, |_, _| {
        let d = rng.gen_range(1..=max_den);
        Real::ratio(rng.gen_range(-2 * d + 1..2 * d), d)
    })
}

/// `Θ` with entries in `(1/q)ℤ ∩ (−1, 1)`.
pub fn level_theta<R: Rng>(rng: &mut R, n: usize, q: u64) -> SkewMatrix {
    let q = q as i64;
    SkewMatrix::from_upper_fn(n, |_, _| Real::ratio(rng.gen_range(-q + 1..q), q))
}

/// A point of `{0, 1/step, …, 1/2}ⁿ`; `step` must be even.
pub fn grid_point<R: Rng>(rng: &mut R, n: usize, step: i64) -> Vec<Real> {
    (0..n).map(|_| Real::ratio(rng.gen_range(0..=step / 2), step)).collect()
}

/// A `ℤᵏ`-graded space of dimension `dim` with degrees in `[−2, 2]ᵏ`.
pub fn graded_space<R: Rng>(rng: &mut R, k: usize, dim: usize) -> GradedSpace {
    let degrees = (0..dim).map(|_| (0..k).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    GradedSpace::new(k, degrees, None).expect("valid degrees")
}

fn entry<R: Rng>(rng: &mut R) -> Cyclo {
    let c = Cyclo::from_rational(Rational::new(rng.gen_range(1..=5), rng.gen_range(1..=3)));
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    &c * &Cyclo::root_of_unity(Rational::new(sign * rng.gen_range(0..4), 4))
}

/// A nonzero operator homogeneous of degree `unit_degree(i, j)` for a random
/// matrix unit `(i, j)`.
pub fn homogeneous_operator<R: Rng>(rng: &mut R, space: &GradedSpace) -> (GradedOperator<Cyclo>, Degree) {
    let d = space.dim();
    let (i0, j0) = (rng.gen_range(0..d), rng.gen_range(0..d));
    let p = space.unit_degree(i0, j0);
    let mut m = SparseMat::zeros(d, d);
    m.set(i0, j0, entry(rng));
    for i in 0..d {
        for j in 0..d {
            if (i, j) != (i0, j0) && space.unit_degree(i, j) == p && rng.gen_bool(0.5) {
                m.set(i, j, entry(rng));
            }
        }
    }
    (decompose_homogeneous(&m, space).expect("dimensions agree"), p)
}

pub fn signed_permutation<R: Rng>(rng: &mut R, n: usize) -> SignedPermutation {
    let mut sigma: Vec<usize> = (0..n).collect();
    sigma.shuffle(rng);
    SignedPermutation { sigma, signs: (0..n).map(|_| rng.gen_range(0..2)).collect(), mod_integer: false }
}

/// `Θ₂` with `PΘ₂Pᵀ = Θ₁`.
pub fn preimage_under(p: &SignedPermutation, theta1: &SkewMatrix) -> SkewMatrix {
    let n = p.n();
    let mut inv = vec![0; n];
    for (i, &s) in p.sigma.iter().enumerate() {
        inv[s] = i;
    }
    SkewMatrix::from_upper_fn(n, |i, j| {
        let (a, b) = (inv[i], inv[j]);
        let v = theta1.get(a, b);
        if (p.signs[a] + p.signs[b]) % 2 == 1 {
            -v
        } else {
            v
        }
    })
}
