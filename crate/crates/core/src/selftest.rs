//! Seeded invariant suites. Same seed and iteration count give the same
//! summary, byte for byte.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::car::{
    build_tau_x, fock_car_theta, membership_grid, minimal_level, verify_car_relations, word_membership, Letter, Word,
};
use crate::classify::{classify_n2, signed_perm_search, Status};
use crate::fibers::{fiber_descriptor, k0_rank};
use crate::graded::{
    check_double_deformation, decompose_homogeneous, homogeneous_phase, rieffel_twist, verify_matrix_deformation,
};
use crate::numerics::{Real, Scalar, DEFAULT_TOL};
use crate::sample;
use crate::torus::{doubled_torus_check, torus_generators, TorusSpec};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    /// Iterations that failed (first few), for diagnostics.
    pub failures: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelftestSummary {
    pub seed: u64,
    pub iters: usize,
    pub suites: Vec<SuiteResult>,
    pub pass: bool,
}

type Check = fn(&mut ChaCha8Rng) -> bool;

fn car_relations(rng: &mut ChaCha8Rng) -> bool {
    let n = rng.gen_range(1..=3);
    let den = rng.gen_range(1..=8);
    let theta = sample::level_theta(rng, n, den);
    let x = sample::grid_point(rng, n, 8);
    let Ok(q) = minimal_level(&theta, &x) else { return false };
    build_tau_x(&theta, &x, q).is_ok_and(|rep| verify_car_relations(&rep, 0.0).exact)
}

fn fock(rng: &mut ChaCha8Rng) -> bool {
    let n = rng.gen_range(1..=4);
    verify_car_relations(&fock_car_theta(&sample::rational_theta(rng, n, 8)), 0.0).exact
}

fn twist_cocycle(rng: &mut ChaCha8Rng) -> bool {
    let k = rng.gen_range(1..=2);
    let dim = rng.gen_range(1..=4);
    let space = sample::graded_space(rng, k, dim);
    let theta = sample::rational_theta(rng, k, 6);
    let (a, p) = sample::homogeneous_operator(rng, &space);
    let (b, q) = sample::homogeneous_operator(rng, &space);
    let run = || -> crate::Result<bool> {
        let lhs = rieffel_twist(&a, &theta)?.matrix().matmul(&rieffel_twist(&b, &theta)?.matrix());
        let ab = decompose_homogeneous(&a.matrix().matmul(&b.matrix()), &space)?;
        let phase = Scalar::from_phase(homogeneous_phase(&theta, &p, &q)).expect("exact phase");
        let rhs = rieffel_twist(&ab, &theta)?.matrix().scale(&phase);
        Ok(lhs.residual(&rhs).exact)
    };
    run().unwrap_or(false)
}

fn double_deformation(rng: &mut ChaCha8Rng) -> bool {
    let k = rng.gen_range(1..=3);
    let dim = rng.gen_range(1..=4);
    let space = sample::graded_space(rng, k, dim);
    let theta = sample::rational_theta(rng, k, 8);
    let (a, _) = sample::homogeneous_operator(rng, &space);
    check_double_deformation(&a, &theta).is_ok_and(|r| r.exact)
}

fn matrix_deformation(rng: &mut ChaCha8Rng) -> bool {
    let (k, m) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let q = rng.gen_range(2..=4);
    let theta = sample::level_theta(rng, k + m, q);
    let dim = rng.gen_range(1..=4);
    let mspace = sample::graded_space(rng, k, dim);
    let matrix_ops: Vec<_> = (0..2).map(|_| sample::homogeneous_operator(rng, &mspace).0).collect();
    let Ok(spec) = TorusSpec::with_level(sample::level_theta(rng, m, q), q) else { return false };
    let rep = torus_generators(&spec);
    let torus_ops: Vec<_> = (0..m)
        .flat_map(|i| {
            let g = rep.graded_generator(i);
            [g.adjoint(), g]
        })
        .collect();
    verify_matrix_deformation(&theta, &matrix_ops, &torus_ops)
        .is_ok_and(|r| r.intertwining.exact && r.w_unitarity.exact && r.pairs == 2 * torus_ops.len())
}

fn k0_ranks(rng: &mut ChaCha8Rng) -> bool {
    let theta = sample::rational_theta(rng, 3, 6);
    let x = sample::grid_point(rng, 3, 4);
    let Ok(d) = fiber_descriptor(&theta, &x) else { return false };
    let (_, m, r) = d.signature;
    match k0_rank(d.signature) {
        Ok(rank) => m + r > 1 && rank == 1 << (m + r - 1) && d.k0_rank == Some(rank),
        Err(_) => m + r <= 1 && d.k0_rank.is_none(),
    }
}

fn classify_pairs(rng: &mut ChaCha8Rng) -> bool {
    let mut draw = || Real::ratio(rng.gen_range(-12..12), rng.gen_range(1..=6));
    let (a, b) = (draw(), draw());
    let shift = Real::int(rng.gen_range(-3..=3));
    let status = |x: Real, y: Real| classify_n2(x, y, DEFAULT_TOL).status;
    let base = status(a, b);
    let expected =
        if (a - b).frac().is_zero() || (a + b).frac().is_zero() { Status::Isomorphic } else { Status::NotIsomorphic };
    status(a, a) == Status::Isomorphic
        && base == expected
        && status(b, a) == base
        && status(a + shift, b) == base
        && status(-a, b) == base
        && status(a, -b) == base
}

fn signed_permutations(rng: &mut ChaCha8Rng) -> bool {
    let n = rng.gen_range(1..=5);
    let theta1 = sample::rational_theta(rng, n, 8);
    let p = sample::signed_permutation(rng, n);
    let theta2 = sample::preimage_under(&p, &theta1);
    matches!(signed_perm_search(&theta1, &theta2, DEFAULT_TOL), Ok(Some(found)) if found.conjugate(&theta2) == theta1)
}

fn membership(rng: &mut ChaCha8Rng) -> bool {
    let len = rng.gen_range(0..=6);
    let word = Word((0..len).map(|_| if rng.gen_bool(0.5) { Letter::Gen(0) } else { Letter::Star(0) }).collect());
    let (xs, zs) = membership_grid(10, 20);
    word_membership(&word, &xs, &zs).is_ok_and(|r| r.holds(1e-10))
}

fn doubled_torus(rng: &mut ChaCha8Rng) -> bool {
    let n = rng.gen_range(2..=3);
    let q = rng.gen_range(1..=if n == 3 { 4 } else { 7 });
    let Ok(spec) = TorusSpec::with_level(sample::level_theta(rng, n, q), q) else { return false };
    doubled_torus_check(&torus_generators::<crate::numerics::Cyclo>(&spec)).is_ok_and(|r| r.exact)
}

const SUITES: &[(&str, Check)] = &[
    ("car_relations", car_relations),
    ("fock", fock),
    ("twist_cocycle", twist_cocycle),
    ("double_deformation", double_deformation),
    ("matrix_deformation", matrix_deformation),
    ("k0_rank", k0_ranks),
    ("classify_n2", classify_pairs),
    ("signed_permutation", signed_permutations),
    ("b_membership", membership),
    ("doubled_torus", doubled_torus),
];

pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|(n, _)| *n).collect()
}

/// Runs every suite for `iters` iterations; suite `k` draws from a stream
/// seeded by `(seed, k)`.
pub fn run_selftest(seed: u64, iters: usize) -> SelftestSummary {
    let suites: Vec<SuiteResult> = SUITES
        .iter()
        .enumerate()
        .map(|(k, (name, check))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let mut failures = Vec::new();
            let mut passed = 0;
            for it in 0..iters {
                if check(&mut rng) {
                    passed += 1;
                } else if failures.len() < 5 {
                    failures.push(it);
                }
            }
            SuiteResult { name, passed, total: iters, failures }
        })
        .collect();
    let pass = suites.iter().all(|s| s.passed == s.total);
    SelftestSummary { seed, iters, suites, pass }
}
