//! The thirteen acceptance criteria, one line each. Expected values come
//! from small independent computations in this file, not from the library.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use cartheta::car::{
    build_tau_x, build_tau_x_irreducible, check_b_membership, fock_car_theta, hom_space, membership_grid,
    number_operator_spectra, spatial_h, verify_car_relations, word_membership, Letter, Word,
};
use cartheta::classify::{classify_n2, signed_perm_search, SignedPermutation, Status};
use cartheta::fibers::{fiber_descriptor, k0_rank};
use cartheta::graded::{
    check_double_deformation, decompose_homogeneous, rieffel_twist, verify_matrix_deformation, SkewMatrix,
};
use cartheta::numerics::dense::{c, max_abs, random_unitary};
use cartheta::numerics::{CMatrix, Cyclo, Rational, Real, SparseMat};
use cartheta::sample;
use cartheta::torus::{distinguish_trace_ranges, doubled_torus_check, torus_generators, TorusSpec};
use num::complex::Complex64;
use num::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xCA7_0000 + tag)
}

/// `Σ` denominators straight from the block rule: 4Θ, 2Θ, Θ.
fn sigma_level(theta: &SkewMatrix, x: &[Real]) -> u64 {
    let half = Real::ratio(1, 2);
    let class = |v: &Real| {
        if v.is_zero() {
            0
        } else if *v == half {
            2
        } else {
            1
        }
    };
    let mut level = 1i64;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            let factor = match (class(&x[i]), class(&x[j])) {
                (0, _) | (_, 0) => continue,
                (1, 1) => 4,
                (2, 2) => 1,
                _ => 2,
            };
            let d = *theta.get(i, j).scale(factor).exact().unwrap().denom();
            level = level.lcm(&d);
        }
    }
    level as u64
}

fn approx(theta: &SkewMatrix) -> SkewMatrix {
    theta.map(|_, _, v| Real::Approx(v.to_f64()))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut worst_float: f64 = 0.0;
    for it in 0..100 {
        let n = r.gen_range(1..=3);
        let den = r.gen_range(1..=8);
        let theta = sample::level_theta(&mut r, n, den);
        let x = sample::grid_point(&mut r, n, 8);
        let q = sigma_level(&theta, &x);
        let rep = build_tau_x(&theta, &x, q).map_err(|e| format!("instance {it}: {e}"))?;
        let report = verify_car_relations(&rep, 0.0);
        ensure(report.exact, || format!("instance {it}: residual {}", report.max_residual))?;
        let xf: Vec<Real> = x.iter().map(|v| Real::Approx(v.to_f64())).collect();
        let float = build_tau_x(&approx(&theta), &xf, q).map_err(|e| format!("float {it}: {e}"))?;
        worst_float = worst_float.max(verify_car_relations(&float, 1e-10).max_residual);
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(worst_float < 1e-10, || format!("float residual {worst_float:e}"))?;
    ensure(secs < 30.0, || format!("took {secs:.1}s"))?;
    Ok(format!("100 exact instances, worst float residual {worst_float:.1e}, {secs:.2}s"))
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    for n in 1..=6 {
        for _ in 0..3 {
            let theta = sample::rational_theta(&mut r, n, 8);
            let report = verify_car_relations(&fock_car_theta(&theta), 0.0);
            ensure(report.exact, || format!("n = {n}: residual {}", report.max_residual))?;
        }
    }
    let rep = fock_car_theta(&SkewMatrix::two(Real::ratio(1, 2)));
    let cartheta::car::Generators::Exact(g) = &rep.generators else { return Err("not exact".into()) };
    let anti = g[0].matmul(&g[1]).add(&g[1].matmul(&g[0]));
    let anti_star = g[0].adjoint().matmul(&g[1]).add(&g[1].matmul(&g[0].adjoint()));
    let zero = SparseMat::<Cyclo>::zeros(4, 4);
    ensure(anti.residual(&zero).exact && anti_star.residual(&zero).exact, || "a1, a2 do not anticommute".into())?;
    Ok("n ≤ 6 exact; θ = 1/2 anticommutes".into())
}

fn criterion_3() -> Outcome {
    let mut r = rng(3);
    let mut worst: f64 = 0.0;
    for _ in 0..120 {
        let k = r.gen_range(1..=3);
        let dim = r.gen_range(1..=5);
        let space = sample::graded_space(&mut r, k, dim);
        let theta = SkewMatrix::from_upper_fn(k, |_, _| Real::Approx(r.gen_range(-1.0..1.0)));
        let (a, p) = sample::homogeneous_operator(&mut r, &space);
        let (b, q) = sample::homogeneous_operator(&mut r, &space);
        let (a, b) = (a.to_complex(), b.to_complex());
        // e^{2πi qᵀΘp} by hand
        let s: f64 = (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| q[i] as f64 * theta.get(i, j).to_f64() * p[j] as f64)
            .sum();
        let phase = Complex64::from_polar(1.0, TAU * s);
        let lhs = rieffel_twist(&a, &theta).unwrap().matrix().to_dense()
            * rieffel_twist(&b, &theta).unwrap().matrix().to_dense();
        let ab = decompose_homogeneous(&a.matrix().matmul(&b.matrix()), &space).unwrap();
        let rhs = rieffel_twist(&ab, &theta).unwrap().matrix().to_dense() * phase;
        worst = worst.max(max_abs(&(lhs - rhs)));
    }
    ensure(worst < 1e-12, || format!("residual {worst:e}"))?;
    Ok(format!("120 pairs, worst residual {worst:.1e}"))
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    for it in 0..100 {
        let k = r.gen_range(1..=3);
        let dim = r.gen_range(1..=5);
        let space = sample::graded_space(&mut r, k, dim);
        let theta = sample::rational_theta(&mut r, k, 9);
        let (a, _) = sample::homogeneous_operator(&mut r, &space);
        let res = check_double_deformation(&a, &theta).map_err(|e| e.to_string())?;
        ensure(res.exact, || format!("instance {it}: residual {}", res.max_abs))?;
    }
    Ok("100 instances exactly 0".into())
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let mut count = 0;
    for it in 0..40 {
        let (k, m) = (r.gen_range(1..=2), r.gen_range(1..=2));
        let q = r.gen_range(1..=4);
        let theta = sample::level_theta(&mut r, k + m, q);
        let dim = r.gen_range(1..=4);
        let mspace = sample::graded_space(&mut r, k, dim);
        let matrix_ops: Vec<_> = (0..3).map(|_| sample::homogeneous_operator(&mut r, &mspace).0).collect();
        let spec = TorusSpec::with_level(sample::level_theta(&mut r, m, q), q).unwrap();
        let torus = torus_generators::<Cyclo>(&spec);
        let torus_ops: Vec<_> =
            (0..m).flat_map(|i| [torus.graded_generator(i), torus.graded_generator(i).adjoint()]).collect();
        let report =
            verify_matrix_deformation(&theta, &matrix_ops, &torus_ops).map_err(|e| format!("instance {it}: {e}"))?;
        ensure(report.intertwining.max_abs < 1e-10, || format!("instance {it}: {}", report.intertwining.max_abs))?;
        ensure(report.w_unitarity.max_abs < 1e-12, || format!("instance {it}: W not unitary"))?;
        count += report.pairs;
    }
    Ok(format!("40 instances, {count} pairs, residual 0"))
}

fn criterion_6() -> Outcome {
    let theta = SkewMatrix::from_upper_fn(3, |i, j| Real::ratio(1 + (i + j) as i64, 7));
    let grid = [Real::zero(), Real::ratio(1, 4), Real::ratio(1, 2)];
    let mut seen = BTreeSet::new();
    for a in grid {
        for b in grid {
            for cc in grid {
                let x = [a, b, cc];
                let m = x.iter().filter(|v| **v == Real::ratio(1, 4)).count();
                let rr = x.iter().filter(|v| **v == Real::ratio(1, 2)).count();
                if m + rr <= 1 {
                    continue;
                }
                let d = fiber_descriptor(&theta, &x).map_err(|e| e.to_string())?;
                let want = 1u64 << (m + rr - 1);
                ensure(d.k0_rank == Some(want) && k0_rank(d.signature) == Ok(want), || {
                    format!("x = {x:?}: {:?} against {want}", d.k0_rank)
                })?;
                seen.insert(d.signature);
            }
        }
    }
    ensure(seen.len() == 7, || format!("{} signature classes", seen.len()))?;
    Ok(format!("{} signature classes with m + r > 1 match 2^(m+r-1)", seen.len()))
}

fn criterion_7() -> Outcome {
    let theta = Rational::new(1, 5);
    let at = |b| distinguish_trace_ranges(theta, 2, b).map_err(|e| e.to_string());
    let (r40, r80) = (at(40)?, at(80)?);
    ensure(r40.pairwise_distinct, || "sets coincide at B = 40".into())?;
    let expected: Vec<BTreeSet<Rational>> =
        [5i64, 10, 20].iter().map(|&d| (0..=d).map(|j| Rational::new(j, d)).collect()).collect();
    for (k, set) in r40.sets.iter().enumerate() {
        ensure(set.values == expected[k], || format!("set {k} differs from (1/{})ℤ ∩ [0,1]", [5, 10, 20][k]))?;
        ensure(set.values == r80.sets[k].values, || format!("set {k} changed between B = 40 and 80"))?;
    }
    Ok("three sets pairwise distinct, stable from B = 40 to 80".into())
}

fn criterion_8() -> Outcome {
    let vals = [Rational::new(1, 3), Rational::new(2, 3), Rational::new(1, 4), Rational::new(3, 4)];
    let mut table = String::new();
    for a in vals {
        for b in vals {
            let want =
                if (a - b).is_integer() || (a + b).is_integer() { Status::Isomorphic } else { Status::NotIsomorphic };
            let got = classify_n2(Real::Exact(a), Real::Exact(b), 1e-9).status;
            ensure(got == want, || format!("({a}, {b}): {got:?}"))?;
            table.push(if got == Status::Isomorphic { 'I' } else { '.' });
        }
        table.push('/');
    }
    Ok(format!("verdict table {table}"))
}

fn random_x(r: &mut ChaCha8Rng) -> Vec<Real> {
    (0..2).map(|_| Real::ratio(r.gen_range(0..=10), 20)).collect()
}

fn criterion_9() -> Outcome {
    let mut r = rng(9);
    let theta_for = |r: &mut ChaCha8Rng| {
        let q = r.gen_range(1..=5);
        SkewMatrix::two(Real::ratio(r.gen_range(0..q), q))
    };
    for it in 0..20 {
        let theta = theta_for(&mut r);
        let x = random_x(&mut r);
        let y = loop {
            let y = random_x(&mut r);
            if x.iter().zip(&y).any(|(a, b)| (a.to_f64() - b.to_f64()).abs() >= 0.1 - 1e-12) {
                break y;
            }
        };
        let (tx, ty) = (build_tau_x_irreducible(&theta, &x), build_tau_x_irreducible(&theta, &y));
        let (tx, ty) = (tx.map_err(|e| e.to_string())?, ty.map_err(|e| e.to_string())?);
        let dim = hom_space(&tx, &ty, 1e-9).map_err(|e| e.to_string())?.dimension;
        ensure(dim == 0, || format!("pair {it}: x = {x:?}, y = {y:?} gives dimension {dim}"))?;
    }
    for it in 0..20 {
        let theta = theta_for(&mut r);
        let tx = build_tau_x_irreducible(&theta, &random_x(&mut r)).map_err(|e| e.to_string())?;
        let u = random_unitary(tx.dim(), &mut r);
        let dim = hom_space(&tx, &tx.conjugated(&u).unwrap(), 1e-9).map_err(|e| e.to_string())?.dimension;
        ensure(dim == 1, || format!("unitary {it}: dimension {dim}"))?;
    }
    Ok("20 disjoint pairs, 20 conjugates with one-dimensional Hom".into())
}

fn criterion_10() -> Outcome {
    let mut r = rng(10);
    let mut blocks = [0usize; 3];
    for it in 0..30 {
        let theta = sample::rational_theta(&mut r, 2, 6);
        let x = sample::grid_point(&mut r, 2, 8);
        let rep = build_tau_x(&theta, &x, sigma_level(&theta, &x)).map_err(|e| e.to_string())?;
        let report = number_operator_spectra(&rep, 1e-10).map_err(|e| e.to_string())?;
        for (i, s) in report.indices.iter().enumerate() {
            let xi = x[i].to_f64();
            let (want, b): (Vec<f64>, usize) = if xi == 0.0 {
                (vec![0.0, 1.0], 0)
            } else if xi == 0.5 {
                (vec![0.5], 2)
            } else {
                (vec![xi, 1.0 - xi], 1)
            };
            blocks[b] += 1;
            ensure(s.spectrum.len() == want.len(), || format!("instance {it}, index {i}: {:?}", s.spectrum))?;
            ensure(s.spectrum.iter().zip(&want).all(|(a, b)| (a - b).abs() < 1e-10), || {
                format!("instance {it}, index {i}: {:?} against {want:?}", s.spectrum)
            })?;
        }
    }
    Ok(format!("L/M/R indices checked: {}/{}/{}", blocks[0], blocks[1], blocks[2]))
}

fn criterion_11() -> Outcome {
    let mut r = rng(11);
    let (xs, zs) = membership_grid(20, 40);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let len = r.gen_range(1..=6);
        let w = Word((0..len).map(|_| if r.gen_bool(0.5) { Letter::Gen(0) } else { Letter::Star(0) }).collect());
        worst = worst.max(word_membership(&w, &xs, &zs).map_err(|e| e.to_string())?.max_violation);
    }
    ensure(worst < 1e-10, || format!("violation {worst:e}"))?;
    let a: Word = "a1".parse().unwrap();
    let eps = 1e-3;
    let bump = CMatrix::from_row_slice(2, 2, &[c(eps, 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
    let control = check_b_membership(|x, z| spatial_h(&a, x, z).unwrap() + &bump, &xs, &zs);
    ensure(!control.holds(1e-10) && control.half_diagonal > 0.4 * eps, || "perturbation not flagged".into())?;
    Ok(format!("50 words, worst {worst:.1e}; control flagged at {:.1e}", control.max_violation))
}

fn criterion_12() -> Outcome {
    let mut r = rng(12);
    let mut count = 0;
    for n in 2..=3 {
        for q in 1..=7 {
            for _ in 0..2 {
                let spec = TorusSpec::with_level(sample::level_theta(&mut r, n, q), q).unwrap();
                let res = doubled_torus_check(&torus_generators::<Cyclo>(&spec)).map_err(|e| e.to_string())?;
                ensure(res.exact, || format!("n = {n}, q = {q}: residual {}", res.max_abs))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} tori, residual exactly 0"))
}

/// `(PΘPᵀ)_ij` computed from the matrix product.
fn conjugate_by_hand(p: &SignedPermutation, theta: &SkewMatrix) -> Vec<Vec<Rational>> {
    let n = p.n();
    let pm = |i: usize, j: usize| -> i64 {
        if p.sigma[i] == j {
            if p.signs[i] == 1 {
                -1
            } else {
                1
            }
        } else {
            0
        }
    };
    let t = |i, j| theta.get(i, j).exact().unwrap();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = Rational::new(0, 1);
                    for k in 0..n {
                        for l in 0..n {
                            s += t(k, l) * pm(i, k) * pm(j, l);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn criterion_13() -> Outcome {
    let mut r = rng(13);
    for it in 0..20 {
        let n = r.gen_range(2..=5);
        let theta1 = sample::rational_theta(&mut r, n, 8);
        let p = sample::signed_permutation(&mut r, n);
        let theta2 = sample::preimage_under(&p, &theta1);
        ensure(conjugate_by_hand(&p, &theta2) == conjugate_by_hand(&SignedPermutation::identity(n), &theta1), || {
            format!("instance {it}: sampler broken")
        })?;
        let found = signed_perm_search(&theta1, &theta2, 1e-9).map_err(|e| e.to_string())?;
        let found = found.ok_or_else(|| format!("instance {it}: no witness"))?;
        let lhs = conjugate_by_hand(&found, &theta2);
        let rhs = conjugate_by_hand(&SignedPermutation::identity(n), &theta1);
        ensure(lhs == rhs && !found.mod_integer, || format!("instance {it}: witness {found:?} fails"))?;
    }
    Ok("20 witnesses satisfy P'Θ₂P'ᵀ = Θ₁ exactly".into())
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("CAR relations of the catalog", criterion_1),
        ("Fock twist", criterion_2),
        ("twist cocycle", criterion_3),
        ("double deformation", criterion_4),
        ("matrix deformation unitary", criterion_5),
        ("K0 ranks", criterion_6),
        ("trace-range distinguisher", criterion_7),
        ("two-generator table", criterion_8),
        ("equivalence of catalog members", criterion_9),
        ("number-operator spectra", criterion_10),
        ("spatial membership", criterion_11),
        ("doubled torus", criterion_12),
        ("signed-permutation certificates", criterion_13),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or(e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{secs:.2}s]", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{secs:.2}s]", k + 1);
            }
        }
    }
    println!("acceptance: {} of 13 passed", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
