//! The irreducible catalog `τ_x`, `x ∈ [0, ½]ⁿ`.
//!
//! Layout: `(ℂ²)^{⊗|L|} ⊗ (ℂ²)^{⊗|M|} ⊗ H`, each block in ascending index
//! order, with `H` carrying unitaries `v_k` (ordered `M` then `R`) for the
//! torus with parameter `Σ`. Writing `P_k(c) = e_k e_k* + c e_k* e_k` and
//! `Q_k(c) = c e_k e_k* + e_k* e_k`:
//!
//! ```text
//! i ∈ L:  ∏_{k∈L, k<i} P_k(e^{πiΘ_ik}) e_i ∏_{k∈L, k>i} P_k(e^{πiΘ_ik}) ⊗ 1 ⊗ 1
//! i ∈ M:  ∏_{k∈L} P_k(e^{2πiΘ_ik}) ⊗ ∏_{k∈M, k<i} Q_k(e^{2πiΘ_ik})
//!           · (√x_i ∏_{k∈M, k>i} Q_k(e^{4πiΘ_ik}) e_i ⊗ v_i + √(1−x_i) e_i* ⊗ 1)
//! i ∈ R:  ∏_{k∈L} P_k(e^{2πiΘ_ik}) ⊗ ∏_{k∈M} Q_k(e^{2πiΘ_ik}) ⊗ v_i/√2
//! ```

use num::complex::Complex64;
use num::Integer;

use super::rep::{CarRep, Generators, Provenance};
use crate::error::{Error, Result};
use crate::fibers::{face_signature, sigma_matrix, FiberPoint};
use crate::graded::SkewMatrix;
use crate::numerics::{Cyclo, Phase, Real, Scalar, SparseMat, DEFAULT_TOL};
use crate::torus::{clock_shift, phase_scalar, torus_generators, TorusSpec};

/// Largest level tried when a float `Σ` has to be recognised as rational.
const MAX_LEVEL_SEARCH: u64 = 10_000;

/// Which representation of the `Σ`-torus sits in `H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorusChoice {
    /// Standard representation on `(ℂ^q)^{⊗(m+r)}`.
    Level(u64),
    /// An irreducible representation; available for `m + r ≤ 2`.
    Irreducible,
}

fn smallest_level(sigma: &SkewMatrix) -> Option<u64> {
    if let Some(d) = sigma.denominator() {
        return Some(d as u64);
    }
    (1..=MAX_LEVEL_SEARCH).find(|&q| sigma.integral_at(q, DEFAULT_TOL))
}

/// `Σ` rounded to an exact matrix with denominator dividing `q`.
fn rational_sigma(sigma: &SkewMatrix, q: u64) -> Result<SkewMatrix> {
    if sigma.is_exact() {
        return TorusSpec::with_level(sigma.clone(), q).map(|s| s.theta().clone());
    }
    if q == 0 || !sigma.integral_at(q, DEFAULT_TOL) {
        let required = smallest_level(sigma).unwrap_or(0);
        return Err(Error::IncompatibleDenominator { q, required });
    }
    Ok(sigma.map(|_, _, v| {
        let k = v.scale(q as i64).as_integer(DEFAULT_TOL).expect("checked integral");
        Real::ratio(k, q as i64)
    }))
}

/// An irreducible representation of the rational torus of rank `≤ 2`.
fn irreducible_torus<S: Scalar>(sigma: &SkewMatrix) -> Result<Vec<SparseMat<S>>> {
    match sigma.n() {
        0 => Ok(vec![]),
        1 => Ok(vec![SparseMat::identity(1)]),
        2 => {
            let s = sigma.get(0, 1).exact().expect("rational Σ");
            let (p, q) = (s.numer().mod_floor(s.denom()), *s.denom());
            let (clock, shift) = clock_shift::<S>(q as u64);
            Ok(vec![shift, clock.pow(p as u32)])
        }
        k => Err(Error::NotApplicable(format!("irreducible torus representations are built for rank ≤ 2, not {k}"))),
    }
}

fn diag2<S: Scalar>(a: S, b: S) -> SparseMat<S> {
    SparseMat::diagonal(vec![a, b])
}

struct Assembler<'a> {
    theta: &'a SkewMatrix,
    point: &'a FiberPoint,
}

impl Assembler<'_> {
    /// `e^{2πi·f·Θ_ik}`.
    fn phase<S: Scalar>(&self, i: usize, k: usize, f: Real) -> Result<S> {
        phase_scalar(Phase::from_real(f * self.theta.get(i, k)))
    }

    fn l_part<S: Scalar>(&self, i: usize, f: Real, e: &SparseMat<S>) -> Result<SparseMat<S>> {
        let factors = self
            .point
            .l
            .iter()
            .map(|&k| if k == i { Ok(e.clone()) } else { Ok(diag2(S::one(), self.phase(i, k, f)?)) })
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseMat::kron_all(&factors))
    }

    /// Product over `k ∈ M` of `Q_k(e^{2πi·f·Θ_ik})` where `pick(k)` holds,
    /// `slot` at `i`'s own position, identity elsewhere.
    fn m_part<S: Scalar>(
        &self,
        i: usize,
        f: Real,
        pick: impl Fn(usize) -> bool,
        slot: Option<&SparseMat<S>>,
    ) -> Result<SparseMat<S>> {
        let factors = self
            .point
            .m
            .iter()
            .map(|&k| match slot {
                Some(op) if k == i => Ok(op.clone()),
                _ if pick(k) => Ok(diag2(self.phase(i, k, f)?, S::one())),
                _ => Ok(SparseMat::identity(2)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SparseMat::kron_all(&factors))
    }

    fn generators<S: Scalar>(&self, torus: &[SparseMat<S>]) -> Result<Vec<SparseMat<S>>> {
        let p = self.point;
        let hdim = torus.first().map_or(1, SparseMat::rows);
        let id_h = SparseMat::<S>::identity(hdim);
        let id_l = SparseMat::<S>::identity(1 << p.l.len());
        let id_m = SparseMat::<S>::identity(1 << p.m.len());
        let mut e = SparseMat::zeros(2, 2);
        e.set(0, 1, S::one());
        let e_star = e.adjoint();
        let sqrt = |r: Real| S::sqrt_real(r).ok_or_else(|| Error::NotExact(format!("√{r} needs a float path")));
        let (one, two) = (Real::int(1), Real::int(2));

        (0..p.n())
            .map(|i| {
                if p.l.contains(&i) {
                    let l = self.l_part(i, Real::ratio(1, 2), &e)?;
                    Ok(l.kron(&id_m).kron(&id_h))
                } else if let Some(pos) = p.m.iter().position(|&k| k == i) {
                    let l = self.l_part(i, one, &e)?;
                    let x = p.coordinate(i);
                    let f1 = self.m_part(i, one, |k| k < i, None)?;
                    let g = self.m_part(i, two, |k| k > i, Some(&e))?;
                    let ei_star = self.m_part(i, one, |_| false, Some(&e_star))?;
                    let hop = g.kron(&torus[pos]).scale(&sqrt(x)?);
                    let stay = ei_star.kron(&id_h).scale(&sqrt(one - x)?);
                    Ok(l.kron(&f1.kron(&id_h).matmul(&hop.add(&stay))))
                } else {
                    let pos = p.m.len() + p.r.iter().position(|&k| k == i).expect("partition covers i");
                    let l = self.l_part(i, one, &id_l)?;
                    let m = self.m_part(i, one, |_| true, None)?;
                    Ok(l.kron(&m).kron(&torus[pos].scale(&sqrt(Real::ratio(1, 2))?)))
                }
            })
            .collect()
    }
}

fn build<S: Scalar>(
    theta: &SkewMatrix,
    point: &FiberPoint,
    sigma: &SkewMatrix,
    choice: TorusChoice,
) -> Result<Vec<SparseMat<S>>> {
    let torus = match choice {
        TorusChoice::Level(q) => torus_generators::<S>(&TorusSpec::with_level(sigma.clone(), q)?).generators,
        TorusChoice::Irreducible => irreducible_torus::<S>(sigma)?,
    };
    Assembler { theta, point }.generators(&torus)
}

/// `τ_x` with the torus part chosen by `choice`. Exact when `Θ` and `x` are.
pub fn build_tau_x_with(theta: &SkewMatrix, x: &[Real], choice: TorusChoice) -> Result<CarRep> {
    let n = theta.n();
    if x.len() != n {
        return Err(Error::DimensionMismatch(format!("{} coordinates for n = {n}", x.len())));
    }
    let point = face_signature(x)?;
    let raw_sigma = sigma_matrix(theta, &point.m, &point.r)?;
    let (sigma, level) = match choice {
        TorusChoice::Level(q) => (rational_sigma(&raw_sigma, q)?, Some(q)),
        TorusChoice::Irreducible => {
            let q = smallest_level(&raw_sigma).ok_or(Error::IncompatibleDenominator { q: 0, required: 0 })?;
            (rational_sigma(&raw_sigma, q)?, None)
        }
    };
    let exact = theta.is_exact() && (0..n).all(|i| point.coordinate(i).is_exact());
    let generators = if exact {
        Generators::Exact(build::<Cyclo>(theta, &point, &sigma, choice)?)
    } else {
        Generators::Approx(build::<Complex64>(theta, &point, &sigma, choice)?)
    };
    Ok(CarRep {
        theta: theta.clone(),
        generators,
        provenance: Provenance::TauX,
        point: Some(point),
        torus_level: level,
    })
}

/// `τ_x` with the standard level-`q` torus representation.
pub fn build_tau_x(theta: &SkewMatrix, x: &[Real], q: u64) -> Result<CarRep> {
    build_tau_x_with(theta, x, TorusChoice::Level(q))
}

/// `τ_x` with an irreducible torus part, so the result is irreducible.
pub fn build_tau_x_irreducible(theta: &SkewMatrix, x: &[Real]) -> Result<CarRep> {
    build_tau_x_with(theta, x, TorusChoice::Irreducible)
}

/// Least level the standard construction accepts at `x`.
pub fn minimal_level(theta: &SkewMatrix, x: &[Real]) -> Result<u64> {
    let point = face_signature(x)?;
    let sigma = sigma_matrix(theta, &point.m, &point.r)?;
    smallest_level(&sigma).ok_or(Error::IncompatibleDenominator { q: 0, required: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::car::verify_car_relations;

    fn pt(v: &[(i64, i64)]) -> Vec<Real> {
        v.iter().map(|&(p, q)| Real::ratio(p, q)).collect()
    }

    #[test]
    fn examples() {
        let t = SkewMatrix::two(Real::ratio(1, 4));
        let rep = build_tau_x(&t, &pt(&[(1, 4), (1, 2)]), 4).unwrap();
        let report = verify_car_relations(&rep, 0.0);
        assert!(report.exact, "{:?}", report.relations.iter().filter(|r| !r.residual.exact).collect::<Vec<_>>());
        let zero = build_tau_x(&t, &pt(&[(0, 1), (0, 1)]), 1).unwrap();
        assert_eq!(zero.dim(), 4);
        assert!(verify_car_relations(&zero, 0.0).exact);
    }

    #[test]
    fn every_face_exact() {
        let theta = SkewMatrix::from_upper_fn(3, |i, j| Real::ratio(1 + i as i64 + j as i64, 6));
        let grid = [(0, 1), (1, 8), (3, 8), (1, 2)];
        for a in grid {
            for b in grid {
                for c in grid {
                    let x = pt(&[a, b, c]);
                    let q = minimal_level(&theta, &x).unwrap();
                    let rep = build_tau_x(&theta, &x, q).unwrap();
                    let report = verify_car_relations(&rep, 0.0);
                    assert!(
                        report.exact,
                        "x = {x:?}: {:?}",
                        report
                            .relations
                            .iter()
                            .filter(|r| !r.residual.exact)
                            .map(|r| (r.kind, r.i, r.j))
                            .collect::<Vec<_>>()
                    );
                }
            }
        }
    }

    #[test]
    fn level_mismatch() {
        let t = SkewMatrix::two(Real::ratio(1, 3));
        let x = pt(&[(1, 4), (1, 4)]);
        assert!(matches!(build_tau_x(&t, &x, 2), Err(Error::IncompatibleDenominator { q: 2, required: 3 })));
        assert!(build_tau_x(&t, &x, 6).is_ok());
    }

    #[test]
    fn float_path() {
        let t = SkewMatrix::two(Real::Approx(0.25));
        let rep = build_tau_x(&t, &[Real::Approx(0.2), Real::Approx(0.5)], 2).unwrap();
        let report = verify_car_relations(&rep, 1e-10);
        assert!(report.pass && !report.exact);
        assert!(build_tau_x(&SkewMatrix::two(Real::Approx(0.2)), &[Real::Approx(0.2), Real::Approx(0.3)], 4).is_err());
    }

    #[test]
    fn irreducible_dimensions() {
        let t = SkewMatrix::two(Real::ratio(2, 5));
        let rep = build_tau_x_irreducible(&t, &pt(&[(1, 2), (1, 2)])).unwrap();
        assert_eq!(rep.dim(), 5);
        assert!(verify_car_relations(&rep, 0.0).exact);
        let rep = build_tau_x_irreducible(&t, &pt(&[(1, 10), (0, 1)])).unwrap();
        assert_eq!(rep.dim(), 4);
        assert!(verify_car_relations(&rep, 0.0).exact);
    }
}
