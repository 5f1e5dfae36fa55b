//! One generator: the irreducibles `π_{x,φ}`, the spatial picture
//! `h(a)(x)(z) = z·[[0, √x], [√(1−x), 0]]`, membership in the fixed-point
//! algebra `𝓑`, and the fiber generators `ψ_x`.

use std::f64::consts::TAU;

use num::complex::Complex64;
use serde::Serialize;

use super::rep::{Letter, Word};
use crate::error::{Error, Result};
use crate::graded::SkewMatrix;
use crate::numerics::dense::{c, max_abs};
use crate::numerics::{CMatrix, Real, Scalar, SparseMat};
use crate::torus::{clock_shift, crossed_product_generators, torus_generators, TorusSpec};

fn check_unit_interval_half(x: f64) -> Result<()> {
    if !(0.0..=0.5).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1/2]")));
    }
    Ok(())
}

fn check_real_half(x: &Real) -> Result<()> {
    if x.is_negative() || x.cmp_value(&Real::ratio(1, 2)).is_gt() {
        return Err(Error::Domain(format!("x = {x} outside [0, 1/2]")));
    }
    Ok(())
}

/// `π_{x,φ}(a) = e^{iφ}·[[0, √x], [√(1−x), 0]]`, or the one-dimensional
/// `ρ_φ(a) = e^{iφ}/√2` (as a `1×1` matrix) when `one_dim` is set, which
/// needs `x = ½`.
pub fn car1_irrep(x: f64, phi: f64, one_dim: bool) -> Result<CMatrix> {
    check_unit_interval_half(x)?;
    let z = Complex64::from_polar(1.0, phi);
    if one_dim {
        if x != 0.5 {
            return Err(Error::Domain("the one-dimensional irreducible sits at x = 1/2".into()));
        }
        return Ok(CMatrix::from_element(1, 1, z / 2f64.sqrt()));
    }
    Ok(CMatrix::from_row_slice(2, 2, &[c(0., 0.), z * x.sqrt(), z * (1.0 - x).sqrt(), c(0., 0.)]))
}

/// `h(w)(x)(z)` for a word in the single generator `a` (`a1` / `A1`).
pub fn spatial_h(word: &Word, x: f64, z: Complex64) -> Result<CMatrix> {
    check_unit_interval_half(x)?;
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("|z| = {} is not 1", z.norm())));
    }
    if let Some(i) = word.max_index().filter(|&i| i > 0) {
        return Err(Error::IndexOutOfRange { index: i + 1, n: 1 });
    }
    let a = CMatrix::from_row_slice(2, 2, &[c(0., 0.), z * x.sqrt(), z * (1.0 - x).sqrt(), c(0., 0.)]);
    word.evaluate(&[a])
}

/// Worst violation of each defining condition of `𝓑` on a grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BMembershipReport {
    /// `f(x)(z) = W f(x)(−z) W*`, `0 < x < ½`.
    pub interior_symmetry: f64,
    /// `f(0)(z) = W(z) f(0)(1) W(z)*`.
    pub corner_zero: f64,
    /// `V* f(½)(z) V` is diagonal.
    pub half_diagonal: f64,
    /// `f(½)(z) = W f(½)(−z) W*`.
    pub half_symmetry: f64,
    pub max_violation: f64,
    pub samples: usize,
}

impl BMembershipReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_violation < tol
    }
}

/// `nx` evenly spaced points of `[0, ½]` (both ends included) and `nz`
/// roots of unity; even `nz` makes the `z` grid closed under negation.
pub fn membership_grid(nx: usize, nz: usize) -> (Vec<f64>, Vec<Complex64>) {
    let xs = (0..nx).map(|k| 0.5 * k as f64 / (nx.max(2) - 1) as f64).collect();
    let zs = (0..nz).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / nz as f64)).collect();
    (xs, zs)
}

fn diag2(a: Complex64, b: Complex64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[a, c(0., 0.), c(0., 0.), b])
}

/// Evaluates the four membership conditions of `𝓑` for a sampled function.
pub fn check_b_membership<F>(f: F, xs: &[f64], zs: &[Complex64]) -> BMembershipReport
where
    F: Fn(f64, Complex64) -> CMatrix,
{
    let w = diag2(c(1., 0.), c(-1., 0.));
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = CMatrix::from_row_slice(2, 2, &[c(s, 0.), c(s, 0.), c(s, 0.), c(-s, 0.)]);
    let mut rep = BMembershipReport {
        interior_symmetry: 0.0,
        corner_zero: 0.0,
        half_diagonal: 0.0,
        half_symmetry: 0.0,
        max_violation: 0.0,
        samples: 0,
    };
    let symmetry = |x: f64, z: Complex64| max_abs(&(f(x, z) - &w * f(x, -z) * w.adjoint()));
    for &x in xs {
        for &z in zs {
            rep.samples += 1;
            if x == 0.0 {
                let wz = diag2(c(1., 0.), z);
                let d = f(0.0, z) - &wz * f(0.0, c(1., 0.)) * wz.adjoint();
                rep.corner_zero = rep.corner_zero.max(max_abs(&d));
            } else if x == 0.5 {
                let m = v.adjoint() * f(0.5, z) * &v;
                rep.half_diagonal = rep.half_diagonal.max(m[(0, 1)].norm().max(m[(1, 0)].norm()));
                rep.half_symmetry = rep.half_symmetry.max(symmetry(x, z));
            } else {
                rep.interior_symmetry = rep.interior_symmetry.max(symmetry(x, z));
            }
        }
    }
    rep.max_violation = rep.interior_symmetry.max(rep.corner_zero).max(rep.half_diagonal).max(rep.half_symmetry);
    rep
}

/// Membership report for the image of a word.
pub fn word_membership(word: &Word, xs: &[f64], zs: &[Complex64]) -> Result<BMembershipReport> {
    if word.0.iter().any(|l| !matches!(l, Letter::Gen(0) | Letter::Star(0))) {
        return Err(Error::IndexOutOfRange { index: word.max_index().unwrap_or(0) + 1, n: 1 });
    }
    for &x in xs {
        check_unit_interval_half(x)?;
    }
    Ok(check_b_membership(|x, z| spatial_h(word, x, z).expect("arguments validated"), xs, zs))
}

/// Image of `h(a)(x)` in the fiber at `x`:
/// `x = 0` gives the Clifford generator on `ℂ²`, `0 < x < ½` gives
/// `(u/2)((√(1−x)+√x) + (√(1−x)−√x) v)` in the level-`q` crossed product,
/// `x = ½` gives `S_q/√2`.
pub fn fiber_generator_psi<S: Scalar>(x: Real, q: u64) -> Result<SparseMat<S>> {
    check_real_half(&x)?;
    if q == 0 {
        return Err(Error::Domain("torus level must be positive".into()));
    }
    let sqrt = |r: Real| S::sqrt_real(r).ok_or_else(|| Error::NotExact(format!("√{r} needs a float path")));
    if x.is_zero() {
        let mut e = SparseMat::zeros(2, 2);
        e.set(1, 0, S::one());
        return Ok(e);
    }
    if x == Real::ratio(1, 2) || matches!(x, Real::Approx(v) if v == 0.5) {
        let (_, shift) = clock_shift::<S>(q);
        return Ok(shift.scale(&sqrt(Real::ratio(1, 2))?));
    }
    let spec = TorusSpec::with_level(SkewMatrix::zeros(1), q)?;
    let cp = crossed_product_generators(&torus_generators::<S>(&spec), &[0])?;
    let (u, v) = (&cp.us[0], &cp.vs[0]);
    let (sx, sy) = (sqrt(x)?, sqrt(Real::int(1) - x)?);
    let half = S::from_real(Real::ratio(1, 2)).expect("rational");
    let id = SparseMat::identity(u.rows());
    let inner = id.scale(&sy.plus(&sx)).add(&v.scale(&sy.minus(&sx)));
    Ok(u.matmul(&inner).scale(&half))
}
