//! Deformation of `M_n ⊗ A` along a product action, and the explicit
//! unitary that identifies it with `M_n ⊗ A^{Θ₂₂}`.
//!
//! The first `k` coordinates of `Θ` grade the matrix side, the last `m`
//! grade `A`. With `ω_l(s) = e^{2πi⟨Θ₂₁ε_l, s⟩}` and `U_z` acting on a
//! degree-`r` vector by `∏ z_l^{r_l}`,
//!
//! ```text
//! W(ξ ⊗ η) = U_{ω(s)} ξ ⊗ η                         (η of degree s)
//! W* twist_Θ(X ⊗ a) W = U_{ω(−q)} Ψ(X) U_{ω(−q)} ⊗ twist_{Θ₂₂}(a)
//! ```
//!
//! for `a` of degree `q`, where `Ψ = twist_{Θ₁₁}` on the matrix side.

use serde::Serialize;

use super::operator::{decompose_homogeneous, rieffel_twist, Degree, GradedOperator, GradedSpace};
use super::skew::SkewMatrix;
use crate::error::{Error, Result};
use crate::numerics::{Phase, Real, Residual, Scalar, SparseMat, DEFAULT_TOL};

/// `(ω₁(p), …, ω_k(p))`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OmegaVector {
    pub entries: Vec<Phase>,
}

impl OmegaVector {
    /// `∏ ω_l^{r_l}` as a phase.
    pub fn character(&self, r: &[i64]) -> Phase {
        assert_eq!(r.len(), self.entries.len());
        let s = self.entries.iter().zip(r).fold(Real::zero(), |acc, (w, &rl)| acc + w.value().scale(rl));
        Phase::from_real(s)
    }
}

/// `ω(p)` for the lower-left block `theta21` (`m` rows, `k` columns) and `p ∈ ℤ^m`.
pub fn build_omega(theta21: &[Vec<Real>], p: &[i64]) -> OmegaVector {
    assert_eq!(theta21.len(), p.len(), "ω argument has the wrong length");
    let k = theta21.first().map_or(0, Vec::len);
    let entries = (0..k)
        .map(|l| {
            let s = theta21.iter().zip(p).fold(Real::zero(), |acc, (row, &pj)| acc + row[l].scale(pj));
            Phase::from_real(s)
        })
        .collect();
    OmegaVector { entries }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatrixDeformationReport {
    pub pairs: usize,
    pub intertwining: Residual,
    pub w_unitarity: Residual,
}

fn phase_scalar<S: Scalar>(p: Phase) -> Result<S> {
    S::from_phase(p).ok_or_else(|| Error::NotExact(format!("phase {p} is approximate")))
}

/// Diagonal `U_{ω(t)}` on the matrix side.
fn u_omega<S: Scalar>(theta21: &[Vec<Real>], t: &[i64], space: &GradedSpace) -> Result<SparseMat<S>> {
    let w = build_omega(theta21, t);
    let diag = space.degrees().iter().map(|r| phase_scalar(w.character(r))).collect::<Result<Vec<S>>>()?;
    Ok(SparseMat::diagonal(diag))
}

fn single_space<'a, S: Scalar>(ops: &'a [GradedOperator<S>], side: &str) -> Result<&'a GradedSpace> {
    let first = ops.first().ok_or_else(|| Error::DimensionMismatch(format!("no {side} operators supplied")))?;
    if ops.iter().any(|o| o.space() != first.space()) {
        return Err(Error::DimensionMismatch(format!("{side} operators live on different spaces")));
    }
    Ok(first.space())
}

fn degree_of<S: Scalar>(op: &GradedOperator<S>, side: &str) -> Result<Degree> {
    op.homogeneous_degree().ok_or_else(|| Error::NonHomogeneousInput(format!("{side} operator has several components")))
}

/// Checks the intertwining identity over all pairs `(X, a)` and the
/// unitarity of `W`.
///
/// `matrix_ops` act on a ℤ^k-graded space, `torus_ops` on a space cyclic
/// mod `q`; `q·Θ` must be integral.
pub fn verify_matrix_deformation<S: Scalar>(
    theta: &SkewMatrix,
    matrix_ops: &[GradedOperator<S>],
    torus_ops: &[GradedOperator<S>],
) -> Result<MatrixDeformationReport> {
    let mspace = single_space(matrix_ops, "matrix")?;
    let aspace = single_space(torus_ops, "torus")?;
    let k = mspace.grade_dim();
    let m = aspace.grade_dim();
    if mspace.modulus().is_some() {
        return Err(Error::Domain("matrix side must carry a true ℤ^k grading".into()));
    }
    if k + m != theta.n() {
        return Err(Error::DimensionMismatch(format!(
            "gradings of rank {k} + {m} against a {0}x{0} deformation matrix",
            theta.n()
        )));
    }
    let q = aspace.modulus().ok_or_else(|| Error::Domain("torus side must be cyclically graded".into()))?;
    if !theta.integral_at(q, DEFAULT_TOL) {
        return Err(Error::IncompatibleCyclicGrading { modulus: q });
    }

    let theta11 = theta.restrict(&(0..k).collect::<Vec<_>>())?;
    let theta22 = theta.restrict(&(k..k + m).collect::<Vec<_>>())?;
    let theta21 = theta.block(k..k + m, 0..k);
    let joint = mspace.tensor(aspace, Some(q))?;

    // W is diagonal on e_r ⊗ e_s.
    let mut w_diag = Vec::with_capacity(joint.dim());
    for r in mspace.degrees() {
        for s in aspace.degrees() {
            w_diag.push(phase_scalar::<S>(build_omega(&theta21, s).character(r))?);
        }
    }
    let w = SparseMat::diagonal(w_diag);
    let w_adj = w.adjoint();
    let w_unitarity = w_adj.matmul(&w).residual(&SparseMat::identity(joint.dim()));

    let mut intertwining = Residual::zero_exact();
    let mut pairs = 0;
    let psi: Vec<_> = matrix_ops
        .iter()
        .map(|x| {
            degree_of(x, "matrix")?;
            rieffel_twist(x, &theta11).map(|t| t.matrix())
        })
        .collect::<Result<_>>()?;
    for a in torus_ops {
        let qa = degree_of(a, "torus")?;
        let neg: Degree = qa.iter().map(|v| -v).collect();
        let u = u_omega::<S>(&theta21, &neg, mspace)?;
        let a_twisted = rieffel_twist(a, &theta22)?.matrix();
        for (x, psi_x) in matrix_ops.iter().zip(&psi) {
            let tensor = x.matrix().kron(&a.matrix());
            let lhs_op = rieffel_twist(&decompose_homogeneous(&tensor, &joint)?, theta)?;
            let lhs = w_adj.matmul(&lhs_op.matrix()).matmul(&w);
            let rhs = u.matmul(psi_x).matmul(&u).kron(&a_twisted);
            intertwining = intertwining.merge(lhs.residual(&rhs));
            pairs += 1;
        }
    }
    Ok(MatrixDeformationReport { pairs, intertwining, w_unitarity })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_basics() {
        let t21 = vec![vec![Real::ratio(1, 3)]];
        assert_eq!(build_omega(&t21, &[0]).entries, vec![Phase::zero()]);
        assert_eq!(build_omega(&t21, &[1]).entries, vec![Phase::ratio(1, 3)]);
        let t21 = vec![vec![Real::ratio(1, 5), Real::ratio(2, 7)], vec![Real::ratio(3, 4), Real::ratio(-1, 6)]];
        let p1 = [2, -1];
        let p2 = [-3, 5];
        let sum = build_omega(&t21, &[p1[0] + p2[0], p1[1] + p2[1]]);
        let (a, b) = (build_omega(&t21, &p1), build_omega(&t21, &p2));
        for l in 0..2 {
            assert_eq!(sum.entries[l], a.entries[l] + b.entries[l]);
        }
    }
}
