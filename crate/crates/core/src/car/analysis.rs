//! Spectra of the number operators `a_i* a_i` and intertwiner spaces.

use serde::Serialize;

use super::rep::CarRep;
use crate::error::{Error, Result};
use crate::fibers::Block;
use crate::numerics::dense::{kron, psd_kernel};
use crate::numerics::{hermitian_spectrum, CMatrix};

/// Eigenvalues closer than this are reported once.
const CLUSTER_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IndexSpectrum {
    pub index: usize,
    pub block: Block,
    /// Distinct eigenvalues of `a_i* a_i`, ascending.
    pub spectrum: Vec<f64>,
    pub expected: Vec<f64>,
    pub within_expected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectraReport {
    pub indices: Vec<IndexSpectrum>,
    pub tol: f64,
    pub pass: bool,
    pub notes: Vec<String>,
}

fn distinct(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::new();
    for v in values {
        if out.last().is_none_or(|&w| v - w > CLUSTER_TOL) {
            out.push(v);
        }
    }
    out
}

/// For a representation from the `τ_x` catalog: the spectrum of `a_i* a_i`
/// lies in `{0, 1}` on `L`, in `{x_i, 1 − x_i}` on `M`, and equals `{½}` on `R`.
pub fn number_operator_spectra(rep: &CarRep, tol: f64) -> Result<SpectraReport> {
    let point = rep
        .point
        .as_ref()
        .ok_or_else(|| Error::NotApplicable("number operator spectra need a catalog point".into()))?;
    let mut indices = Vec::new();
    let mut notes = Vec::new();
    for (i, a) in rep.dense_generators().iter().enumerate() {
        let block = point.block_of(i);
        let spectrum = distinct(hermitian_spectrum(&(a.adjoint() * a), tol.max(1e-12))?);
        let expected = match block {
            Block::L => vec![0.0, 1.0],
            Block::M => {
                let x = point.coordinate(i).to_f64();
                vec![x, 1.0 - x]
            }
            Block::R => vec![0.5],
        };
        let within_expected = spectrum.iter().all(|s| expected.iter().any(|e| (s - e).abs() < tol));
        if block == Block::R {
            notes.push(format!(
                "index {i}: a_i*a_i = 1/2 on the R block, not the identity factor the closed formula displays"
            ));
        }
        indices.push(IndexSpectrum { index: i, block, spectrum, expected, within_expected });
    }
    let pass = indices.iter().all(|s| s.within_expected);
    Ok(SpectraReport { indices, tol, pass, notes })
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomSpace {
    pub dimension: usize,
    /// Frobenius-orthonormal intertwiners `C` (`dim₁ × dim₂`).
    pub basis: Vec<CMatrix>,
}

/// `{C : π₁(a_i) C = C π₂(a_i), π₁(a_i)* C = C π₂(a_i)*}`.
pub fn hom_space(rep1: &CarRep, rep2: &CarRep, tol: f64) -> Result<HomSpace> {
    if rep1.n() != rep2.n() {
        return Err(Error::DimensionMismatch(format!("{} generators against {}", rep1.n(), rep2.n())));
    }
    let (d1, d2) = (rep1.dim(), rep2.dim());
    let (id1, id2) = (CMatrix::identity(d1, d1), CMatrix::identity(d2, d2));
    let (g1, g2) = (rep1.dense_generators(), rep2.dense_generators());
    // Column-major vec: vec(A C) = (I ⊗ A) vec C, vec(C B) = (Bᵀ ⊗ I) vec C.
    let mut gram = CMatrix::zeros(d1 * d2, d1 * d2);
    for (a, b) in g1.iter().zip(&g2) {
        for (a, b) in [(a.clone(), b.clone()), (a.adjoint(), b.adjoint())] {
            let k = kron(&b.transpose(), &id1) - kron(&id2, &a);
            gram += k.adjoint() * k;
        }
    }
    let scale = gram.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let kernel = psd_kernel(&gram, tol * scale);
    let basis = kernel
        .column_iter()
        .map(|col| {
            let pivot = col.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap_or_default();
            let gauge = if pivot.norm() > 0.0 { pivot.conj() / pivot.norm() } else { 1.0.into() };
            CMatrix::from_column_slice(d1, d2, col.scale(1.0).as_slice()).map(|z| z * gauge)
        })
        .collect::<Vec<_>>();
    Ok(HomSpace { dimension: basis.len(), basis })
}
