use nalgebra::DMatrix;
use num::complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Error;

/// Dense complex matrix.
pub type CMatrix = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Largest entry modulus of `a − b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

/// `‖A − A*‖_max`.
pub fn hermitian_defect(a: &CMatrix) -> f64 {
    max_abs_diff(a, &a.adjoint())
}

/// `‖U*U − I‖_max`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(u.ncols(), u.ncols()))
}

/// Eigenvalues of a Hermitian matrix with multiplicity, ascending.
pub fn hermitian_spectrum(a: &CMatrix, tol: f64) -> Result<Vec<f64>, Error> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("spectrum of a {}x{} matrix", a.nrows(), a.ncols())));
    }
    let defect = hermitian_defect(a);
    if defect > tol {
        return Err(Error::NonHermitian(defect));
    }
    let herm = (a + a.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Orthonormal basis (as columns) of the eigenspace of the Hermitian PSD
/// matrix `g` for eigenvalues below `tol`.
pub fn psd_kernel(g: &CMatrix, tol: f64) -> CMatrix {
    let herm = (g + g.adjoint()).scale(0.5);
    let eig = herm.symmetric_eigen();
    let cols: Vec<_> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &v)| v.abs() <= tol)
        .map(|(k, _)| eig.eigenvectors.column(k).into_owned())
        .collect();
    if cols.is_empty() {
        CMatrix::zeros(g.nrows(), 0)
    } else {
        CMatrix::from_columns(&cols)
    }
}

/// Haar-ish random unitary from the QR decomposition of a Gaussian-like matrix.
pub fn random_unitary(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    // Fix column phases so the distribution does not favour the QR gauge.
    let d = CMatrix::from_fn(dim, dim, |i, j| {
        if i == j && r[(i, i)].norm() > 0.0 {
            r[(i, i)] / r[(i, i)].norm()
        } else if i == j {
            c(1.0, 0.0)
        } else {
            c(0.0, 0.0)
        }
    });
    q * d
}

pub fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Row-major `[[[re, im], ...], ...]`.
pub fn matrix_json(m: &CMatrix) -> Value {
    Value::Array(
        (0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect())).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn flip() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    #[test]
    fn kron_identity_and_blocks() {
        let i2 = CMatrix::identity(2, 2);
        assert_eq!(kron(&i2, &i2), CMatrix::identity(4, 4));
        let z = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1., 0.), c(-1., 0.)]));
        let k = kron(&z, &flip());
        let mut expect = CMatrix::zeros(4, 4);
        expect.view_mut((0, 0), (2, 2)).copy_from(&flip());
        expect.view_mut((2, 2), (2, 2)).copy_from(&(-flip()));
        assert_eq!(k, expect);
    }

    #[test]
    fn spectra() {
        let p = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1., 0.), c(0., 0.)]));
        assert_eq!(hermitian_spectrum(&p, 1e-12).unwrap(), vec![0.0, 1.0]);
        let h = CMatrix::identity(2, 2).scale(0.5);
        assert_eq!(hermitian_spectrum(&h, 1e-12).unwrap(), vec![0.5, 0.5]);
        let e = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        assert!(matches!(hermitian_spectrum(&e, 1e-9), Err(Error::NonHermitian(_))));
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u = random_unitary(6, &mut rng);
        assert!(unitarity_defect(&u) < 1e-12);
    }

    #[test]
    fn kernel_of_projection() {
        let p = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1., 0.), c(0., 0.), c(2., 0.)]));
        let k = psd_kernel(&p, 1e-9);
        assert_eq!(k.ncols(), 1);
        assert!((k[(1, 0)].norm() - 1.0).abs() < 1e-12);
    }
}
