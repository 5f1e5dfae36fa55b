use std::collections::BTreeMap;

use num::complex::Complex64;
use serde::Serialize;

use super::dense::CMatrix;
use super::scalar::Scalar;

/// Row-major sparse matrix over a [`Scalar`].
///
/// All operators built by this crate have a handful of non-zeros per column,
/// so products stay cheap even on spaces of a few thousand dimensions.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMat<S> {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, S>>,
}

/// Size of `a − b`: the largest entry modulus, and whether the difference is
/// certified zero by exact arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Residual {
    pub max_abs: f64,
    pub exact: bool,
}

impl Residual {
    pub fn zero_exact() -> Self {
        Residual { max_abs: 0.0, exact: true }
    }

    pub fn merge(self, o: Residual) -> Residual {
        Residual { max_abs: self.max_abs.max(o.max_abs), exact: self.exact && o.exact }
    }

    pub fn within(&self, tol: f64) -> bool {
        self.exact || self.max_abs <= tol
    }
}

impl<S: Scalar> SparseMat<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMat { rows, cols, data: vec![BTreeMap::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i].insert(i, S::one());
        }
        m
    }

    /// Diagonal matrix.
    pub fn diagonal(entries: Vec<S>) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, v) in entries.into_iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&S> {
        self.data[i].get(&j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        if v.is_structurally_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    /// Iterates over stored `(row, col, value)` triples in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.data.iter().enumerate().flat_map(|(i, row)| row.iter().map(move |(&j, v)| (i, j, v)))
    }

    fn accumulate(&mut self, i: usize, j: usize, v: &S) {
        let row = &mut self.data[i];
        match row.get_mut(&j) {
            Some(e) => {
                *e = e.plus(v);
                if e.is_structurally_zero() {
                    row.remove(&j);
                }
            }
            None => {
                if !v.is_structurally_zero() {
                    row.insert(j, v.clone());
                }
            }
        }
    }

    pub fn matmul(&self, o: &SparseMat<S>) -> SparseMat<S> {
        assert_eq!(self.cols, o.rows, "matmul dimension mismatch");
        let mut out = SparseMat::zeros(self.rows, o.cols);
        for (i, row) in self.data.iter().enumerate() {
            for (&k, a) in row {
                for (&j, b) in &o.data[k] {
                    out.accumulate(i, j, &a.times(b));
                }
            }
        }
        out
    }

    pub fn add(&self, o: &SparseMat<S>) -> SparseMat<S> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "add dimension mismatch");
        let mut out = self.clone();
        for (i, j, v) in o.entries() {
            out.accumulate(i, j, v);
        }
        out
    }

    pub fn sub(&self, o: &SparseMat<S>) -> SparseMat<S> {
        self.add(&o.scale(&S::one().negated()))
    }

    pub fn scale(&self, c: &S) -> SparseMat<S> {
        let mut out = SparseMat::zeros(self.rows, self.cols);
        for (i, j, v) in self.entries() {
            out.set(i, j, v.times(c));
        }
        out
    }

    pub fn adjoint(&self) -> SparseMat<S> {
        let mut out = SparseMat::zeros(self.cols, self.rows);
        for (i, j, v) in self.entries() {
            out.data[j].insert(i, v.conj());
        }
        out
    }

    pub fn kron(&self, o: &SparseMat<S>) -> SparseMat<S> {
        let mut out = SparseMat::zeros(self.rows * o.rows, self.cols * o.cols);
        for (i, j, a) in self.entries() {
            for (k, l, b) in o.entries() {
                out.set(i * o.rows + k, j * o.cols + l, a.times(b));
            }
        }
        out
    }

    /// Kronecker product of a sequence, `I₁` for an empty one.
    pub fn kron_all<'a, I>(factors: I) -> SparseMat<S>
    where
        I: IntoIterator<Item = &'a SparseMat<S>>,
    {
        factors.into_iter().fold(SparseMat::identity(1), |acc, f| acc.kron(f))
    }

    /// `a` multiplied by itself `k` times (`k ≥ 0`).
    pub fn pow(&self, k: u32) -> SparseMat<S> {
        (0..k).fold(SparseMat::identity(self.rows), |acc, _| acc.matmul(self))
    }

    /// Residual of `self − o`.
    pub fn residual(&self, o: &SparseMat<S>) -> Residual {
        let diff = self.sub(o);
        let mut exact = S::EXACT;
        let mut max_abs: f64 = 0.0;
        for (_, _, v) in diff.entries() {
            if S::EXACT && v.is_zero() {
                continue;
            }
            exact = false;
            max_abs = max_abs.max(v.to_complex().norm());
        }
        Residual { max_abs, exact }
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.rows, self.cols);
        for (i, j, v) in self.entries() {
            m[(i, j)] = v.to_complex();
        }
        m
    }

    pub fn to_complex(&self) -> SparseMat<Complex64> {
        let mut out = SparseMat::zeros(self.rows, self.cols);
        for (i, j, v) in self.entries() {
            out.set(i, j, v.to_complex());
        }
        out
    }

    /// Restrict to the given rows and columns (used for block extraction).
    pub fn map_entries<F>(&self, mut f: F) -> SparseMat<S>
    where
        F: FnMut(usize, usize, &S) -> S,
    {
        let mut out = SparseMat::zeros(self.rows, self.cols);
        for (i, j, v) in self.entries() {
            out.set(i, j, f(i, j, v));
        }
        out
    }
}

impl SparseMat<Complex64> {
    pub fn from_dense(m: &CMatrix) -> Self {
        let mut out = SparseMat::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.set(i, j, m[(i, j)]);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::cyclo::Cyclo;
    use crate::numerics::real::Rational;

    fn flip() -> SparseMat<Cyclo> {
        let mut x = SparseMat::zeros(2, 2);
        x.set(0, 1, Cyclo::one());
        x.set(1, 0, Cyclo::one());
        x
    }

    #[test]
    fn kron_block_structure() {
        let mut z = SparseMat::<Cyclo>::zeros(2, 2);
        z.set(0, 0, Cyclo::one());
        z.set(1, 1, -&Cyclo::one());
        let k = z.kron(&flip());
        assert_eq!(k.get(0, 1), Some(&Cyclo::one()));
        assert_eq!(k.get(2, 3), Some(&-&Cyclo::one()));
        assert_eq!(k.get(0, 3), None);
        assert_eq!(k.nnz(), 4);
    }

    #[test]
    fn exact_residual_detects_cancellation() {
        let w = Cyclo::root_of_unity(Rational::new(1, 3));
        let a = SparseMat::diagonal(vec![Cyclo::one(), w.clone(), &w * &w]);
        let r = a.matmul(&a).matmul(&a).residual(&SparseMat::identity(3));
        assert!(r.exact);
        assert_eq!(r.max_abs, 0.0);
    }

    #[test]
    fn adjoint_of_product() {
        let w = Cyclo::root_of_unity(Rational::new(1, 5));
        let mut a = SparseMat::zeros(2, 2);
        a.set(0, 1, w.clone());
        a.set(1, 1, Cyclo::sqrt(Rational::new(1, 2)).unwrap());
        let b = flip().matmul(&a);
        let lhs = b.adjoint();
        let rhs = a.adjoint().matmul(&flip().adjoint());
        assert!(lhs.residual(&rhs).exact);
    }
}
