use std::collections::BTreeMap;

use num::complex::Complex64;

use super::skew::SkewMatrix;
use crate::error::{Error, Result};
use crate::numerics::{Phase, Real, Residual, Scalar, SparseMat, DEFAULT_TOL};

/// ℤⁿ-degree of a basis vector or of a homogeneous operator.
pub type Degree = Vec<i64>;

/// Finite-dimensional space with a degree attached to every basis vector.
///
/// With a cyclic modulus `q` the degrees live in `(ℤ/q)ⁿ` and are stored as
/// representatives in `[0, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    grade_dim: usize,
    degrees: Vec<Degree>,
    modulus: Option<u64>,
}

fn reduce(v: i64, q: u64) -> i64 {
    v.rem_euclid(q as i64)
}

impl GradedSpace {
    pub fn new(grade_dim: usize, degrees: Vec<Degree>, modulus: Option<u64>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::DimensionMismatch("graded space of dimension 0".into()));
        }
        if let Some(d) = degrees.iter().find(|d| d.len() != grade_dim) {
            return Err(Error::DimensionMismatch(format!("degree {d:?} has length {}, expected {grade_dim}", d.len())));
        }
        if let Some(q) = modulus {
            if q == 0 {
                return Err(Error::Domain("cyclic modulus must be positive".into()));
            }
            if degrees.iter().flatten().any(|&v| v < 0 || v >= q as i64) {
                return Err(Error::Domain(format!("cyclic degrees must lie in [0, {q})")));
            }
        }
        Ok(GradedSpace { grade_dim, degrees, modulus })
    }

    /// `(ℂ²)^{⊗n}` graded factorwise: basis index `b` of slot `k` contributes
    /// `factor_degrees[b]` to coordinate `k`.
    pub fn two_level(n: usize, factor_degrees: [i64; 2]) -> Self {
        let degrees =
            (0..1usize << n).map(|idx| (0..n).map(|k| factor_degrees[(idx >> (n - 1 - k)) & 1]).collect()).collect();
        GradedSpace { grade_dim: n, degrees, modulus: None }
    }

    /// Clifford picture: `f₀, f₋₁` of degrees `0, −1`, so `e = E₀₁` has degree `+1`.
    pub fn fermionic(n: usize) -> Self {
        GradedSpace::two_level(n, [0, -1])
    }

    /// Fock picture: basis index 0 is the occupied vector (degree `−1`), so
    /// `a = E₁₀` has degree `+1`.
    pub fn fock(n: usize) -> Self {
        GradedSpace::two_level(n, [-1, 0])
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn grade_dim(&self) -> usize {
        self.grade_dim
    }

    pub fn degrees(&self) -> &[Degree] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> &Degree {
        &self.degrees[i]
    }

    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    /// Normal form of a degree (reduced mod `q` in cyclic mode).
    pub fn normalize(&self, p: &[i64]) -> Degree {
        match self.modulus {
            Some(q) => p.iter().map(|&v| reduce(v, q)).collect(),
            None => p.to_vec(),
        }
    }

    /// Degree of the matrix unit `E_ij`.
    pub fn unit_degree(&self, i: usize, j: usize) -> Degree {
        let d: Degree = self.degrees[i].iter().zip(&self.degrees[j]).map(|(a, b)| a - b).collect();
        self.normalize(&d)
    }

    /// Graded tensor product; the result is cyclic mod `q` if `q` is given,
    /// with every degree reduced.
    pub fn tensor(&self, other: &GradedSpace, modulus: Option<u64>) -> Result<GradedSpace> {
        let degrees = self
            .degrees
            .iter()
            .flat_map(|a| {
                other.degrees.iter().map(move |b| {
                    let d: Degree = a.iter().chain(b).copied().collect();
                    match modulus {
                        Some(q) => d.iter().map(|&v| reduce(v, q)).collect(),
                        None => d,
                    }
                })
            })
            .collect();
        GradedSpace::new(self.grade_dim + other.grade_dim, degrees, modulus)
    }

    fn check_compatible(&self, theta: &SkewMatrix) -> Result<()> {
        if theta.n() != self.grade_dim {
            return Err(Error::DimensionMismatch(format!(
                "deformation matrix is {0}x{0}, grading has rank {1}",
                theta.n(),
                self.grade_dim
            )));
        }
        if let Some(q) = self.modulus {
            if !theta.integral_at(q, DEFAULT_TOL) {
                return Err(Error::IncompatibleCyclicGrading { modulus: q });
            }
        }
        Ok(())
    }
}

/// `e^{2πi⟨Θp, q⟩}` with `⟨Θp, q⟩ = qᵀΘp`.
pub fn homogeneous_phase(theta: &SkewMatrix, p: &[i64], q: &[i64]) -> Phase {
    let tp = theta.apply(p);
    let s = q.iter().zip(tp).filter(|(&qi, _)| qi != 0).fold(Real::zero(), |acc, (&qi, v)| acc + v.scale(qi));
    Phase::from_real(s)
}

fn scalar_phase<S: Scalar>(p: Phase) -> Result<S> {
    S::from_phase(p).ok_or_else(|| Error::NotExact(format!("phase {p} is approximate")))
}

/// Operator on a [`GradedSpace`], split into homogeneous components.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedOperator<S> {
    space: GradedSpace,
    components: BTreeMap<Degree, SparseMat<S>>,
}

/// Splits `matrix` into homogeneous parts: entry `(i, j)` goes to degree
/// `degrees[i] − degrees[j]`.
pub fn decompose_homogeneous<S: Scalar>(matrix: &SparseMat<S>, space: &GradedSpace) -> Result<GradedOperator<S>> {
    if matrix.rows() != space.dim() || matrix.cols() != space.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix on a space of dimension {}",
            matrix.rows(),
            matrix.cols(),
            space.dim()
        )));
    }
    let mut components: BTreeMap<Degree, SparseMat<S>> = BTreeMap::new();
    for (i, j, v) in matrix.entries() {
        components.entry(space.unit_degree(i, j)).or_insert_with(|| SparseMat::zeros(space.dim(), space.dim())).set(
            i,
            j,
            v.clone(),
        );
    }
    Ok(GradedOperator { space: space.clone(), components })
}

impl<S: Scalar> GradedOperator<S> {
    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn components(&self) -> &BTreeMap<Degree, SparseMat<S>> {
        &self.components
    }

    /// Sum of the components.
    pub fn matrix(&self) -> SparseMat<S> {
        let d = self.space.dim();
        self.components.values().fold(SparseMat::zeros(d, d), |acc, m| acc.add(m))
    }

    /// The degree if the operator has at most one component (zero counts as
    /// homogeneous of degree 0).
    pub fn homogeneous_degree(&self) -> Option<Degree> {
        match self.components.len() {
            0 => Some(vec![0; self.space.grade_dim()]),
            1 => self.components.keys().next().cloned(),
            _ => None,
        }
    }

    pub fn adjoint(&self) -> GradedOperator<S> {
        let components = self
            .components
            .iter()
            .map(|(p, m)| {
                let neg: Degree = p.iter().map(|v| -v).collect();
                (self.space.normalize(&neg), m.adjoint())
            })
            .collect();
        GradedOperator { space: self.space.clone(), components }
    }

    pub fn to_complex(&self) -> GradedOperator<Complex64> {
        GradedOperator {
            space: self.space.clone(),
            components: self.components.iter().map(|(p, m)| (p.clone(), m.to_complex())).collect(),
        }
    }
}

/// Rieffel twist: the degree-`p` component has column `j` multiplied by
/// `e^{2πi⟨Θp, deg(j)⟩}`.
pub fn rieffel_twist<S: Scalar>(op: &GradedOperator<S>, theta: &SkewMatrix) -> Result<GradedOperator<S>> {
    op.space.check_compatible(theta)?;
    let mut components = BTreeMap::new();
    for (p, m) in &op.components {
        let mut factors = Vec::with_capacity(op.space.dim());
        for q in op.space.degrees() {
            factors.push(scalar_phase::<S>(homogeneous_phase(theta, p, q))?);
        }
        let twisted = m.map_entries(|_, j, v| v.times(&factors[j]));
        components.insert(p.clone(), twisted);
    }
    Ok(GradedOperator { space: op.space.clone(), components })
}

/// `‖twist(twist(op, Θ), −Θ) − op‖`.
pub fn check_double_deformation<S: Scalar>(op: &GradedOperator<S>, theta: &SkewMatrix) -> Result<Residual> {
    let back = rieffel_twist(&rieffel_twist(op, theta)?, &theta.neg())?;
    Ok(back.matrix().residual(&op.matrix()))
}
