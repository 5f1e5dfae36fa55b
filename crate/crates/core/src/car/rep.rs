use std::fmt;
use std::str::FromStr;

use num::complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fibers::FiberPoint;
use crate::graded::SkewMatrix;
use crate::numerics::dense::matrix_json;
use crate::numerics::{CMatrix, Cyclo, Phase, Residual, Scalar, SparseMat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Fock,
    TauX,
    FiberPsi,
    Custom,
}

/// Generator matrices, exact when every entry came from rational data.
#[derive(Clone, Debug, PartialEq)]
pub enum Generators {
    Exact(Vec<SparseMat<Cyclo>>),
    Approx(Vec<SparseMat<Complex64>>),
}

impl Generators {
    pub fn len(&self) -> usize {
        match self {
            Generators::Exact(g) => g.len(),
            Generators::Approx(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_complex(&self) -> Vec<SparseMat<Complex64>> {
        match self {
            Generators::Exact(g) => g.iter().map(SparseMat::to_complex).collect(),
            Generators::Approx(g) => g.clone(),
        }
    }

    pub fn to_dense(&self) -> Vec<CMatrix> {
        match self {
            Generators::Exact(g) => g.iter().map(SparseMat::to_dense).collect(),
            Generators::Approx(g) => g.iter().map(SparseMat::to_dense).collect(),
        }
    }
}

/// A family `a₁, …, a_n` of matrices claimed to satisfy the twisted CAR relations.
#[derive(Clone, Debug, PartialEq)]
pub struct CarRep {
    pub theta: SkewMatrix,
    pub generators: Generators,
    pub provenance: Provenance,
    pub point: Option<FiberPoint>,
    pub torus_level: Option<u64>,
}

impl CarRep {
    pub fn custom(theta: SkewMatrix, generators: Vec<CMatrix>) -> Result<CarRep> {
        if generators.len() != theta.n() {
            return Err(Error::DimensionMismatch(format!("{} generators for n = {}", generators.len(), theta.n())));
        }
        let d = generators.first().map_or(0, |g| g.nrows());
        if generators.iter().any(|g| g.nrows() != d || g.ncols() != d) {
            return Err(Error::DimensionMismatch("generators must be square of equal size".into()));
        }
        Ok(CarRep {
            theta,
            generators: Generators::Approx(generators.iter().map(SparseMat::from_dense).collect()),
            provenance: Provenance::Custom,
            point: None,
            torus_level: None,
        })
    }

    pub fn n(&self) -> usize {
        self.generators.len()
    }

    pub fn dim(&self) -> usize {
        match &self.generators {
            Generators::Exact(g) => g.first().map_or(0, SparseMat::rows),
            Generators::Approx(g) => g.first().map_or(0, SparseMat::rows),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.generators, Generators::Exact(_))
    }

    pub fn dense_generators(&self) -> Vec<CMatrix> {
        self.generators.to_dense()
    }

    /// `U a_i U*` for a unitary `U`; the result is a float representation.
    pub fn conjugated(&self, u: &CMatrix) -> Result<CarRep> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} unitary against dimension {}",
                u.nrows(),
                u.ncols(),
                self.dim()
            )));
        }
        let ua = u.adjoint();
        let gens = self.dense_generators().iter().map(|g| u * g * &ua).collect();
        let mut out = CarRep::custom(self.theta.clone(), gens)?;
        out.point = self.point.clone();
        out.torus_level = self.torus_level;
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n(),
            "dim": self.dim(),
            "theta": self.theta,
            "provenance": self.provenance,
            "exact": self.is_exact(),
            "point": self.point,
            "torusLevel": self.torus_level,
            "generators": self.dense_generators().iter().map(matrix_json).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum RelationKind {
    /// `a_i* a_i + a_i a_i* = 1`
    Anticommutator,
    /// `a_i* a_j = e^{2πiΘ_ij} a_j a_i*`
    StarCommutation,
    /// `a_i a_j = e^{−2πiΘ_ij} a_j a_i`
    Commutation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationResidual {
    pub kind: RelationKind,
    pub i: usize,
    pub j: usize,
    pub residual: Residual,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CarReport {
    pub relations: Vec<RelationResidual>,
    pub max_residual: f64,
    pub exact: bool,
    pub tol: f64,
    pub pass: bool,
}

fn relation_residuals<S: Scalar>(theta: &SkewMatrix, gens: &[SparseMat<S>]) -> Result<Vec<RelationResidual>> {
    let mut out = Vec::new();
    let stars: Vec<_> = gens.iter().map(SparseMat::adjoint).collect();
    for (i, (a, a_star)) in gens.iter().zip(&stars).enumerate() {
        let anti = a_star.matmul(a).add(&a.matmul(a_star));
        out.push(RelationResidual {
            kind: RelationKind::Anticommutator,
            i,
            j: i,
            residual: anti.residual(&SparseMat::identity(a.rows())),
        });
        for (j, b) in gens.iter().enumerate() {
            if i == j {
                continue;
            }
            let t = theta.get(i, j);
            let fwd = S::from_phase(Phase::from_real(t));
            let back = S::from_phase(Phase::from_real(-t));
            let (fwd, back) = fwd.zip(back).ok_or_else(|| Error::NotExact("approximate phase".into()))?;
            out.push(RelationResidual {
                kind: RelationKind::StarCommutation,
                i,
                j,
                residual: a_star.matmul(b).residual(&b.matmul(a_star).scale(&fwd)),
            });
            out.push(RelationResidual {
                kind: RelationKind::Commutation,
                i,
                j,
                residual: a.matmul(b).residual(&b.matmul(a).scale(&back)),
            });
        }
    }
    Ok(out)
}

/// Residuals of every defining relation.
///
/// A relation passes when it is certified exactly or its residual is
/// strictly below `tol`, so `tol = 0` accepts only exact certificates.
pub fn verify_car_relations(rep: &CarRep, tol: f64) -> CarReport {
    if rep.n() != rep.theta.n() {
        return CarReport { relations: vec![], max_residual: f64::INFINITY, exact: false, tol, pass: false };
    }
    let relations = match &rep.generators {
        Generators::Exact(g) if rep.theta.is_exact() => relation_residuals(&rep.theta, g),
        other => relation_residuals(&rep.theta, &other.to_complex()),
    }
    .expect("complex scalars hold every phase");
    let max_residual = relations.iter().map(|r| r.residual.max_abs).fold(0.0, f64::max);
    let exact = relations.iter().all(|r| r.residual.exact);
    let pass = relations.iter().all(|r| r.residual.exact || r.residual.max_abs < tol);
    CarReport { relations, max_residual, exact, tol, pass }
}

/// One letter of a *-monomial: `a_i` or `a_i*` (0-based index).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    Gen(usize),
    Star(usize),
}

/// A *-monomial `w₁ w₂ ⋯ w_k`, evaluated left to right as a matrix product.
///
/// Text form: whitespace-separated tokens `a<i>` and `A<i>` (1-based), e.g.
/// `"A1 a1"` for `a₁*a₁`. The empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Word(pub Vec<Letter>);

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        s.split_whitespace()
            .map(|tok| {
                let bad = || Error::Parse(format!("bad word token {tok:?}"));
                let (star, rest) = match tok.chars().next() {
                    Some('a') => (false, &tok[1..]),
                    Some('A') => (true, &tok[1..]),
                    _ => return Err(bad()),
                };
                let idx: usize = rest.parse().map_err(|_| bad())?;
                if idx == 0 {
                    return Err(bad());
                }
                Ok(if star { Letter::Star(idx - 1) } else { Letter::Gen(idx - 1) })
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .0
            .iter()
            .map(|l| match l {
                Letter::Gen(i) => format!("a{}", i + 1),
                Letter::Star(i) => format!("A{}", i + 1),
            })
            .collect();
        f.write_str(&toks.join(" "))
    }
}

impl Word {
    pub fn max_index(&self) -> Option<usize> {
        self.0
            .iter()
            .map(|l| match l {
                Letter::Gen(i) | Letter::Star(i) => *i,
            })
            .max()
    }

    /// Evaluates on dense generators.
    pub fn evaluate(&self, gens: &[CMatrix]) -> Result<CMatrix> {
        let d = gens.first().map_or(1, |g| g.nrows());
        let mut acc = CMatrix::identity(d, d);
        for l in &self.0 {
            let (i, star) = match *l {
                Letter::Gen(i) => (i, false),
                Letter::Star(i) => (i, true),
            };
            let g = gens.get(i).ok_or(Error::IndexOutOfRange { index: i + 1, n: gens.len() })?;
            acc = if star { acc * g.adjoint() } else { acc * g };
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::dense::c;

    #[test]
    fn word_round_trip() {
        let w: Word = "A1 a2  a1".parse().unwrap();
        assert_eq!(w.0, vec![Letter::Star(0), Letter::Gen(1), Letter::Gen(0)]);
        assert_eq!(w.to_string(), "A1 a2 a1");
        assert!("b1".parse::<Word>().is_err());
        assert!("a0".parse::<Word>().is_err());
    }

    #[test]
    fn single_mode_is_car() {
        let a = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., 0.), c(1., 0.), c(0., 0.)]);
        let rep = CarRep::custom(SkewMatrix::zeros(1), vec![a.clone()]).unwrap();
        let rep_report = verify_car_relations(&rep, 1e-12);
        assert!(rep_report.pass);
        assert_eq!(rep_report.max_residual, 0.0);

        let bumped = a + CMatrix::identity(2, 2).scale(1e-6);
        let report = verify_car_relations(&CarRep::custom(SkewMatrix::zeros(1), vec![bumped]).unwrap(), 1e-9);
        assert!(!report.pass);
        assert!((report.max_residual - 2e-6).abs() < 1e-9);
    }
}
