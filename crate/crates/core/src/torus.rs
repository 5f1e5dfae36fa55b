//! Rational noncommutative tori at finite level.
//!
//! For `Θ` with common denominator dividing `q` the generators live on
//! `(ℂ^q)^{⊗n}`: `u_i` is the shift in slot `i` dressed by clock powers in
//! the earlier slots, so that `u_i u_j = e^{−2πiΘ_ij} u_j u_i` exactly.

use std::collections::BTreeSet;

use num::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{decompose_homogeneous, GradedOperator, GradedSpace, SkewMatrix};
use crate::numerics::real::{format_rational, rational_frac};
use crate::numerics::{Phase, Rational, Residual, Scalar, SparseMat};

/// `e^{2πi k/q}` in the scalar type. Exact phases always convert.
pub(crate) fn root<S: Scalar>(k: i64, q: u64) -> S {
    S::from_phase(Phase::ratio(k, q as i64)).expect("rational phases are representable")
}

pub(crate) fn phase_scalar<S: Scalar>(p: Phase) -> Result<S> {
    S::from_phase(p).ok_or_else(|| Error::NotExact(format!("phase {p} is approximate")))
}

/// Parameter of a rational torus together with a representation level.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusSpec {
    theta: SkewMatrix,
    q: u64,
}

impl TorusSpec {
    /// Level = least common denominator of `Θ`.
    pub fn new(theta: SkewMatrix) -> Result<Self> {
        let q = theta.denominator().ok_or_else(|| Error::NotExact("torus parameters must be rational".into()))?;
        Ok(TorusSpec { theta, q: q as u64 })
    }

    /// Explicit level `q`, which must be a multiple of the denominator.
    pub fn with_level(theta: SkewMatrix, q: u64) -> Result<Self> {
        let d = TorusSpec::new(theta.clone())?.q;
        if q == 0 || !q.is_multiple_of(d) {
            return Err(Error::IncompatibleDenominator { q, required: d });
        }
        Ok(TorusSpec { theta, q })
    }

    pub fn n(&self) -> usize {
        self.theta.n()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn theta(&self) -> &SkewMatrix {
        &self.theta
    }
}

/// `C = diag(1, ω, …, ω^{q−1})` and the cyclic shift `S e_j = e_{j+1}`, with `CS = ωSC`.
pub fn clock_shift<S: Scalar>(q: u64) -> (SparseMat<S>, SparseMat<S>) {
    let qs = q as usize;
    let clock = SparseMat::diagonal((0..q).map(|j| root(j as i64, q)).collect());
    let mut shift = SparseMat::zeros(qs, qs);
    for j in 0..qs {
        shift.set((j + 1) % qs, j, S::one());
    }
    (clock, shift)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorusRep<S> {
    pub spec: TorusSpec,
    pub generators: Vec<SparseMat<S>>,
    pub space: GradedSpace,
}

/// Standard level-`q` representation on `(ℂ^q)^{⊗n}`, degree of
/// `e_{j₁} ⊗ … ⊗ e_{j_n}` equal to `(j₁, …, j_n)` mod `q`.
pub fn torus_generators<S: Scalar>(spec: &TorusSpec) -> TorusRep<S> {
    let n = spec.n();
    let q = spec.q;
    let (clock, shift) = clock_shift::<S>(q);
    let id = SparseMat::identity(q as usize);
    let generators = (0..n)
        .map(|i| {
            let factors: Vec<SparseMat<S>> = (0..n)
                .map(|k| match k.cmp(&i) {
                    std::cmp::Ordering::Less => {
                        let a = spec
                            .theta
                            .get(k, i)
                            .scale(q as i64)
                            .as_integer(0.0)
                            .expect("level is a multiple of the denominator");
                        clock.pow(a.rem_euclid(q as i64) as u32)
                    }
                    std::cmp::Ordering::Equal => shift.clone(),
                    std::cmp::Ordering::Greater => id.clone(),
                })
                .collect();
            SparseMat::kron_all(&factors)
        })
        .collect();
    let dim = (q as usize).pow(n as u32);
    let degrees = (0..dim)
        .map(|mut idx| {
            let mut d = vec![0i64; n];
            for slot in (0..n).rev() {
                d[slot] = (idx % q as usize) as i64;
                idx /= q as usize;
            }
            d
        })
        .collect();
    let space = GradedSpace::new(n, degrees, Some(q)).expect("degrees are reduced");
    TorusRep { spec: spec.clone(), generators, space }
}

/// Max residual of `u_i u_j = e^{−2πiΘ_ij} u_j u_i` over `i < j` and of
/// unitarity, for an arbitrary family.
pub fn torus_relation_residual<S: Scalar>(theta: &SkewMatrix, gens: &[SparseMat<S>]) -> Result<Residual> {
    let mut res = Residual::zero_exact();
    for (i, u) in gens.iter().enumerate() {
        let id = SparseMat::identity(u.rows());
        res = res.merge(u.adjoint().matmul(u).residual(&id));
        res = res.merge(u.matmul(&u.adjoint()).residual(&id));
        for (j, w) in gens.iter().enumerate().skip(i + 1) {
            let ph: S = phase_scalar(Phase::from_real(-theta.get(i, j)))?;
            res = res.merge(u.matmul(w).residual(&w.matmul(u).scale(&ph)));
        }
    }
    Ok(res)
}

impl<S: Scalar> TorusRep<S> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn relation_residual(&self) -> Result<Residual> {
        torus_relation_residual(&self.spec.theta, &self.generators)
    }

    /// Generator `i` as a graded operator (homogeneous of degree `δ_i`).
    pub fn graded_generator(&self, i: usize) -> GradedOperator<S> {
        decompose_homogeneous(&self.generators[i], &self.space).expect("dimensions agree")
    }

    /// `u₁^{e₁} ⋯ u_n^{e_n}`, negative powers through adjoints.
    pub fn monomial(&self, exps: &[i64]) -> SparseMat<S> {
        assert_eq!(exps.len(), self.generators.len());
        exps.iter().zip(&self.generators).fold(SparseMat::identity(self.dim()), |acc, (&e, u)| {
            let base = if e < 0 { u.adjoint() } else { u.clone() };
            acc.matmul(&base.pow(e.unsigned_abs() as u32))
        })
    }
}

/// Generators of the crossed product by `ℤ₂^M` in its regular picture.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossedProduct<S> {
    /// `u_i ⊗ D_i`, one per torus generator.
    pub us: Vec<SparseMat<S>>,
    /// `I ⊗ flip` in the slot of each `i ∈ M`, in the order of `M`.
    pub vs: Vec<SparseMat<S>>,
    pub m: Vec<usize>,
}

/// Extends a torus representation to `(ℂ^q)^{⊗n} ⊗ (ℂ²)^{⊗|M|}` so that
/// `v_i* u_j v_i = −u_j` for `j = i ∈ M` and `u_j` otherwise. `M` is 0-based.
pub fn crossed_product_generators<S: Scalar>(rep: &TorusRep<S>, m: &[usize]) -> Result<CrossedProduct<S>> {
    let n = rep.generators.len();
    if let Some(&bad) = m.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: bad + 1, n });
    }
    let slots = m.len();
    let id2 = SparseMat::<S>::identity(2);
    let sign = SparseMat::diagonal(vec![S::one(), S::one().negated()]);
    let mut flip = SparseMat::zeros(2, 2);
    flip.set(0, 1, S::one());
    flip.set(1, 0, S::one());
    let slot_op = |pos: Option<usize>, op: &SparseMat<S>| {
        let factors: Vec<SparseMat<S>> =
            (0..slots).map(|s| if Some(s) == pos { op.clone() } else { id2.clone() }).collect();
        SparseMat::kron_all(&factors)
    };
    let us = rep
        .generators
        .iter()
        .enumerate()
        .map(|(i, u)| u.kron(&slot_op(m.iter().position(|&k| k == i), &sign)))
        .collect();
    let id_h = SparseMat::identity(rep.dim());
    let vs = (0..slots).map(|s| id_h.kron(&slot_op(Some(s), &flip))).collect();
    Ok(CrossedProduct { us, vs, m: m.to_vec() })
}

/// `Θ^{(1)}`: row and column 1 doubled.
pub fn doubled_theta(theta: &SkewMatrix) -> SkewMatrix {
    theta.map(|i, j, v| if i == 0 || j == 0 { v.scale(2) } else { v })
}

/// Checks that `u₁², u₂, …, u_n` satisfy the `Θ^{(1)}` relations.
pub fn doubled_torus_check<S: Scalar>(rep: &TorusRep<S>) -> Result<Residual> {
    if rep.generators.len() < 2 {
        return Err(Error::NotApplicable("the doubled torus needs n ≥ 2".into()));
    }
    let mut gens = rep.generators.clone();
    gens[0] = gens[0].matmul(&gens[0]);
    torus_relation_residual(&doubled_theta(&rep.spec.theta), &gens)
}

/// `2^{−k}(ℤ + θℤ) ∩ [0, 1]` enumerated with coefficients bounded by `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRangeSet {
    pub theta: Rational,
    pub halvings: u32,
    pub bound: u64,
    pub values: BTreeSet<Rational>,
}

impl Serialize for TraceRangeSet {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        serde_json::json!({
            "theta": format_rational(&self.theta),
            "halvings": self.halvings,
            "bound": self.bound,
            "values": self.values.iter().map(format_rational).collect::<Vec<_>>(),
        })
        .serialize(s)
    }
}

/// Smallest bound for which [`trace_range`] is complete.
pub fn completeness_bound(theta: Rational, halvings: u32) -> u64 {
    (*theta.denom() as u64) << halvings
}

pub fn default_bound(theta: Rational, halvings: u32) -> u64 {
    4 * completeness_bound(theta, halvings)
}

pub fn trace_range(theta: Rational, halvings: u32, bound: u64) -> Result<TraceRangeSet> {
    let required = completeness_bound(theta, halvings);
    if bound < required {
        return Err(Error::InsufficientBound { bound, required });
    }
    let t = rational_frac(&theta);
    let scale = Rational::from_integer(1i64 << halvings);
    let b = bound as i64;
    let mut values = BTreeSet::new();
    for mp in -b..=b {
        let shift = t * mp;
        // 0 ≤ m + shift ≤ 2^k
        let lo = (-shift).ceil().to_integer().max(-b);
        let hi = (scale - shift).floor().to_integer().min(b);
        for m in lo..=hi {
            values.insert((shift + m) / scale);
        }
    }
    Ok(TraceRangeSet { theta, halvings, bound, values })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceRangeComparison {
    pub sets: [TraceRangeSet; 3],
    /// `[(0,1), (0,2), (1,2)]` equality flags.
    pub equal_pairs: [bool; 3],
    pub pairwise_distinct: bool,
    pub rational_input: bool,
}

/// The three trace-range sets for `θ`, `2θ`, `4θ` at halvings `n−2`, `n−1`, `n`.
pub fn distinguish_trace_ranges(theta: Rational, n: u32, bound: u64) -> Result<TraceRangeComparison> {
    if n < 2 {
        return Err(Error::Domain("n must be at least 2".into()));
    }
    let sets =
        [trace_range(theta, n - 2, bound)?, trace_range(theta * 2, n - 1, bound)?, trace_range(theta * 4, n, bound)?];
    let eq = |a: usize, b: usize| sets[a].values == sets[b].values;
    let equal_pairs = [eq(0, 1), eq(0, 2), eq(1, 2)];
    Ok(TraceRangeComparison {
        pairwise_distinct: !equal_pairs.iter().any(|&e| e),
        equal_pairs,
        sets,
        rational_input: true,
    })
}

/// `true` iff `q` is a common multiple of all denominators in `theta`.
pub fn level_fits(theta: &SkewMatrix, q: u64) -> bool {
    theta.denominator().is_some_and(|d| !q.is_zero() && q.is_multiple_of(d as u64))
}

/// Least common denominator of a rational skew matrix as a level.
pub fn level_of(theta: &SkewMatrix) -> Option<u64> {
    theta.denominator().map(|d| d as u64)
}
