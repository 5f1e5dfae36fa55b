//! Isomorphism tests for twisted CAR algebras: the complete criterion for
//! two generators, a necessary multiset condition, and the sufficient
//! signed-permutation search.

use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graded::SkewMatrix;
use crate::numerics::real::rational_frac;
use crate::numerics::{Rational, Real};

/// Largest `n` the signed-permutation search accepts (`n!·2ⁿ` candidates).
pub const MAX_SEARCH_N: usize = 8;

/// Cap on the number of integer vectors the lattice search visits.
const LATTICE_BUDGET: usize = 2_000_000;

/// `P` with `p_ij = (−1)^{b_i} δ_{j,σ(i)}`; indices 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SignedPermutation {
    pub sigma: Vec<usize>,
    pub signs: Vec<u8>,
    /// The identity `PΘ₂Pᵀ = Θ₁` holds only after reducing entries mod ℤ.
    pub mod_integer: bool,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        SignedPermutation { sigma: (0..n).collect(), signs: vec![0; n], mod_integer: false }
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// `PΘPᵀ`, entrywise `(−1)^{b_i+b_j} Θ_{σ(i)σ(j)}`.
    pub fn conjugate(&self, theta: &SkewMatrix) -> SkewMatrix {
        SkewMatrix::from_upper_fn(theta.n(), |i, j| {
            let v = theta.get(self.sigma[i], self.sigma[j]);
            if (self.signs[i] + self.signs[j]) % 2 == 1 {
                -v
            } else {
                v
            }
        })
    }

    /// Generator map `a_i ↦ a_{σ(i)}` or `a_{σ(i)}*`, in word syntax.
    pub fn generator_map(&self) -> Vec<String> {
        self.sigma
            .iter()
            .zip(&self.signs)
            .map(|(&s, &b)| format!("{}{}", if b == 1 { 'A' } else { 'a' }, s + 1))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Isomorphic,
    NotIsomorphic,
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Permutation(SignedPermutation),
    Violated { invariant: String, details: Value },
}

impl Serialize for Witness {
    fn serialize<Sr: Serializer>(&self, s: Sr) -> std::result::Result<Sr::Ok, Sr::Error> {
        match self {
            Witness::Permutation(p) => p.serialize(s),
            Witness::Violated { invariant, details } => {
                json!({ "violatedInvariant": invariant, "details": details }).serialize(s)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Caveat {
    /// The criterion is proven for irrational parameters only.
    RationalInput,
    /// Some parameter admits a degeneracy witness.
    DegenerateTheta,
    /// Comparisons were made within a float tolerance.
    ApproximateInput,
    /// `n` exceeds the signed-permutation budget.
    SearchSizeLimit,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub caveats: Vec<Caveat>,
}

impl Verdict {
    fn new(status: Status, witness: Option<Witness>, mut caveats: Vec<Caveat>) -> Self {
        caveats.sort();
        caveats.dedup();
        Verdict { status, witness, caveats }
    }
}

fn both_exact(a: &Real, b: &Real) -> Option<(Rational, Rational)> {
    a.exact().zip(b.exact())
}

/// `a = b`, or `a ≡ b (mod ℤ)` when `mod_z`; float sides within `tol`.
fn entries_match(a: &Real, b: &Real, mod_z: bool, tol: f64) -> bool {
    match (both_exact(a, b), mod_z) {
        (Some((x, y)), false) => x == y,
        (Some((x, y)), true) => rational_frac(&(x - y)) == Rational::from_integer(0),
        (None, false) => (a.to_f64() - b.to_f64()).abs() < tol,
        (None, true) => Real::Approx(a.to_f64() - b.to_f64()).dist_to_integer().to_f64() < tol,
    }
}

fn caveats_for(reals: &[Real]) -> Vec<Caveat> {
    if reals.iter().all(Real::is_exact) {
        vec![Caveat::RationalInput]
    } else {
        vec![Caveat::ApproximateInput]
    }
}

// ---------------------------------------------------------------------------
// Degeneracy

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IrrationalityStatus {
    /// A nonzero `p` with `Θᵀp ∈ ℤⁿ` was found.
    Degenerate,
    NoWitnessUpToBound,
    /// Float input: finite precision cannot certify either way.
    Undecidable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IrrationalityReport {
    pub status: IrrationalityStatus,
    pub bound: u64,
    pub witness: Option<Vec<i64>>,
    /// `Θᵀp` for the witness.
    pub image: Option<Vec<Real>>,
    /// Float input: `p` minimising the distance of `Θᵀp` to `ℤⁿ`.
    pub nearest: Option<Vec<i64>>,
    pub margin: Option<f64>,
    /// Whether the enumeration finished inside its budget.
    pub exhaustive: bool,
}

/// Every `p ∈ ℤⁿ` with `|p|₁ = s`, `|p_i| ≤ bound`, first nonzero entry
/// positive, in colexicographic order.
fn lattice_shell(n: usize, s: i64, bound: i64) -> Vec<Vec<i64>> {
    fn fill(n: usize, left: i64, bound: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let slots_after = (n - cur.len() - 1) as i64;
        for mag in 0..=left.min(bound) {
            if left - mag > slots_after * bound {
                continue;
            }
            let leading = cur.iter().all(|&v| v == 0);
            let signs: &[i64] = if mag == 0 || leading { &[1] } else { &[1, -1] };
            for &sg in signs {
                cur.push(sg * mag);
                fill(n, left - mag, bound, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    fill(n, s, bound, &mut Vec::with_capacity(n), &mut out);
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}

/// Searches for a nonzero `p` (coefficients `≤ bound`) with `Θᵀp ∈ ℤⁿ`,
/// smallest first by `ℓ¹` norm and then colexicographically.
pub fn is_irrational_check(theta: &SkewMatrix, bound: u64) -> IrrationalityReport {
    let n = theta.n();
    let b = bound as i64;
    let mut report = IrrationalityReport {
        status: IrrationalityStatus::NoWitnessUpToBound,
        bound,
        witness: None,
        image: None,
        nearest: None,
        margin: None,
        exhaustive: true,
    };
    if n == 0 || bound == 0 {
        return report;
    }
    let transpose_image = |p: &[i64]| -> Vec<Real> { theta.apply(p).into_iter().map(|v| -v).collect() };
    let max_norm = match theta.denominator() {
        Some(d) if d <= b => d,
        _ => b * n as i64,
    };
    let mut visited = 0usize;
    let mut best: Option<(f64, Vec<i64>)> = None;
    'shells: for s in 1..=max_norm {
        for p in lattice_shell(n, s, b) {
            visited += 1;
            if visited > LATTICE_BUDGET {
                report.exhaustive = false;
                break 'shells;
            }
            let image = transpose_image(&p);
            if theta.is_exact() {
                if image.iter().all(|v| v.as_integer(0.0).is_some()) {
                    report.status = IrrationalityStatus::Degenerate;
                    report.witness = Some(p);
                    report.image = Some(image);
                    return report;
                }
            } else {
                let margin = image.iter().map(|v| v.dist_to_integer().to_f64()).fold(0.0, f64::max);
                if best.as_ref().is_none_or(|(m, _)| margin < *m) {
                    best = Some((margin, p));
                }
            }
        }
    }
    if !theta.is_exact() {
        report.status = IrrationalityStatus::Undecidable;
        if let Some((m, p)) = best {
            report.margin = Some(m);
            report.nearest = Some(p);
        }
    }
    report
}

// ---------------------------------------------------------------------------
// n = 2

/// `CAR_{θ₁} ≅ CAR_{θ₂}` iff `θ₁ ≡ ±θ₂ (mod ℤ)`.
pub fn classify_n2(theta1: Real, theta2: Real, tol: f64) -> Verdict {
    let caveats = caveats_for(&[theta1, theta2]);
    let (t1, t2) = (SkewMatrix::two(theta1), SkewMatrix::two(theta2));
    match signed_perm_search(&t1, &t2, tol).expect("n = 2 is within budget") {
        Some(p) => Verdict::new(Status::Isomorphic, Some(Witness::Permutation(p)), caveats),
        None => Verdict::new(
            Status::NotIsomorphic,
            Some(Witness::Violated {
                invariant: "residue".into(),
                details: json!({
                    "theta1": theta1,
                    "theta2": theta2,
                    "difference": (theta1 - theta2).frac(),
                    "sum": (theta1 + theta2).frac(),
                }),
            }),
            caveats,
        ),
    }
}

// ---------------------------------------------------------------------------
// Necessary condition

/// `min(t mod 1, 1 − t mod 1) ∈ [0, ½]`.
pub fn canonical_residue(t: &Real) -> Real {
    t.dist_to_integer()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EntryMatch {
    /// Position `(i, j)`, `i < j`, in `Θ₁`.
    pub from: (usize, usize),
    /// Matched position in `Θ₂`.
    pub to: (usize, usize),
    /// `+1` when `(Θ₂)_to ≡ (Θ₁)_from`, `−1` when `≡ −(Θ₁)_from` (mod ℤ).
    pub sign: i8,
}

fn sorted_residues(theta: &SkewMatrix) -> Vec<((usize, usize), Real, Real)> {
    let mut v: Vec<_> = theta.upper_entries().map(|(i, j, t)| ((i, j), t, canonical_residue(&t))).collect();
    v.sort_by(|a, b| a.2.cmp_value(&b.2).then(a.0.cmp(&b.0)));
    v
}

/// Matches the strictly upper entries of both matrices by canonical
/// residue. `None` proves the algebras are not isomorphic.
pub fn necessary_condition(theta1: &SkewMatrix, theta2: &SkewMatrix, tol: f64) -> Result<Option<Vec<EntryMatch>>> {
    if theta1.n() != theta2.n() {
        return Err(Error::DimensionMismatch(format!("n = {} against n = {}", theta1.n(), theta2.n())));
    }
    let (r1, r2) = (sorted_residues(theta1), sorted_residues(theta2));
    let mut matches = Vec::with_capacity(r1.len());
    for ((from, t1, c1), (to, t2, c2)) in r1.iter().zip(&r2) {
        if !entries_match(c1, c2, false, tol) {
            return Ok(None);
        }
        let sign = if entries_match(t1, t2, true, tol) { 1 } else { -1 };
        matches.push(EntryMatch { from: *from, to: *to, sign });
    }
    matches.sort_by_key(|m| m.from);
    Ok(Some(matches))
}

// ---------------------------------------------------------------------------
// Signed permutations

struct Search<'a> {
    theta1: &'a SkewMatrix,
    theta2: &'a SkewMatrix,
    signs: Vec<u8>,
    mod_z: bool,
    tol: f64,
}

impl Search<'_> {
    /// Depth-first over `σ` in lexicographic order, pruning on the entries
    /// already fixed.
    fn extend(&self, sigma: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let n = self.theta1.n();
        let i = sigma.len();
        if i == n {
            return true;
        }
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            let ok = (0..i).all(|k| {
                let v = self.theta2.get(sigma[k], cand);
                let v = if (self.signs[k] + self.signs[i]) % 2 == 1 { -v } else { v };
                entries_match(&v, &self.theta1.get(k, i), self.mod_z, self.tol)
            });
            if ok {
                sigma.push(cand);
                used[cand] = true;
                if self.extend(sigma, used) {
                    return true;
                }
                sigma.pop();
                used[cand] = false;
            }
        }
        false
    }
}

fn search_pass(theta1: &SkewMatrix, theta2: &SkewMatrix, mod_z: bool, tol: f64) -> Option<SignedPermutation> {
    let n = theta1.n();
    for mask in 0u32..(1 << n) {
        // b in lexicographic order: b₁ is the most significant bit.
        let signs: Vec<u8> = (0..n).map(|i| ((mask >> (n - 1 - i)) & 1) as u8).collect();
        let search = Search { theta1, theta2, signs, mod_z, tol };
        let mut sigma = Vec::with_capacity(n);
        if search.extend(&mut sigma, &mut vec![false; n]) {
            return Some(SignedPermutation { sigma, signs: search.signs, mod_integer: mod_z });
        }
    }
    None
}

/// First signed permutation `P` with `PΘ₂Pᵀ = Θ₁`, searching sign vectors
/// `b` in lexicographic order and, for each, permutations `σ` in
/// lexicographic order. Exact equality is tried before equality mod ℤ.
pub fn signed_perm_search(theta1: &SkewMatrix, theta2: &SkewMatrix, tol: f64) -> Result<Option<SignedPermutation>> {
    let n = theta1.n();
    if theta2.n() != n {
        return Err(Error::DimensionMismatch(format!("n = {n} against n = {}", theta2.n())));
    }
    if n > MAX_SEARCH_N {
        return Err(Error::SizeLimit(format!("signed-permutation search is limited to n ≤ {MAX_SEARCH_N}, got {n}")));
    }
    let found = search_pass(theta1, theta2, false, tol).or_else(|| search_pass(theta1, theta2, true, tol));
    if let Some(p) = &found {
        let back = p.conjugate(theta2);
        let verified = theta1.upper_entries().all(|(i, j, v)| entries_match(&back.get(i, j), &v, p.mod_integer, tol));
        assert!(verified, "search returned an unverified certificate");
    }
    Ok(found)
}

// ---------------------------------------------------------------------------
// Combined report

/// Default search bound for the degeneracy check inside reports.
pub const REPORT_LATTICE_BOUND: u64 = 12;

pub fn classification_report(theta1: &SkewMatrix, theta2: &SkewMatrix, tol: f64) -> Result<Verdict> {
    let n = theta1.n();
    if theta2.n() != n {
        return Err(Error::DimensionMismatch(format!("n = {n} against n = {}", theta2.n())));
    }
    if n == 2 {
        return Ok(classify_n2(theta1.get(0, 1), theta2.get(0, 1), tol));
    }
    let entries: Vec<Real> = theta1.upper_entries().chain(theta2.upper_entries()).map(|(_, _, v)| v).collect();
    let mut caveats = caveats_for(&entries);
    if n < 2 {
        return Ok(Verdict::new(
            Status::Isomorphic,
            Some(Witness::Permutation(SignedPermutation::identity(n))),
            caveats,
        ));
    }
    for t in [theta1, theta2] {
        if is_irrational_check(t, REPORT_LATTICE_BOUND).status == IrrationalityStatus::Degenerate {
            caveats.push(Caveat::DegenerateTheta);
        }
    }
    if necessary_condition(theta1, theta2, tol)?.is_none() {
        let residues = |t: &SkewMatrix| sorted_residues(t).into_iter().map(|(_, _, c)| c).collect::<Vec<_>>();
        return Ok(Verdict::new(
            Status::NotIsomorphic,
            Some(Witness::Violated {
                invariant: "multiset".into(),
                details: json!({ "residues1": residues(theta1), "residues2": residues(theta2) }),
            }),
            caveats,
        ));
    }
    match signed_perm_search(theta1, theta2, tol) {
        Ok(Some(p)) => Ok(Verdict::new(Status::Isomorphic, Some(Witness::Permutation(p)), caveats)),
        Ok(None) => Ok(Verdict::new(Status::Undecided, None, caveats)),
        Err(Error::SizeLimit(_)) => {
            caveats.push(Caveat::SearchSizeLimit);
            Ok(Verdict::new(Status::Undecided, None, caveats))
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Real {
        Real::ratio(p, q)
    }

    fn three(a: Real, b: Real, c: Real) -> SkewMatrix {
        let v = [a, b, c];
        let mut k = 0;
        SkewMatrix::from_upper_fn(3, |_, _| {
            k += 1;
            v[k - 1]
        })
    }

    #[test]
    fn degeneracy_witnesses() {
        let rep = is_irrational_check(&SkewMatrix::two(r(1, 3)), 10);
        assert_eq!(rep.status, IrrationalityStatus::Degenerate);
        assert_eq!(rep.witness, Some(vec![3, 0]));
        assert_eq!(rep.image, Some(vec![Real::int(0), Real::int(1)]));
        let rep = is_irrational_check(&SkewMatrix::zeros(3), 5);
        assert_eq!(rep.witness, Some(vec![1, 0, 0]));
        let rep = is_irrational_check(&SkewMatrix::two(Real::Approx(0.333333333)), 10);
        assert_eq!(rep.status, IrrationalityStatus::Undecidable);
        assert_eq!(rep.nearest, Some(vec![3, 0]));
        assert!(rep.margin.unwrap() < 1e-8);
    }

    #[test]
    fn shells_are_ordered() {
        let s = lattice_shell(2, 1, 5);
        assert_eq!(s, vec![vec![1, 0], vec![0, 1]]);
        let s = lattice_shell(2, 2, 5);
        assert_eq!(s, vec![vec![1, -1], vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn two_generator_table() {
        let tol = 1e-9;
        assert_eq!(classify_n2(r(1, 3), r(1, 3), tol).status, Status::Isomorphic);
        assert_eq!(classify_n2(r(1, 3), r(2, 3), tol).status, Status::Isomorphic);
        let v = classify_n2(r(1, 3), r(1, 4), tol);
        assert_eq!(v.status, Status::NotIsomorphic);
        assert_eq!(v.caveats, vec![Caveat::RationalInput]);
        assert_eq!(classify_n2(r(7, 3), r(-1, 3), tol).status, Status::Isomorphic);
        assert_eq!(classify_n2(Real::Approx(0.3), Real::Approx(0.7), tol).caveats, vec![Caveat::ApproximateInput]);
    }

    #[test]
    fn sign_flip_witness() {
        let p = signed_perm_search(&SkewMatrix::two(r(1, 5)), &SkewMatrix::two(r(-1, 5)), 1e-9).unwrap().unwrap();
        assert_eq!((p.sigma.clone(), p.signs.clone()), (vec![1, 0], vec![0, 0]));
        let t = three(r(1, 7), r(2, 7), r(3, 7));
        let id = signed_perm_search(&t, &t, 1e-9).unwrap().unwrap();
        assert_eq!(id, SignedPermutation::identity(3));
    }

    #[test]
    fn permuted_pair_recovered() {
        let t1 = three(r(1, 7), r(2, 7), r(3, 7));
        let p = SignedPermutation { sigma: vec![2, 0, 1], signs: vec![0, 1, 0], mod_integer: false };
        // Θ₂ with PΘ₂Pᵀ = Θ₁: invert the conjugation.
        let mut inv = [0; 3];
        for (i, &s) in p.sigma.iter().enumerate() {
            inv[s] = i;
        }
        let t2 = SkewMatrix::from_upper_fn(3, |i, j| {
            let v = t1.get(inv[i], inv[j]);
            if (p.signs[inv[i]] + p.signs[inv[j]]) % 2 == 1 {
                -v
            } else {
                v
            }
        });
        assert_eq!(p.conjugate(&t2), t1);
        let found = signed_perm_search(&t1, &t2, 1e-9).unwrap().unwrap();
        assert_eq!(found.conjugate(&t2), t1);
        let v = classification_report(&t1, &t2, 1e-9).unwrap();
        assert_eq!(v.status, Status::Isomorphic);
    }

    #[test]
    fn necessary_condition_examples() {
        let f = Real::Approx;
        let a = three(f(0.1), f(0.2), f(0.3));
        assert!(necessary_condition(&a, &a, 1e-9).unwrap().is_some());
        let b = three(f(0.1), f(0.2), f(0.35));
        assert!(necessary_condition(&a, &b, 1e-9).unwrap().is_none());
        let c = three(f(0.9), f(0.2), f(0.3));
        let m = necessary_condition(&a, &c, 1e-9).unwrap().unwrap();
        assert_eq!(m[0].sign, -1);
        assert_eq!(signed_perm_search(&a, &c, 1e-9).unwrap(), None);
        let v = classification_report(&a, &c, 1e-9).unwrap();
        assert_eq!(v.status, Status::Undecided);
        assert_eq!(classification_report(&a, &b, 1e-9).unwrap().status, Status::NotIsomorphic);
        let s = necessary_condition(&SkewMatrix::two(r(1, 5)), &SkewMatrix::two(r(-1, 5)), 0.0).unwrap().unwrap();
        assert_eq!(s[0].sign, -1);
    }

    #[test]
    fn size_limit() {
        let t = SkewMatrix::zeros(9);
        assert!(matches!(signed_perm_search(&t, &t, 1e-9), Err(Error::SizeLimit(_))));
        let v = classification_report(&t, &t, 1e-9).unwrap();
        assert_eq!(v.status, Status::Undecided);
        assert!(v.caveats.contains(&Caveat::SearchSizeLimit));
    }

    #[test]
    fn verdict_json() {
        let v = classify_n2(r(1, 3), r(2, 3), 1e-9);
        let j = serde_json::to_value(&v).unwrap();
        assert_eq!(j["status"], "ISOMORPHIC");
        assert!(j["witness"]["sigma"].is_array());
        assert_eq!(j["caveats"][0], "rational_input");
        let v = classify_n2(r(1, 3), r(1, 4), 1e-9);
        assert_eq!(serde_json::to_value(&v).unwrap()["witness"]["violatedInvariant"], "residue");
    }
}
