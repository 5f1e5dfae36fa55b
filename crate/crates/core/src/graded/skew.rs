use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::real::lcm_all;
use crate::numerics::Real;

/// Real skew-symmetric `n × n` matrix stored through its strictly upper
/// triangle, so `Θᵀ = −Θ` holds by construction.
///
/// Entries are kept as given (no reduction mod 1); every phase computed from
/// them reduces mod 1 at the point of use.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix {
    n: usize,
    upper: Vec<Real>,
}

fn upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl SkewMatrix {
    pub fn zeros(n: usize) -> Self {
        SkewMatrix { n, upper: vec![Real::zero(); n * n.saturating_sub(1) / 2] }
    }

    /// Builds `Θ` from `f(i, j)` evaluated on `i < j`.
    pub fn from_upper_fn<F: FnMut(usize, usize) -> Real>(n: usize, mut f: F) -> Self {
        let mut m = SkewMatrix::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// `n = 2` matrix with `Θ₁₂ = θ`.
    pub fn two(theta: Real) -> Self {
        SkewMatrix::from_upper_fn(2, |_, _| theta)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry `Θ_ij` (0-based).
    pub fn get(&self, i: usize, j: usize) -> Real {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[upper_index(self.n, i, j)],
            std::cmp::Ordering::Greater => -self.upper[upper_index(self.n, j, i)],
            std::cmp::Ordering::Equal => Real::zero(),
        }
    }

    /// Sets `Θ_ij = v` and `Θ_ji = −v`. Panics for `i == j`.
    pub fn set(&mut self, i: usize, j: usize, v: Real) {
        assert!(i != j, "diagonal of a skew matrix is zero");
        if i < j {
            self.upper[upper_index(self.n, i, j)] = v;
        } else {
            self.upper[upper_index(self.n, j, i)] = -v;
        }
    }

    /// `(i, j, Θ_ij)` for `i < j`.
    pub fn upper_entries(&self) -> impl Iterator<Item = (usize, usize, Real)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    pub fn is_exact(&self) -> bool {
        self.upper.iter().all(Real::is_exact)
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(Real::is_zero)
    }

    /// Least `q ≥ 1` with `q·Θ` integral; `None` if any entry is approximate.
    pub fn denominator(&self) -> Option<i64> {
        self.upper.iter().map(Real::denom).collect::<Option<Vec<_>>>().map(lcm_all)
    }

    pub fn map<F: FnMut(usize, usize, Real) -> Real>(&self, mut f: F) -> SkewMatrix {
        SkewMatrix::from_upper_fn(self.n, |i, j| f(i, j, self.get(i, j)))
    }

    pub fn scale(&self, c: Real) -> SkewMatrix {
        self.map(|_, _, v| v * c)
    }

    pub fn neg(&self) -> SkewMatrix {
        self.map(|_, _, v| -v)
    }

    /// Principal submatrix on the 0-based indices `s`, in the given order.
    pub fn restrict(&self, s: &[usize]) -> Result<SkewMatrix> {
        if let Some(&bad) = s.iter().find(|&&i| i >= self.n) {
            return Err(Error::IndexOutOfRange { index: bad + 1, n: self.n });
        }
        Ok(SkewMatrix::from_upper_fn(s.len(), |a, b| self.get(s[a], s[b])))
    }

    /// Rectangular block `Θ[rows][cols]` as nested rows.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Vec<Vec<Real>> {
        rows.map(|i| cols.clone().map(|j| self.get(i, j)).collect()).collect()
    }

    /// `Θ·p` over ℤ-vectors.
    pub fn apply(&self, p: &[i64]) -> Vec<Real> {
        assert_eq!(p.len(), self.n);
        (0..self.n)
            .map(|i| {
                p.iter()
                    .enumerate()
                    .filter(|(_, &pj)| pj != 0)
                    .fold(Real::zero(), |acc, (j, &pj)| acc + self.get(i, j).scale(pj))
            })
            .collect()
    }

    /// `q·Θ` is integral (within `tol` for approximate entries).
    pub fn integral_at(&self, q: u64, tol: f64) -> bool {
        self.upper.iter().all(|v| v.scale(q as i64).as_integer(tol).is_some())
    }
}

impl fmt::Display for SkewMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let r: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct UpperEntry {
    i: usize,
    j: usize,
    value: Real,
}

#[derive(Serialize, Deserialize)]
struct SkewJson {
    n: usize,
    upper: Vec<UpperEntry>,
}

impl Serialize for SkewMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SkewJson { n: self.n, upper: self.upper_entries().map(|(i, j, value)| UpperEntry { i, j, value }).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SkewMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SkewJson::deserialize(d)?;
        if raw.n == 0 {
            return Err(D::Error::custom("n must be positive"));
        }
        let mut m = SkewMatrix::zeros(raw.n);
        for e in raw.upper {
            if !(e.i < e.j && e.j < raw.n) {
                return Err(D::Error::custom(format!(
                    "entry ({}, {}) is not strictly upper in a {}x{} matrix",
                    e.i, e.j, raw.n, raw.n
                )));
            }
            m.set(e.i, e.j, e.value);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SkewMatrix {
        SkewMatrix::from_upper_fn(3, |i, j| Real::ratio((i + 2 * j) as i64, 7))
    }

    #[test]
    fn skew_by_construction() {
        let t = sample();
        for i in 0..3 {
            assert!(t.get(i, i).is_zero());
            for j in 0..3 {
                assert_eq!(t.get(i, j), -t.get(j, i));
            }
        }
        assert_eq!(t.denominator(), Some(7));
    }

    #[test]
    fn restriction() {
        let t = sample();
        assert_eq!(t.restrict(&[0, 1, 2]).unwrap(), t);
        let r = t.restrict(&[0, 2]).unwrap();
        assert_eq!(r.get(0, 1), t.get(0, 2));
        assert_eq!(r.get(1, 0), t.get(2, 0));
        assert!(matches!(t.restrict(&[3]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn json_schema() {
        let t: SkewMatrix = serde_json::from_str(
            r#"{"n": 3, "upper": [{"i": 0, "j": 2, "value": "1/4"}, {"i": 1, "j": 2, "value": 0.1}]}"#,
        )
        .unwrap();
        assert_eq!(t.get(0, 2), Real::ratio(1, 4));
        assert_eq!(t.get(2, 1), Real::Approx(-0.1));
        assert!(t.get(0, 1).is_zero());
        assert!(!t.is_exact());
        let back: SkewMatrix = serde_json::from_value(serde_json::to_value(&t).unwrap()).unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<SkewMatrix>(r#"{"n": 2, "upper": [{"i": 1, "j": 0, "value": 1}]}"#).is_err());
    }
}
