//! Exact scalars of the form `Σ c · √m · e^{2πiφ}` with rational `c`,
//! squarefree positive integer `m` and rational `φ`.
//!
//! This is the smallest ring that holds every matrix entry produced on the
//! rational path: roots of unity from rational deformation parameters and
//! square roots `√x`, `√(1−x)` of rational hypercube coordinates.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{Integer, One, Signed, ToPrimitive, Zero};

use super::real::{rational_frac, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cyclo {
    /// `(radicand, phase in [0, 1/2)) -> coefficient`; no zero coefficients.
    terms: BTreeMap<(u64, Rational), Rational>,
}

fn half() -> Rational {
    Rational::new(1, 2)
}

/// Splits `n = s² · m` with `m` squarefree; returns `(s, m)`.
fn square_split(mut n: u64) -> (u64, u64) {
    let mut s = 1;
    let mut m = 1;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            m *= p;
        }
        p += 1;
    }
    (s, m * n)
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
fn cyclotomic_poly(n: u64) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            num = poly_div_exact(&num, &cyclotomic_poly(d));
        }
    }
    num
}

/// Exact division of integer polynomials with monic divisor.
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut quot = vec![0i64; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        for (j, &dc) in den.iter().enumerate() {
            rem[k + j] -= c * dc;
        }
    }
    quot
}

/// True when `Σ c_k ζ_N^k = 0`, decided by reduction modulo `Φ_N`.
fn cyclotomic_sum_is_zero(n: u64, coeffs: &BTreeMap<u64, Rational>) -> bool {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    let top = coeffs.keys().copied().max().unwrap_or(0) as usize;
    let mut poly = vec![Rational::zero(); top.max(deg) + 1];
    for (&k, c) in coeffs {
        poly[k as usize] += c;
    }
    for k in (deg..poly.len()).rev() {
        let c = poly[k];
        if c.is_zero() {
            continue;
        }
        for (j, &pc) in phi.iter().enumerate() {
            poly[k - deg + j] -= c * Rational::from_integer(pc);
        }
    }
    poly.iter().all(Zero::is_zero)
}

impl Cyclo {
    pub fn zero() -> Self {
        Cyclo::default()
    }

    pub fn one() -> Self {
        Cyclo::from_rational(Rational::one())
    }

    pub fn from_rational(c: Rational) -> Self {
        let mut z = Cyclo::zero();
        z.push(1, Rational::zero(), c);
        z
    }

    /// `e^{2πi·phase}`.
    pub fn root_of_unity(phase: Rational) -> Self {
        let mut z = Cyclo::zero();
        z.push(1, phase, Rational::one());
        z
    }

    /// `√r` for `r ≥ 0`.
    pub fn sqrt(r: Rational) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        if r.is_zero() {
            return Some(Cyclo::zero());
        }
        let a = u64::try_from(*r.numer()).ok()?;
        let b = u64::try_from(*r.denom()).ok()?;
        let (s, m) = square_split(a.checked_mul(b)?);
        let c = Rational::new(i64::try_from(s).ok()?, i64::try_from(b).ok()?);
        let mut z = Cyclo::zero();
        z.push(m, Rational::zero(), c);
        Some(z)
    }

    fn push(&mut self, m: u64, phase: Rational, c: Rational) {
        if c.is_zero() {
            return;
        }
        let mut f = rational_frac(&phase);
        let mut c = c;
        if f >= half() {
            f -= half();
            c = -c;
        }
        let key = (m, f);
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Structural zero: no terms at all.
    pub fn is_formally_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Exact zero test.
    ///
    /// Each radicand group is reduced modulo the cyclotomic polynomial of
    /// its common phase denominator; the value is zero when every group
    /// vanishes. A `false` is only possible for non-zero values, except for
    /// cancellations across radicands (e.g. `√2 = ζ₈ + ζ₈⁻¹`), which are
    /// reported as non-zero.
    pub fn is_zero(&self) -> bool {
        if self.terms.is_empty() {
            return true;
        }
        let mut groups: BTreeMap<u64, Vec<(Rational, Rational)>> = BTreeMap::new();
        for (&(m, f), &c) in &self.terms {
            groups.entry(m).or_default().push((f, c));
        }
        groups.values().all(|g| {
            if g.len() < 3 {
                // One term is non-zero; two terms with phases in [0, 1/2)
                // cancel only if the phases agree, which the map forbids.
                return false;
            }
            let n = g.iter().fold(1i64, |acc, (f, _)| acc.lcm(f.denom())) as u64;
            let coeffs: BTreeMap<u64, Rational> =
                g.iter().map(|(f, c)| (((f * n as i64).to_integer()) as u64, *c)).collect();
            cyclotomic_sum_is_zero(n, &coeffs)
        })
    }

    pub fn conj(&self) -> Self {
        let mut z = Cyclo::zero();
        for (&(m, f), &c) in &self.terms {
            z.push(m, -f, c);
        }
        z
    }

    pub fn to_complex(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(&(m, f), c)| {
                let mag = c.to_f64().unwrap_or(f64::NAN) * (m as f64).sqrt();
                Complex64::from_polar(1.0, std::f64::consts::TAU * f.to_f64().unwrap_or(0.0)) * mag
            })
            .sum()
    }
}

impl Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, o: &Cyclo) -> Cyclo {
        let mut z = self.clone();
        for (&(m, f), &c) in &o.terms {
            z.push(m, f, c);
        }
        z
    }
}

impl Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, o: &Cyclo) -> Cyclo {
        let mut z = self.clone();
        for (&(m, f), &c) in &o.terms {
            z.push(m, f, -c);
        }
        z
    }
}

impl Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, o: &Cyclo) -> Cyclo {
        let mut z = Cyclo::zero();
        for (&(m1, f1), &c1) in &self.terms {
            for (&(m2, f2), &c2) in &o.terms {
                let g = m1.gcd(&m2);
                let m = (m1 / g) * (m2 / g);
                z.push(m, f1 + f2, c1 * c2 * Rational::from_integer(g as i64));
            }
        }
        z
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        let mut z = Cyclo::zero();
        for (&(m, f), &c) in &self.terms {
            z.push(m, f, -c);
        }
        z
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(m, ph), c)| {
                let mut s = format!("({c})");
                if m != 1 {
                    s.push_str(&format!("·√{m}"));
                }
                if !ph.is_zero() {
                    s.push_str(&format!("·e^(2πi·{ph})"));
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}
