use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{Integer, One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Reduced fraction with positive denominator.
pub type Rational = num::Rational64;

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => s.parse::<i64>().map(Rational::from_integer).map_err(|_| bad()),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Fractional part in `[0, 1)`.
pub fn rational_frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// A real number that is either an exact rational or an `f64` approximation.
///
/// Arithmetic between two exact values stays exact; anything touching an
/// approximate value degrades to approximate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Real {
    Exact(Rational),
    Approx(f64),
}

impl Real {
    pub fn zero() -> Self {
        Real::Exact(Rational::zero())
    }

    pub fn int(v: i64) -> Self {
        Real::Exact(Rational::from_integer(v))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Real::Exact(Rational::new(p, q))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Real::Exact(_))
    }

    pub fn exact(&self) -> Option<Rational> {
        match self {
            Real::Exact(r) => Some(*r),
            Real::Approx(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Real::Approx(v) => *v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_zero(),
            Real::Approx(v) => *v == 0.0,
        }
    }

    pub fn scale(&self, k: i64) -> Real {
        match self {
            Real::Exact(r) => Real::Exact(r * k),
            Real::Approx(v) => Real::Approx(v * k as f64),
        }
    }

    /// Fractional part in `[0, 1)`.
    pub fn frac(&self) -> Real {
        match self {
            Real::Exact(r) => Real::Exact(rational_frac(r)),
            Real::Approx(v) => {
                let f = v - v.floor();
                Real::Approx(if f >= 1.0 { 0.0 } else { f })
            }
        }
    }

    /// Denominator of an exact value; `None` for approximate ones.
    pub fn denom(&self) -> Option<i64> {
        self.exact().map(|r| *r.denom())
    }

    /// Distance to the nearest integer.
    pub fn dist_to_integer(&self) -> Real {
        match self.frac() {
            Real::Exact(f) => Real::Exact(f.min(Rational::one() - f)),
            Real::Approx(f) => Real::Approx(f.min(1.0 - f)),
        }
    }

    /// Compare for ordering; exact comparison when both sides are exact.
    pub fn cmp_value(&self, other: &Real) -> Ordering {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a.cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()).unwrap_or(Ordering::Equal),
        }
    }

    /// Equality: exact when both sides are exact, otherwise within `tol`.
    pub fn approx_eq(&self, other: &Real, tol: f64) -> bool {
        match (self, other) {
            (Real::Exact(a), Real::Exact(b)) => a == b,
            _ => (self.to_f64() - other.to_f64()).abs() <= tol,
        }
    }

    /// Integer nearest to the value, if it lies within `tol` of one
    /// (exactly an integer for exact values).
    pub fn as_integer(&self, tol: f64) -> Option<i64> {
        match self {
            Real::Exact(r) => r.is_integer().then(|| r.to_integer()),
            Real::Approx(v) => {
                let r = v.round();
                ((v - r).abs() <= tol).then_some(r as i64)
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Real::Exact(r) => r.is_negative(),
            Real::Approx(v) => *v < 0.0,
        }
    }
}

impl From<Rational> for Real {
    fn from(r: Rational) -> Self {
        Real::Exact(r)
    }
}

impl From<f64> for Real {
    fn from(v: f64) -> Self {
        Real::Approx(v)
    }
}

impl From<i64> for Real {
    fn from(v: i64) -> Self {
        Real::int(v)
    }
}

impl Add for Real {
    type Output = Real;
    fn add(self, o: Real) -> Real {
        match (self, o) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a + b),
            _ => Real::Approx(self.to_f64() + o.to_f64()),
        }
    }
}

impl Sub for Real {
    type Output = Real;
    fn sub(self, o: Real) -> Real {
        self + (-o)
    }
}

impl Mul for Real {
    type Output = Real;
    fn mul(self, o: Real) -> Real {
        match (self, o) {
            (Real::Exact(a), Real::Exact(b)) => Real::Exact(a * b),
            _ => Real::Approx(self.to_f64() * o.to_f64()),
        }
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        match self {
            Real::Exact(a) => Real::Exact(-a),
            Real::Approx(v) => Real::Approx(-v),
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Exact(r) => f.write_str(&format_rational(r)),
            Real::Approx(v) => write!(f, "{v}"),
        }
    }
}

impl FromStr for Real {
    type Err = Error;

    /// `"p/q"` and plain integers parse as exact; anything else with a
    /// decimal point or exponent parses as an approximate float.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        if t.contains('/') || t.parse::<i64>().is_ok() {
            return parse_rational(t).map(Real::Exact);
        }
        t.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Real::Approx)
            .ok_or_else(|| Error::Parse(format!("not a number: {t:?}")))
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Real::Exact(r) => s.serialize_str(&format_rational(r)),
            Real::Approx(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct RealVisitor;

        impl Visitor<'_> for RealVisitor {
            type Value = Real;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a \"p/q\" string or a number")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Real, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Real, E> {
                Ok(Real::int(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Real, E> {
                i64::try_from(v).map(Real::int).map_err(E::custom)
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Real, E> {
                Ok(Real::Approx(v))
            }
        }

        d.deserialize_any(RealVisitor)
    }
}

/// Least common multiple of a set of denominators.
pub fn lcm_all<I: IntoIterator<Item = i64>>(it: I) -> i64 {
    it.into_iter().fold(1, |acc, d| acc.lcm(&d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!("1/3".parse::<Real>().unwrap(), Real::ratio(1, 3));
        assert_eq!("-2/4".parse::<Real>().unwrap(), Real::ratio(-1, 2));
        assert_eq!("3".parse::<Real>().unwrap(), Real::int(3));
        assert_eq!("0.25".parse::<Real>().unwrap(), Real::Approx(0.25));
        assert!("1/0".parse::<Real>().is_err());
        assert!("abc".parse::<Real>().is_err());
    }

    #[test]
    fn mixing_degrades_to_approx() {
        let a = Real::ratio(1, 3) + Real::Approx(0.5);
        assert!(!a.is_exact());
        let b = Real::ratio(1, 3) * Real::ratio(3, 2);
        assert_eq!(b, Real::ratio(1, 2));
    }

    #[test]
    fn frac_and_distance() {
        assert_eq!(Real::ratio(-1, 3).frac(), Real::ratio(2, 3));
        assert_eq!(Real::ratio(7, 4).dist_to_integer(), Real::ratio(1, 4));
        assert_eq!(Real::Approx(-0.25).frac(), Real::Approx(0.75));
    }

    #[test]
    fn json_round_trip() {
        let v: Vec<Real> = serde_json::from_str(r#"["1/3", 0.5, 2]"#).unwrap();
        assert_eq!(v, vec![Real::ratio(1, 3), Real::Approx(0.5), Real::int(2)]);
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/3",0.5,"2"]"#);
    }
}
