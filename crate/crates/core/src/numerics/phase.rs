use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::complex::Complex64;
use num::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::real::{format_rational, rational_frac, Rational, Real};

/// Circle tolerance for comparing approximate phases.
pub const PHASE_TOL: f64 = 1e-9;

/// A point of ℝ/ℤ standing for the unimodular number `e^{2πi·value}`.
///
/// The stored value always lies in `[0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Phase {
    Exact(Rational),
    Approx(f64),
}

impl Phase {
    pub fn zero() -> Self {
        Phase::Exact(Rational::zero())
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Phase::from_real(Real::ratio(p, q))
    }

    pub fn from_real(r: Real) -> Self {
        match r.frac() {
            Real::Exact(f) => Phase::Exact(f),
            Real::Approx(f) => Phase::Approx(f),
        }
    }

    pub fn value(&self) -> Real {
        match self {
            Phase::Exact(r) => Real::Exact(*r),
            Phase::Approx(v) => Real::Approx(*v),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Phase::Exact(_))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Phase::Exact(r) => r.is_zero(),
            Phase::Approx(v) => *v == 0.0,
        }
    }

    pub fn scale(&self, k: i64) -> Phase {
        Phase::from_real(self.value().scale(k))
    }

    /// `e^{2πi·value}`; denominators 1, 2 and 4 give exact `±1`, `±i`.
    pub fn to_complex(&self) -> Complex64 {
        if let Phase::Exact(r) = self {
            let d = *r.denom();
            if d == 1 || d == 2 || d == 4 {
                let quarter = (rational_frac(r) * 4).to_integer();
                return match quarter {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                };
            }
        }
        Complex64::from_polar(1.0, TAU * self.value().to_f64())
    }

    /// Minimum arc distance on ℝ/ℤ.
    pub fn distance(&self, other: &Phase) -> f64 {
        let d = (*self - *other).value().to_f64();
        d.min(1.0 - d).abs()
    }

    /// Exact equality for two exact phases; [`PHASE_TOL`] on the circle otherwise.
    pub fn approx_eq(&self, other: &Phase) -> bool {
        match (self, other) {
            (Phase::Exact(a), Phase::Exact(b)) => a == b,
            _ => self.distance(other) <= PHASE_TOL,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Phase::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Phase::Approx(v) => *v,
        }
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, o: Phase) -> Phase {
        Phase::from_real(self.value() + o.value())
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, o: Phase) -> Phase {
        Phase::from_real(self.value() - o.value())
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::from_real(-self.value())
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Exact(r) => f.write_str(&format_rational(r)),
            Phase::Approx(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.value().serialize(s)
    }
}

pub fn phase_to_complex(p: Phase) -> Complex64 {
    p.to_complex()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(Phase::zero().to_complex(), Complex64::new(1.0, 0.0));
        assert_eq!(Phase::ratio(1, 2).to_complex(), Complex64::new(-1.0, 0.0));
        assert_eq!(Phase::ratio(3, 4).to_complex(), Complex64::new(0.0, -1.0));
        // cos(2π/3), sin(2π/3)
        let c = Phase::ratio(1, 3).to_complex();
        assert!((c.re + 0.5).abs() < 1e-15);
        assert!((c.im - 0.866_025_403_784_438_6).abs() < 1e-15);
    }

    #[test]
    fn normalization() {
        assert_eq!(Phase::ratio(-1, 3), Phase::ratio(2, 3));
        assert_eq!(Phase::ratio(5, 4), Phase::ratio(1, 4));
        assert_eq!(Phase::ratio(1, 3) + Phase::ratio(2, 3), Phase::zero());
        assert!(Phase::Approx(0.999_999_999_9).approx_eq(&Phase::zero()));
    }

    #[test]
    fn mixed_sum_is_approximate() {
        let p = Phase::ratio(1, 3) + Phase::Approx(0.25);
        assert!(!p.is_exact());
        assert!((p.to_f64() - (1.0 / 3.0 + 0.25)).abs() < 1e-15);
    }
}
