use std::fmt::Debug;

use num::complex::Complex64;

use super::cyclo::Cyclo;
use super::phase::Phase;
use super::real::Real;

/// Matrix entry type. Two implementations: [`Cyclo`] for the exact rational
/// path and [`Complex64`] for floating-point data.
pub trait Scalar: Clone + Debug + Send + Sync + 'static {
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn conj(&self) -> Self;
    /// Exact zero for [`Cyclo`]; bitwise zero for floats.
    fn is_zero(&self) -> bool;
    /// Cheap sparsity test used to drop stored entries.
    fn is_structurally_zero(&self) -> bool;
    fn to_complex(&self) -> Complex64;

    /// `None` when the scalar type cannot hold the value exactly.
    fn from_phase(p: Phase) -> Option<Self>;
    fn from_real(r: Real) -> Option<Self>;
    /// `√r` for `r ≥ 0`.
    fn sqrt_real(r: Real) -> Option<Self>;
}

impl Scalar for Cyclo {
    const EXACT: bool = true;

    fn zero() -> Self {
        Cyclo::zero()
    }
    fn one() -> Self {
        Cyclo::one()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Cyclo::conj(self)
    }
    fn is_zero(&self) -> bool {
        Cyclo::is_zero(self)
    }
    fn is_structurally_zero(&self) -> bool {
        self.is_formally_zero()
    }
    fn to_complex(&self) -> Complex64 {
        Cyclo::to_complex(self)
    }
    fn from_phase(p: Phase) -> Option<Self> {
        match p {
            Phase::Exact(r) => Some(Cyclo::root_of_unity(r)),
            Phase::Approx(_) => None,
        }
    }
    fn from_real(r: Real) -> Option<Self> {
        r.exact().map(Cyclo::from_rational)
    }
    fn sqrt_real(r: Real) -> Option<Self> {
        r.exact().and_then(Cyclo::sqrt)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn is_structurally_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn from_phase(p: Phase) -> Option<Self> {
        Some(p.to_complex())
    }
    fn from_real(r: Real) -> Option<Self> {
        Some(Complex64::new(r.to_f64(), 0.0))
    }
    fn sqrt_real(r: Real) -> Option<Self> {
        let v = r.to_f64();
        (v >= 0.0).then(|| Complex64::new(v.sqrt(), 0.0))
    }
}
