use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (defect {0:e})")]
    NonHermitian(f64),
    #[error("cyclic grading mod {modulus} is incompatible with the deformation matrix")]
    IncompatibleCyclicGrading { modulus: u64 },
    #[error("operator is not homogeneous: {0}")]
    NonHomogeneousInput(String),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("bound {bound} is below the completeness bound {required}")]
    InsufficientBound { bound: u64, required: u64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("torus level {q} is not a multiple of the required denominator {required}")]
    IncompatibleDenominator { q: u64, required: u64 },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("exact arithmetic unavailable: {0}")]
    NotExact(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
