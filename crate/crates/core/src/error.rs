use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("lower central series does not reach 0 within {dim} steps")]
    NonNilpotent { dim: usize },
    #[error("basis is not adapted to the lower central series (term {term} is not a coordinate subspace)")]
    BasisNotAdapted { term: usize },
    #[error("algebra is not Carnot (failing grade {grade})")]
    NotCarnot { grade: u32 },
    #[error("inconsistent extension of the base action at basis vector {index}")]
    InconsistentExtension { index: usize },
    #[error("index |det| = {0} is not a positive integer")]
    NonIntegerIndex(String),
    #[error("unsupported eigenvalue: {0}")]
    UnsupportedEigenvalue(String),
    #[error("no filtration-adapted Jordan basis exists for filtration level {level}")]
    NoAdaptedBasis { level: u32 },
    #[error("growth space at threshold {threshold} is not defined over the rationals")]
    GrowthSpaceNotRational { threshold: usize },
    #[error("growth space at threshold {threshold} is not closed under the bracket")]
    SubalgebraClosureFailure { threshold: usize },
    #[error("degenerate fit: only {points} usable grid points")]
    DegenerateFit { points: usize },
    #[error("standing assumptions violated: {0}")]
    AssumptionViolation(String),
    #[error("matrix is singular")]
    Singular,
    #[error("invalid algebraic number: {0}")]
    InvalidAlgebraic(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
