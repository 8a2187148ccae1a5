use thiserror::Error;

/// Errors raised by the arithmetic kernel and the modular-forms layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field configuration: {0}")]
    InvalidConfig(String),
    #[error("element does not belong to this field configuration")]
    ConfigMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("irreducibility is only defined for polynomials of positive degree")]
    DegreeZeroInput,
    #[error("denominator vanishes at the evaluation point")]
    DenominatorVanishes,
    #[error("series is not a unit (constant term is zero)")]
    NonUnit,
    #[error("series must have zero constant term for substitution")]
    NonzeroConstantTerm,
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("lattice exponential must have linear coefficient 1")]
    NotNormalized,
    #[error("the prime T is excluded from reductions modulo T")]
    TIsExcluded,
    #[error("series is not in the span of the basis (first nonzero residual at t^{index})")]
    NotInSpan { index: usize },
    #[error("insufficient precision: need {needed}, have {have}")]
    InsufficientPrecision { needed: usize, have: usize },
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("zero coordinate vector")]
    ZeroVector,
    #[error("residues modulo T must be nonzero and pairwise distinct")]
    ResiduesNotDistinct,
    #[error("expected {expected} primes, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("polynomial has degree zero")]
    DegreeZero,
    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
