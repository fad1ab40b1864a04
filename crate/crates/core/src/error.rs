use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("field of order {0} exceeds the 2^16 cap")]
    FieldTooLarge(u64),
    #[error("modulus is not irreducible of the requested degree")]
    ReducibleModulus,
    #[error("designated element does not have order q-1")]
    NotPrimitive,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("{e} does not divide {n}")]
    NotADivisor { e: u64, n: u64 },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("abscissa {0} appears twice")]
    DuplicateAbscissa(String),
    #[error("polynomial does not permute the field")]
    NotAPermutation,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("point {0} appears twice")]
    DuplicatePoint(String),
    #[error("expected {expected} points, got {got}")]
    WrongCardinality { expected: usize, got: usize },
    #[error("point is not an internal nucleus of the set")]
    NotAnInternalNucleus,
    #[error("inconsistent distribution: {0}")]
    InconsistentDistribution(String),
    #[error("tail admits no completion: {0}")]
    InfeasibleTail(String),
    #[error("distribution has no nonzero entry")]
    EmptyDistribution,
    #[error("transform needs a and e nonzero and sigma < s")]
    InvalidTransform,
    #[error("point lies on the line at infinity")]
    PointAtInfinity,
    #[error("(0:0:1) is not an internal nucleus of the graph")]
    NucleusMissing,
    #[error("f/x is not a permutation fixing 0")]
    NotDecomposable,
    #[error("polynomial does not have the required shape: {0}")]
    ShapeMismatch(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("parity condition fails: {0}")]
    InfeasibleParity(String),
    #[error("operation requires odd q")]
    EvenField,
    #[error("claim needs q >= {min}")]
    TooSmallForClaim { min: u64 },
    #[error("q = {q} exceeds the limit {limit} for this operation")]
    TooLarge { q: u64, limit: u64 },
    #[error("no arc representatives supplied")]
    MissingArcRepresentatives,
    #[error("certificate failed: {0}")]
    CertificationFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
