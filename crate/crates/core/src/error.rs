use alloc::string::String;

use thiserror::Error;

use crate::lattice::CurveClass;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("expected a positive integer")]
    NotPositive,
    #[error("argument must be at least 2")]
    NeedsAtLeastTwo,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("curve class must have a positive coordinate")]
    NotEffective,
    #[error("{divisor} does not divide the index of {class}")]
    NotDivisible { class: CurveClass, divisor: String },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("lattice rank must be positive")]
    ZeroRank,
    #[error("semi-positivity violated: K_X . e_{index} = {value} > 0")]
    NotSemiPositive { index: usize, value: String },
    #[error("dimension {0} is below 3")]
    DimensionTooSmall(u32),
    #[error("truncation weight {index} is not positive")]
    NonPositiveWeight { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series have different truncation data")]
    TruncationMismatch,
    #[error("{0} lies beyond the truncation; its coefficient is unknown")]
    OutOfTruncation(CurveClass),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("invalid ring model: {0}")]
    InvalidModel(String),
    #[error("expected an element of degree {expected}")]
    DegreeMismatch { expected: u32 },
    #[error("element has {got} coordinates, ring has {expected} basis classes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("lambda = 1 is a pole")]
    PoleAtOne,
    #[error("pairing matrix is singular")]
    SingularPairing,
    #[error("no integral lift: {0}")]
    NoIntegralLift(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("table is not divisor-closed: {missing} (a divisor of {of}) is missing")]
    NotDivisorClosed { missing: CurveClass, of: CurveClass },
    #[error("expected a {expected} table, got {got}")]
    KindMismatch { expected: &'static str, got: &'static str },
    #[error("QK/GV relations start at n = 1 insertion; n = 0 is not supported")]
    UnsupportedN,
    #[error("degree hypothesis violated at {class}: {reason}")]
    DegreeHypothesisViolated { class: CurveClass, reason: String },
    #[error("insertion degree list has {got} entries for n = {n}")]
    InsertionCount { n: u32, got: usize },
    #[error("divisor chain of {class} mixes K_X.beta = 0 and K_X.beta != 0")]
    InconsistentCanonicalBranch { class: CurveClass },
    #[error("{0} is not primitive")]
    NotPrimitive(CurveClass),
    #[error("tables disagree on geometry, truncation or insertions")]
    IncompatibleTables,
    #[error("{0} lies beyond the table's truncation")]
    OutOfTruncation(CurveClass),
    #[error("rank mismatch between geometry ({geometry}) and truncation ({truncation})")]
    RankMismatch { geometry: usize, truncation: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
