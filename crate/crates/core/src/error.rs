use thiserror::Error;

use crate::igusa::ProjectiveRational;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("valuation of zero is infinite")]
    ZeroValuation,
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("{0} is not an odd prime")]
    NotOddPrime(i64),
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("{0} is not a squarefree integer other than 0 and 1")]
    NotSquarefree(i64),
    #[error("weighted point is invalid: {0}")]
    InvalidPoint(String),
    #[error("unknown discriminant {0}; expected 6, 10 or 22")]
    UnknownDiscriminant(u32),
    #[error("unknown Atkin-Lehner subgroup {0:?} for D = {1}")]
    UnknownSubgroup(String, u32),
    #[error("j = {0} gives a degenerate curve (j in {{0, oo}} or J10(j) = 0)")]
    DegenerateCurve(ProjectiveRational),
    #[error("j = {0} is an excluded special point")]
    ExcludedPoint(ProjectiveRational),
    #[error("j = {0} lies under a degenerate fiber of the obstruction conic bundle")]
    DegenerateFiber(ProjectiveRational),
    #[error("interpolation triple has colliding values")]
    DegenerateTriple,
    #[error("square-class forcing for D = {d}, W = {w} leaves atom {atom:?} undetermined")]
    UnderdeterminedCase { d: u32, w: String, atom: String },
    #[error("derived Delta = {derived} for D = {d}, W = {w} disagrees with recorded {recorded}")]
    RegistryMismatch {
        d: u32,
        w: String,
        derived: String,
        recorded: String,
    },
    #[error("polynomial must be nonzero")]
    ZeroPolynomial,
    #[error("height ladder must be strictly increasing with every step >= 1")]
    InvalidLadder,
    #[error("comparability certificate failed: a counted j reached naive height {reached} > {allowed}; rerun with a larger safety factor")]
    SafetyFactorExceeded { reached: u64, allowed: u64 },
    #[error("product lemma hypotheses violated: {0}")]
    HypothesesViolated(String),
    #[error("not enough data to fit: {0}")]
    InsufficientData(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
