use thiserror::Error;

use crate::diagram::Arc;
use crate::tangle::TangleFraction;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed token `{token}`: {reason}")]
    Parse { token: String, reason: String },
    #[error("arc {arc} appears {count} times (expected exactly 2)")]
    ArcMultiplicity { arc: Arc, count: usize },
    #[error("the crossings do not form a planar diagram")]
    NonPlanar,
    #[error("slot {slot} reuses endpoint arc {arc}")]
    SlotEndpointReuse { slot: usize, arc: Arc },
    #[error("crossing index {index} out of range ({count} crossings)")]
    SiteOutOfRange { index: usize, count: usize },
    #[error("slot index {index} out of range ({count} slots)")]
    SlotOutOfRange { index: usize, count: usize },
    #[error("diagram has {0} unfilled slot(s)")]
    UnfilledSlot(usize),
    #[error("arc {0} does not exist in the diagram")]
    InvalidArc(Arc),
    #[error("diagram is not oriented")]
    NotOriented,
    #[error("operation requires an unoriented diagram")]
    Oriented,
    #[error("orientation conflict: {0}")]
    OrientationConflict(String),
    #[error("tangle {0} is not orientation compatible with the slot")]
    IncompatibleOrientation(TangleFraction),
    #[error("expected a tangle diagram with exactly one boundary slot, found {0}")]
    Arity(usize),
    #[error("invalid fraction: {0}")]
    InvalidFraction(String),
    #[error("invalid continued fraction: {0}")]
    InvalidContinuedFraction(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} and {1} are not Farey neighbours")]
    NotFareyPair(TangleFraction, TangleFraction),
    #[error("template violates the linear determinant model at {fraction}: determinant {actual}, model {expected}")]
    ValidationMismatch { fraction: TangleFraction, expected: u64, actual: u64 },
    #[error("both determinant coefficients vanish; the template has no nonzero insertion")]
    ZeroCoefficients,
    #[error("slot {0} has no fitted coefficients")]
    NotFitted(usize),
    #[error("{0} is the zero locus of the ambient template")]
    ZeroLocus(TangleFraction),
    #[error("{0} has an even denominator; both orientation classes are compatible")]
    Unconstrained(TangleFraction),
    #[error("orientation class must be given for {0} (even denominator)")]
    AmbiguousOrientation(TangleFraction),
    #[error("determinant of the summand is zero")]
    ZeroDeterminantSummand,
    #[error("determinant does not fit in 64 bits")]
    Overflow,
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
