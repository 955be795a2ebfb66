use thiserror::Error;

use crate::space::ModelTag;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point belongs to {found} model, space is {expected}")]
    ModelMismatch { expected: ModelTag, found: ModelTag },

    #[error("point has {found} coordinates, space dimension is {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite coordinate")]
    NonFinite,

    #[error("half-plane point needs y > 0 (got y = {0})")]
    NotInHalfplane(f64),

    #[error("convexity weight {0} outside [0, 1]")]
    WeightOutOfRange(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("point outside the mapping domain")]
    OutsideDomain,

    #[error("grid needs at least 2 points per axis (got {0})")]
    GridTooSmall(usize),

    #[error("(C1) requires schedule terms in [0, 1) (got {0})")]
    ScheduleOutOfRange(f64),

    #[error("{kind} requires a {which} schedule")]
    MissingSchedule { kind: &'static str, which: &'static str },

    #[error("declared point is not fixed: d(T(p), p) = {residual}")]
    NotFixed { residual: f64 },

    #[error("non-finite iterate at index {index}")]
    NonFiniteIterate { index: usize },

    #[error("lambda = {lambda} >= 1 cannot certify convergence (needs h < 1/2)")]
    LambdaNotUsable { lambda: f64 },

    #[error("initial distance must be nonnegative (got {0})")]
    NegativeDistance(f64),

    #[error("bound sequence is non-certifying (some factor exceeds 1)")]
    NonCertifying,

    #[error("sequence lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("sequences too short for tail starting at {tail_start}")]
    TailTooShort { tail_start: usize },

    #[error("unknown mapping: {0}")]
    UnknownMapping(String),
}
