//! Fixed-point iterations for quasi-contractive self-maps on spaces with a
//! convexity mapping, and tools to compare their rates of convergence.
//!
//! * [`space`]: metric models (Euclidean n-space, Poincaré half-plane) with
//!   `W(x, y, α)` and seeded checks of its axioms.
//! * [`mapping`]: self-maps, grid classifiers for the contractive classes,
//!   and the named catalog.
//! * [`iteration`]: Picard, Mann, Ishikawa and Xu-Noor schemes.
//! * [`rate`]: product-form error envelopes and the ratio-limit comparison.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

// `!(a < b)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod iteration;
pub mod mapping;
pub mod rate;
pub mod scalar;
pub mod space;

pub use error::{Error, Result};
pub use iteration::{algorithm_step, run_algorithm, AlgorithmKind, RunOptions, Schedule, Schedules, Termination, Trajectory};
pub use mapping::{
    classify_mapping, estimate_min_h, lambda_of, verify_key_estimates, ClassParams, ClassificationReport,
    ContractiveMapping, Domain, Lambda, MappingClass, ZamfirescuParams,
};
pub use rate::{berinde_compare, bound_sequence, check_bound_dominance, BoundKind, BoundSequence, CompareOptions, RateVerdict, Verdict};
pub use scalar::Scalar;
pub use space::{ModelTag, Point, SpaceModel};

pub type Point64 = Point<f64>;
pub type Space64 = SpaceModel<f64>;
pub type Mapping64 = ContractiveMapping<f64>;
pub type Schedules64 = Schedules<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type Bound64 = BoundSequence<f64>;
pub type Verdict64 = RateVerdict<f64>;

pub type Point32 = Point<f32>;
pub type Space32 = SpaceModel<f32>;
pub type Mapping32 = ContractiveMapping<f32>;
