//! Trigonometry of smooth Minkowski planes.
//!
//! A [`PlaneContext`] wraps a smooth strictly convex norm, a symplectic form
//! and a tabulated unit circle. On top of it live the Birkhoff map `b`, the
//! cosine `cm`, the signed sine `sn`, the outer distortion functional and the
//! arc-length calculus of the unit circle, each with a brute-force oracle.

// `!(a < b)` is used on purpose to reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod birkhoff;
pub mod calculus;
pub mod cli;
pub mod context;
pub mod distortion;
pub mod error;
pub mod norm;
pub mod oracles;
pub mod output;
pub mod report;
pub mod trig;
pub mod verify;
pub mod vec2;

pub use context::{build_context, CirclePoint, PlaneContext, RadonFlag};
pub use error::{Error, Result};
pub use norm::NormSpec;
pub use report::VerifyReport;
pub use vec2::Vec2;
