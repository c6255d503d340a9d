//! Linear Kalman filtering, Gaussian likelihood evaluation, and
//! time-of-arrival trilateration for planar tracking, plus a deterministic
//! simulator that measures how much filtering improves over raw position
//! fixes.
//!
//! The crate is `no_std`-compatible (with `alloc`); the default `std`
//! feature only switches the standard library back on for dependents that
//! want it. All floating-point math is routed through `libm` so results
//! are bit-identical across std and no_std builds.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod error;
pub mod gaussian;
pub mod kf;
pub mod localize;
pub mod mat;
mod math;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
