//! Collision probability of a disk robot moving along a planar path past a
//! disk obstacle whose relative position is Gaussian-uncertain.
//!
//! The crate provides the geometric reduction to the Minkowski difference
//! domain, bivariate Gaussian quadrature, parametric trajectories with their
//! swept-tube map, and a family of collision-probability estimators:
//!
//! * [`estimators::mc_ground_truth`] — seeded Monte Carlo with a stopped-path
//!   collision rule, used as ground truth;
//! * [`estimators::naive_param_h3`] — the swept-tube double integral;
//! * [`estimators::volterra_h2`] — the Markovian product-integral form
//!   `1 - exp(-I)` sharing the tube integral;
//! * [`estimators::grid_estimate`] — occupancy-grid rasterization with
//!   cell-mass charging and multiplicative combination;
//! * [`estimators::stagewise_estimate`] — waypoint chance-constraint sum
//!   (Boole relaxation);
//! * [`estimators::risk_density`] and [`estimators::risk_density_estimate`] —
//!   the path-intrinsic risk density and its linear probability estimate;
//! * [`estimators::sensitivity`] and [`estimators::cp_update`] — tube-width
//!   sensitivities and first-order probability updates under radius changes.
//!
//! The crate is `no_std`-compatible (requires `alloc`). With the default
//! `std` feature enabled, estimator results carry wall-clock timings;
//! without it timings are reported as zero.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod estimators;
pub mod gauss;
pub mod geometry;
pub mod math;
pub mod path;
pub mod quad;
pub mod vec2;

pub use error::Error;
pub use gauss::{Gaussian2, QuadratureSpec};
pub use geometry::{CombinedBody, Disk};
pub use path::{Trajectory, TubePoint};
pub use vec2::{Mat2, Vec2};

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;
