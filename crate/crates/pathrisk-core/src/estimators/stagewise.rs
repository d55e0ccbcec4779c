//! Stage-wise chance-constraint estimate: Boole's sum of per-waypoint
//! collision probabilities, each approximated as combined-disk area times a
//! Gaussian density value.

use alloc::vec::Vec;

use super::{Estimate, Meta, Method, Scenario, Stopwatch};
use crate::gauss::Gaussian2;
use crate::math;
use crate::vec2::Vec2;

/// Where the density is taken within each waypoint disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundMode {
    /// Density at the disk center offset; fast, not guaranteed conservative.
    Center,
    /// Density at the maximizing point inside the disk; upper-bounds the
    /// per-waypoint probability.
    MaxPoint,
}

impl BoundMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundMode::Center => "center",
            BoundMode::MaxPoint => "max_point",
        }
    }
}

/// Density-maximizing point of `noise` inside the disk of radius `r` at `c`.
///
/// Isotropic covariances admit the closed form (walk toward the mean);
/// otherwise projected gradient ascent on the log-density with a fixed
/// iteration cap.
fn max_density_point(noise: &Gaussian2, c: Vec2, r: f64) -> Vec2 {
    let cov = noise.cov();
    let isotropic = math::abs(cov.m12) <= 1e-14 * cov.m11.max(cov.m22)
        && math::abs(cov.m11 - cov.m22) <= 1e-12 * cov.m11.max(cov.m22);
    if isotropic {
        let d = c.norm();
        return if d <= r { Vec2::ZERO } else { c * (1.0 - r / d) };
    }

    let inv = cov.inverse().expect("SPD covariance");
    // Lipschitz constant of the gradient: largest eigenvalue of the inverse
    let tr = inv.m11 + inv.m22;
    let disc = math::sqrt((inv.m11 - inv.m22) * (inv.m11 - inv.m22) + 4.0 * inv.m12 * inv.m12);
    let step = 1.0 / (0.5 * (tr + disc));

    let mut x = c;
    for _ in 0..100 {
        let grad = inv.mul_vec(x); // gradient of the quadratic form /2
        let mut next = x - grad * step;
        let d = (next - c).norm();
        if d > r {
            next = c + (next - c) * (r / d);
        }
        if (next - x).norm() < 1e-14 {
            return next;
        }
        x = next;
    }
    x
}

/// Boole relaxation over `n_waypoints` uniform-in-parameter waypoints.
///
/// A single waypoint sits at the midpoint of the parameter range; for n >= 2
/// the endpoints are included.
pub fn stagewise_estimate(sc: &Scenario, n_waypoints: u32, mode: BoundMode) -> Estimate {
    assert!(n_waypoints >= 1, "at least one waypoint required");
    let clock = Stopwatch::start();
    let (lo, hi) = sc.param_range();
    let r = sc.body().radius();
    let area = sc.body().area();

    let waypoints: Vec<f64> = if n_waypoints == 1 {
        alloc::vec![0.5 * (lo + hi)]
    } else {
        (0..n_waypoints)
            .map(|i| lo + (hi - lo) * i as f64 / (n_waypoints - 1) as f64)
            .collect()
    };

    let mut raw = 0.0;
    for &s in &waypoints {
        let offset = sc.offset_clamped(s);
        let density = match mode {
            BoundMode::Center => sc.noise().pdf(offset),
            BoundMode::MaxPoint => sc.noise().pdf(max_density_point(sc.noise(), offset, r)),
        };
        raw += area * density;
    }

    Estimate::from_raw(
        Method::StageWise,
        raw,
        clock.seconds(),
        Meta::StageWise { waypoints: n_waypoints, mode },
    )
}
