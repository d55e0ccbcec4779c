//! Collision-probability estimators over a [`Scenario`].
//!
//! All estimators are pure functions of `(scenario, parameters, seed)`;
//! Monte Carlo trials draw from per-trial generator substreams so results are
//! independent of evaluation order and safe to split across workers.

mod grid;
mod montecarlo;
mod risk;
mod stagewise;
mod tube;

pub use grid::{grid_estimate, grid_estimate_capped, DEFAULT_CELL_CAP};
pub use montecarlo::mc_ground_truth;
pub use risk::{cp_update, risk_density, risk_density_estimate, UpdateMode};
pub use stagewise::{stagewise_estimate, BoundMode};
pub use tube::{naive_param_h3, sensitivity, volterra_h2, Hypothesis};

use alloc::vec::Vec;

use crate::error::Error;
use crate::gauss::{integrate_disk, Gaussian2, QuadratureSpec};
use crate::geometry::CombinedBody;
use crate::path::Trajectory;
use crate::vec2::{Mat2, Vec2};
use crate::Result;

/// One estimation problem: a trajectory, an obstacle, the combined body, and
/// the relative-position uncertainty.
///
/// `param_range` restricts every estimator to a closed subinterval of the
/// path parameter, which yields the probability-to-go of the remaining
/// subpath.
#[derive(Clone, Debug)]
pub struct Scenario {
    trajectory: Trajectory,
    obstacle_mean: Vec2,
    body: CombinedBody,
    noise: Gaussian2,
    param_range: (f64, f64),
}

impl Scenario {
    /// Scenario over the full path `s in [0, 1]`.
    pub fn new(
        trajectory: Trajectory,
        obstacle_mean: Vec2,
        body: CombinedBody,
        sigma_t: Mat2,
    ) -> Result<Self> {
        Self::with_param_range(trajectory, obstacle_mean, body, sigma_t, 0.0, 1.0)
    }

    /// Scenario restricted to `s in [lo, hi]` (the probability-to-go form).
    pub fn with_param_range(
        trajectory: Trajectory,
        obstacle_mean: Vec2,
        body: CombinedBody,
        sigma_t: Mat2,
        lo: f64,
        hi: f64,
    ) -> Result<Self> {
        if !obstacle_mean.is_finite() {
            return Err(Error::Domain { what: "obstacle mean", value: f64::NAN });
        }
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(Error::Domain { what: "param range", value: lo });
        }
        let noise = Gaussian2::new(Vec2::ZERO, sigma_t)?;
        Ok(Scenario { trajectory, obstacle_mean, body, noise, param_range: (lo, hi) })
    }

    pub fn trajectory(&self) -> &Trajectory {
        &self.trajectory
    }

    pub fn obstacle_mean(&self) -> Vec2 {
        self.obstacle_mean
    }

    pub fn body(&self) -> &CombinedBody {
        &self.body
    }

    /// Zero-mean relative-position noise `N(0, Sigma_T)`.
    pub fn noise(&self) -> &Gaussian2 {
        &self.noise
    }

    pub fn param_range(&self) -> (f64, f64) {
        self.param_range
    }

    /// The obstacle position distribution `N(mu_O, Sigma_T)` in workspace
    /// coordinates, used by Monte Carlo sampling and the grid charger.
    pub fn obstacle_gaussian(&self) -> Gaussian2 {
        Gaussian2::new(self.obstacle_mean, self.noise.cov()).expect("cov validated")
    }

    /// `mu_R(s) - mu_O`, the disk center in the difference domain.
    ///
    /// `s` is clamped into `[0, 1]` so quadrature nodes that land one ulp
    /// outside the domain do not error.
    pub(crate) fn offset_clamped(&self, s: f64) -> Vec2 {
        let s = s.clamp(0.0, 1.0);
        self.trajectory.eval(s).expect("clamped s is in domain").position - self.obstacle_mean
    }
}

/// Estimation method tags, stable across the CSV and CLI surfaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    MonteCarlo,
    NaiveTube,
    Volterra,
    Grid,
    StageWise,
    RiskDensity,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::MonteCarlo => "montecarlo",
            Method::NaiveTube => "parametrization",
            Method::Volterra => "volterra",
            Method::Grid => "grid",
            Method::StageWise => "stagewise",
            Method::RiskDensity => "riskdensity",
        }
    }
}

impl core::fmt::Display for Method {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Method parameters recorded alongside each estimate.
#[derive(Clone, Debug, PartialEq)]
pub enum Meta {
    MonteCarlo { trials: u64, seed: u64, ds_max: f64, hits: u64 },
    Tube { rel_tol: f64, abs_tol: f64 },
    Grid { cell_size: f64, cells: u64 },
    StageWise { waypoints: u32, mode: BoundMode },
    RiskDensity { scale: f64, rel_tol: f64 },
}

/// A method-tagged probability estimate.
///
/// `raw` keeps the pre-saturation value (stage-wise sums and risk-density
/// products can exceed one); `value` is `min(raw, 1)` and is what gets
/// reported. `wall_time` is in seconds and zero when built without `std`.
#[derive(Clone, Debug)]
pub struct Estimate {
    pub method: Method,
    pub value: f64,
    pub raw: f64,
    pub wall_time: f64,
    pub meta: Meta,
}

impl Estimate {
    pub(crate) fn from_raw(method: Method, raw: f64, wall_time: f64, meta: Meta) -> Self {
        let raw = raw.max(0.0);
        Estimate { method, value: raw.min(1.0), raw, wall_time, meta }
    }
}

/// Wall-clock stopwatch; reports zero without the `std` feature.
pub(crate) struct Stopwatch {
    #[cfg(feature = "std")]
    start: std::time::Instant,
}

impl Stopwatch {
    pub fn start() -> Self {
        Stopwatch {
            #[cfg(feature = "std")]
            start: std::time::Instant::now(),
        }
    }

    #[cfg(feature = "std")]
    pub fn seconds(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    #[cfg(not(feature = "std"))]
    pub fn seconds(&self) -> f64 {
        0.0
    }
}

/// Probability of collision at a single configuration: the Gaussian mass of
/// the combined disk at `mu_R(s) - mu_O` under `N(0, Sigma_T)`.
pub fn p_config(sc: &Scenario, s: f64, q: &QuadratureSpec) -> Result<f64> {
    let (lo, hi) = sc.param_range;
    if !(lo..=hi).contains(&s) {
        return Err(Error::Domain { what: "configuration parameter", value: s });
    }
    integrate_disk(&sc.noise, sc.offset_clamped(s), sc.body.radius(), q)
}

/// Independent-event combiner: `1 - prod(1 - p_i)`.
///
/// The empty list combines to zero.
pub fn combine_h1(probs: &[f64]) -> f64 {
    let mut survival = 1.0;
    for &p in probs {
        debug_assert!((0.0..=1.0).contains(&p), "probability out of range: {p}");
        survival *= 1.0 - p.clamp(0.0, 1.0);
        if survival == 0.0 {
            return 1.0;
        }
    }
    1.0 - survival
}

/// Markovian combiner over an ordered configuration list: the first factor
/// is the unconditioned `P(C_{s0})`, each following factor charges only the
/// newly swept lune `D(s_{i+1}) \ D(s_i)`.
pub fn combine_h2_discrete(sc: &Scenario, configs: &[f64], q: &QuadratureSpec) -> Result<f64> {
    if configs.is_empty() {
        return Ok(0.0);
    }
    let (lo, hi) = sc.param_range;
    for w in configs.windows(2) {
        if w[0] > w[1] {
            return Err(Error::Domain { what: "configuration order", value: w[1] });
        }
    }
    if configs[0] < lo || *configs.last().expect("nonempty") > hi {
        return Err(Error::Domain { what: "configuration parameter", value: configs[0] });
    }

    let mut terms: Vec<f64> = Vec::with_capacity(configs.len());
    terms.push(p_config(sc, configs[0], q)?);
    for w in configs.windows(2) {
        let c_old = sc.offset_clamped(w[0]);
        let c_new = sc.offset_clamped(w[1]);
        if c_old == c_new {
            continue; // empty lune
        }
        terms.push(lune_mass(&sc.noise, c_new, c_old, sc.body.radius(), q)?);
    }
    Ok(combine_h1(&terms))
}

/// Gaussian mass of the lune `D(c_new) \ D(c_old)`.
///
/// Polar coordinates about `c_new`: along each ray the old disk excludes at
/// most one radial interval (the roots of a quadratic), so the angular
/// integrand is the difference of two smooth radial integrals and stays
/// piecewise smooth; the outer adaptive pass isolates the tangency kinks.
fn lune_mass(g: &Gaussian2, c_new: Vec2, c_old: Vec2, r: f64, q: &QuadratureSpec) -> Result<f64> {
    use crate::math;
    use crate::quad;

    let d = c_new - c_old;
    let d_sq = d.norm_squared();
    let r_sq = r * r;
    let inner_spec = q.inner(math::TAU);
    let mut inner_failure: Option<f64> = None;

    let outer = quad::adaptive(
        |phi| {
            let u = Vec2::new(math::cos(phi), math::sin(phi));
            let mut radial = |a: f64, b: f64| -> f64 {
                if b <= a {
                    return 0.0;
                }
                match quad::adaptive(|rho| g.pdf(c_new + u * rho) * rho, a, b, &inner_spec) {
                    Ok(v) => v,
                    Err(Error::Tolerance { best, error }) => {
                        inner_failure = Some(inner_failure.unwrap_or(0.0).max(error));
                        best
                    }
                    Err(_) => unreachable!("radial adaptive only fails on tolerance"),
                }
            };

            let full = radial(0.0, r);
            // excluded interval: |(c_new + rho u) - c_old|^2 <= r^2
            let half_b = d.dot(u);
            let disc = half_b * half_b - (d_sq - r_sq);
            if disc <= 0.0 {
                return full;
            }
            let sq = math::sqrt(disc);
            let lo = (-half_b - sq).max(0.0);
            let hi = (-half_b + sq).min(r);
            full - radial(lo, hi)
        },
        0.0,
        math::TAU,
        q,
    )?;

    match inner_failure {
        Some(err) => Err(Error::Tolerance { best: outer.clamp(0.0, 1.0), error: err }),
        None => Ok(outer.clamp(0.0, 1.0)),
    }
}

