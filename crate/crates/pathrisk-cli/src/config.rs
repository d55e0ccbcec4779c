//! Human-editable TOML configuration for scenarios, the benchmark, and the
//! radius sweep. The built-in default reproduces the reference benchmark:
//! three trajectories, ten log-spaced covariance scales, combined radius 0.1.

use serde::{Deserialize, Serialize};

use pathrisk_core::estimators::BoundMode;
use pathrisk_core::{CombinedBody, Disk, QuadratureSpec, Trajectory, Vec2};

use crate::CliError;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    /// Master seed; per-scenario substreams are derived from it.
    pub seed: u64,
    pub bodies: BodiesConfig,
    pub obstacle: ObstacleConfig,
    pub sigma: SigmaConfig,
    pub trajectories: Vec<TrajectoryConfig>,
    pub montecarlo: McConfig,
    pub stagewise: StagewiseConfig,
    pub grid: GridConfig,
    pub quadrature: QuadConfig,
    pub radius_sweep: SweepConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodiesConfig {
    pub robot_radius: f64,
    pub obstacle_radius: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleConfig {
    pub mean: [f64; 2],
}

/// Log-spaced inclusive grid of covariance scales `Sigma_T = sigma * I`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaConfig {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

// no deny_unknown_fields here: serde cannot combine it with flatten
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrajectoryConfig {
    pub name: String,
    #[serde(flatten)]
    pub family: TrajectoryFamily,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TrajectoryFamily {
    Line { start: [f64; 2], end: [f64; 2] },
    Quadratic { x: [f64; 3], y: [f64; 3] },
    Polyline { points: Vec<[f64; 2]> },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub trials: u64,
    /// Path discretization: `ds_max = ds_factor * combined_radius`.
    pub ds_factor: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StagewiseConfig {
    pub waypoints: u32,
    /// "center" (density at the disk center) or "max_point" (upper bound).
    pub mode: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub cell_sizes: Vec<f64>,
    pub cell_cap: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub count: usize,
    pub sigmas: Vec<f64>,
}

impl Default for FileConfig {
    fn default() -> Self {
        FileConfig {
            seed: 42,
            bodies: BodiesConfig { robot_radius: 0.05, obstacle_radius: 0.05 },
            obstacle: ObstacleConfig { mean: [2.5, 0.0] },
            sigma: SigmaConfig { min: 1e-3, max: 1.0, count: 10 },
            trajectories: vec![
                TrajectoryConfig {
                    name: "mu_A".into(),
                    family: TrajectoryFamily::Line { start: [0.0, 0.0], end: [5.0, 0.0] },
                },
                TrajectoryConfig {
                    name: "mu_B".into(),
                    family: TrajectoryFamily::Quadratic {
                        x: [0.0, 5.0, 0.0],
                        y: [0.0, 0.5, -0.5],
                    },
                },
                TrajectoryConfig {
                    name: "mu_C".into(),
                    family: TrajectoryFamily::Quadratic {
                        x: [0.0, 5.0, 0.0],
                        y: [0.0, 1.0, -1.0],
                    },
                },
            ],
            montecarlo: McConfig { trials: 10_000, ds_factor: 0.1 },
            stagewise: StagewiseConfig { waypoints: 50, mode: "center".into() },
            grid: GridConfig { cell_sizes: vec![0.001953125], cell_cap: 50_000_000 },
            quadrature: QuadConfig { rel_tol: 1e-6, abs_tol: 1e-12, max_subdivisions: 400 },
            radius_sweep: SweepConfig {
                r_min: 0.01,
                r_max: 1.0,
                count: 10,
                sigmas: vec![1e-3, 1e-2, 1e-1, 1.0],
            },
        }
    }
}

impl FileConfig {
    pub fn from_path(path: &std::path::Path) -> Result<Self, CliError> {
        if !path.exists() {
            return Err(CliError::Usage(format!("config file not found: {}", path.display())));
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let cfg: FileConfig =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("default config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let c = |m: &str| CliError::Config(m.to_string());
        if !(self.bodies.robot_radius > 0.0) || !(self.bodies.obstacle_radius > 0.0) {
            return Err(c("body radii must be positive"));
        }
        if !(self.sigma.min > 0.0) || !(self.sigma.max > self.sigma.min) || self.sigma.count < 1 {
            return Err(c("sigma grid must be positive, increasing, nonempty"));
        }
        if self.trajectories.is_empty() {
            return Err(c("at least one trajectory required"));
        }
        if self.montecarlo.trials < 1 || !(self.montecarlo.ds_factor > 0.0) {
            return Err(c("montecarlo trials >= 1 and ds_factor > 0 required"));
        }
        if self.stagewise.waypoints < 1 {
            return Err(c("stagewise waypoints >= 1 required"));
        }
        parse_bound_mode(&self.stagewise.mode)?;
        if self.grid.cell_sizes.is_empty() || self.grid.cell_sizes.iter().any(|&h| !(h > 0.0)) {
            return Err(c("grid cell sizes must be positive"));
        }
        if !(self.quadrature.rel_tol > 0.0)
            || !(self.quadrature.abs_tol > 0.0)
            || self.quadrature.max_subdivisions == 0
        {
            return Err(c("quadrature tolerances must be positive"));
        }
        if !(self.radius_sweep.r_min > 0.0)
            || !(self.radius_sweep.r_max > self.radius_sweep.r_min)
            || self.radius_sweep.count < 2
            || self.radius_sweep.sigmas.is_empty()
        {
            return Err(c("radius sweep needs an increasing radius range and sigmas"));
        }
        Ok(())
    }

    /// Resolve into the runtime benchmark setup.
    pub fn to_setup(&self) -> Result<BenchSetup, CliError> {
        self.validate()?;
        let robot = Disk::new(self.bodies.robot_radius, Vec2::ZERO)
            .map_err(|e| CliError::Config(e.to_string()))?;
        let obstacle_disk = Disk::new(
            self.bodies.obstacle_radius,
            Vec2::new(self.obstacle.mean[0], self.obstacle.mean[1]),
        )
        .map_err(|e| CliError::Config(e.to_string()))?;
        let body = pathrisk_core::geometry::minkowski_combine(&robot, &obstacle_disk)
            .map_err(|e| CliError::Config(e.to_string()))?;

        let mut names = Vec::new();
        let mut trajectories = Vec::new();
        for t in &self.trajectories {
            names.push(t.name.clone());
            trajectories.push(build_trajectory(&t.family)?);
        }

        Ok(BenchSetup {
            names,
            trajectories,
            sigmas: pathrisk_core::math::log_spaced(self.sigma.min, self.sigma.max, self.sigma.count),
            body,
            obstacle_mean: Vec2::new(self.obstacle.mean[0], self.obstacle.mean[1]),
            seed: self.seed,
            mc_trials: self.montecarlo.trials,
            ds_factor: self.montecarlo.ds_factor,
            stagewise_n: self.stagewise.waypoints,
            stagewise_mode: parse_bound_mode(&self.stagewise.mode)?,
            grid_cell_sizes: self.grid.cell_sizes.clone(),
            grid_cell_cap: self.grid.cell_cap,
            quad: QuadratureSpec::new(
                self.quadrature.rel_tol,
                self.quadrature.abs_tol,
                self.quadrature.max_subdivisions,
            )
            .map_err(|e| CliError::Config(e.to_string()))?,
            sweep_radii: pathrisk_core::math::log_spaced(
                self.radius_sweep.r_min,
                self.radius_sweep.r_max,
                self.radius_sweep.count,
            ),
            sweep_sigmas: self.radius_sweep.sigmas.clone(),
        })
    }
}

pub fn parse_bound_mode(s: &str) -> Result<BoundMode, CliError> {
    match s {
        "center" => Ok(BoundMode::Center),
        "max_point" => Ok(BoundMode::MaxPoint),
        other => Err(CliError::Config(format!(
            "unknown stagewise mode '{other}' (expected center or max_point)"
        ))),
    }
}

fn build_trajectory(family: &TrajectoryFamily) -> Result<Trajectory, CliError> {
    let r = match family {
        TrajectoryFamily::Line { start, end } => {
            Trajectory::line(Vec2::new(start[0], start[1]), Vec2::new(end[0], end[1]))
        }
        TrajectoryFamily::Quadratic { x, y } => Trajectory::quadratic(*x, *y),
        TrajectoryFamily::Polyline { points } => Trajectory::polyline(
            points.iter().map(|p| Vec2::new(p[0], p[1])).collect(),
        ),
    };
    r.map_err(|e| CliError::Config(e.to_string()))
}

/// Validated, runtime-ready benchmark description.
#[derive(Clone, Debug)]
pub struct BenchSetup {
    pub names: Vec<String>,
    pub trajectories: Vec<Trajectory>,
    pub sigmas: Vec<f64>,
    pub body: CombinedBody,
    pub obstacle_mean: Vec2,
    pub seed: u64,
    pub mc_trials: u64,
    pub ds_factor: f64,
    pub stagewise_n: u32,
    pub stagewise_mode: BoundMode,
    pub grid_cell_sizes: Vec<f64>,
    pub grid_cell_cap: u64,
    pub quad: QuadratureSpec,
    pub sweep_radii: Vec<f64>,
    pub sweep_sigmas: Vec<f64>,
}
