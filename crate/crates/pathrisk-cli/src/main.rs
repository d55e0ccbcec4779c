//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage errors (missing files, unknown methods),
//! 3 config errors, 4 estimator/runtime errors. Data goes to stdout,
//! diagnostics to stderr.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pathrisk_cli::bench::{error_metrics, fit_scale, run_benchmark};
use pathrisk_cli::config::{BenchSetup, FileConfig};
use pathrisk_cli::csvio;
use pathrisk_cli::sweep::{radius_sweep, write_sweep};
use pathrisk_cli::CliError;
use pathrisk_core::estimators::{
    grid_estimate_capped, mc_ground_truth, naive_param_h3, risk_density_estimate,
    stagewise_estimate, volterra_h2, Estimate, Meta, Scenario,
};
use pathrisk_core::Mat2;

#[derive(Parser)]
#[command(
    name = "pathrisk",
    about = "Collision probability of a disk robot along a planar path past a disk obstacle \
             under Gaussian position uncertainty",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Benchmark configuration file (TOML); built-in default when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for result files.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the Monte Carlo trial count.
    #[arg(long)]
    trials: Option<u64>,
    /// Override the grid cell size (workspace units).
    #[arg(long)]
    cells: Option<f64>,
    /// Override the stage-wise waypoint count.
    #[arg(long)]
    waypoints: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one estimator on one (trajectory, sigma) scenario.
    Estimate {
        #[command(flatten)]
        common: CommonArgs,
        /// montecarlo | parametrization | volterra | stagewise | riskdensity | grid
        #[arg(long)]
        method: String,
        /// Trajectory name from the config (default: the first one).
        #[arg(long)]
        trajectory: Option<String>,
        /// Covariance scale sigma (Sigma_T = sigma I).
        #[arg(long, default_value_t = 0.01)]
        sigma: f64,
    },
    /// Run the full benchmark and write values/errors/summary CSV files.
    Bench {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated estimator selection (default: all).
        #[arg(long, value_delimiter = ',')]
        methods: Vec<String>,
        /// Output formats: csv (always written) and/or svg.
        #[arg(long, value_delimiter = ',', default_value = "csv")]
        emit: Vec<String>,
    },
    /// Sweep the combined radius and compare first-order updates against
    /// fresh Monte Carlo runs.
    RadiusSweep {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Fit the scale multiplying the risk density that best matches the
    /// Monte Carlo ground truth in Frobenius norm.
    FitScale {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Print the built-in benchmark configuration as TOML.
    PrintDefaultConfig,
}

fn load_setup(common: &CommonArgs) -> Result<BenchSetup, CliError> {
    let mut cfg = match &common.config {
        Some(path) => FileConfig::from_path(path)?,
        None => FileConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = common.trials {
        cfg.montecarlo.trials = trials;
    }
    if let Some(cell) = common.cells {
        cfg.grid.cell_sizes = vec![cell];
    }
    if let Some(n) = common.waypoints {
        cfg.stagewise.waypoints = n;
    }
    cfg.to_setup()
}

const ESTIMATE_METHODS: [&str; 6] =
    ["montecarlo", "parametrization", "volterra", "stagewise", "riskdensity", "grid"];

fn meta_params(meta: &Meta) -> String {
    match meta {
        Meta::MonteCarlo { trials, seed, ds_max, hits } => {
            format!("trials={trials} seed={seed} ds_max={} hits={hits}", csvio::fmt_f64(*ds_max))
        }
        Meta::Tube { rel_tol, abs_tol } => format!("rel_tol={rel_tol:e} abs_tol={abs_tol:e}"),
        Meta::Grid { cell_size, cells } => {
            format!("cell_size={} cells={cells}", csvio::fmt_f64(*cell_size))
        }
        Meta::StageWise { waypoints, mode } => {
            format!("waypoints={waypoints} mode={}", mode.as_str())
        }
        Meta::RiskDensity { scale, rel_tol } => {
            format!("scale={} rel_tol={rel_tol:e}", csvio::fmt_f64(*scale))
        }
    }
}

fn cmd_estimate(
    common: &CommonArgs,
    method: &str,
    trajectory: &Option<String>,
    sigma: f64,
) -> Result<(), CliError> {
    if !ESTIMATE_METHODS.contains(&method) {
        return Err(CliError::Usage(format!(
            "unknown method '{method}'; available: {}",
            ESTIMATE_METHODS.join(", ")
        )));
    }
    let setup = load_setup(common)?;
    if !(sigma > 0.0) {
        return Err(CliError::Config(format!("sigma must be positive, got {sigma}")));
    }
    let idx = match trajectory {
        None => 0,
        Some(name) => setup
            .names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| {
                CliError::Config(format!(
                    "unknown trajectory '{name}'; config has: {}",
                    setup.names.join(", ")
                ))
            })?,
    };
    let sc = Scenario::new(
        setup.trajectories[idx].clone(),
        setup.obstacle_mean,
        setup.body,
        Mat2::isotropic(sigma),
    )
    .map_err(|e| CliError::Config(e.to_string()))?;

    let est: Estimate = match method {
        "montecarlo" => Ok(mc_ground_truth(
            &sc,
            setup.mc_trials,
            setup.ds_factor * setup.body.radius(),
            setup.seed,
        )),
        "parametrization" => naive_param_h3(&sc, &setup.quad),
        "volterra" => volterra_h2(&sc, &setup.quad),
        "stagewise" => Ok(stagewise_estimate(&sc, setup.stagewise_n, setup.stagewise_mode)),
        "riskdensity" => risk_density_estimate(&sc, setup.body.radius(), &setup.quad),
        "grid" => grid_estimate_capped(&sc, setup.grid_cell_sizes[0], setup.grid_cell_cap),
        _ => unreachable!("validated above"),
    }
    .map_err(CliError::from)?;

    // machine-readable line on stdout
    println!(
        "method={} trajectory={} sigma={} value={} raw={} seconds={} {}",
        est.method.as_str(),
        setup.names[idx],
        csvio::fmt_f64(sigma),
        csvio::fmt_f64(est.value),
        csvio::fmt_f64(est.raw),
        csvio::fmt_f64(est.wall_time),
        meta_params(&est.meta),
    );
    // human summary on stderr
    eprintln!(
        "{} on {} (sigma = {:.3e}): P = {:.6} (raw {:.6}) in {:.3e} s",
        est.method.as_str(),
        setup.names[idx],
        sigma,
        est.value,
        est.raw,
        est.wall_time
    );
    Ok(())
}

fn cmd_bench(common: &CommonArgs, methods: &[String], emit: &[String]) -> Result<(), CliError> {
    for e in emit {
        if e != "csv" && e != "svg" {
            return Err(CliError::Usage(format!("unknown emit format '{e}' (csv or svg)")));
        }
    }
    let setup = load_setup(common)?;
    let cache = common.out.join("cache");
    let results = run_benchmark(&setup, methods, Some(&cache))?;
    let emit_svg = emit.iter().any(|e| e == "svg");
    let written = csvio::write_benchmark(&common.out, &results, emit_svg)?;

    let mut summary_rows = Vec::new();
    for run in results.all_runs() {
        let (_, fro, max) = error_metrics(&results.ground_truth.values, &run.values)?;
        summary_rows.push((run.label.clone(), fro, max, run.total_seconds()));
    }
    print!("{}", csvio::summary_csv(&summary_rows));
    for path in &written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_radius_sweep(common: &CommonArgs) -> Result<(), CliError> {
    let setup = load_setup(common)?;
    let results = radius_sweep(&setup)?;
    let written = write_sweep(&common.out, &results)?;
    print!("{}", pathrisk_cli::sweep::sweep_summary_csv(&results));
    for path in &written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_fit_scale(common: &CommonArgs) -> Result<(), CliError> {
    let setup = load_setup(common)?;
    let cache = common.out.join("cache");
    // ground truth and risk densities are enough for the fit
    let results = run_benchmark(&setup, &["riskdensity".to_string()], Some(&cache))?;
    let (r_opt, norm) = fit_scale(&results.ground_truth.values, &results.risk_densities);
    let default_run = results.method("riskdensity").expect("riskdensity requested");
    let (_, default_norm, _) =
        error_metrics(&results.ground_truth.values, &default_run.values)?;
    println!(
        "r_opt={} frobenius={} default_scale_frobenius={}",
        csvio::fmt_f64(r_opt),
        csvio::fmt_f64(norm),
        csvio::fmt_f64(default_norm)
    );
    std::fs::create_dir_all(&common.out)?;
    let path = common.out.join("fit_scale.csv");
    std::fs::write(
        &path,
        format!(
            "r_opt,frobenius,default_scale_frobenius\n{},{},{}\n",
            csvio::fmt_f64(r_opt),
            csvio::fmt_f64(norm),
            csvio::fmt_f64(default_norm)
        ),
    )?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Estimate { common, method, trajectory, sigma } => {
            cmd_estimate(common, method, trajectory, *sigma)
        }
        Command::Bench { common, methods, emit } => cmd_bench(common, methods, emit),
        Command::RadiusSweep { common } => cmd_radius_sweep(common),
        Command::FitScale { common } => cmd_fit_scale(common),
        Command::PrintDefaultConfig => {
            print!("{}", FileConfig::default().to_toml());
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
