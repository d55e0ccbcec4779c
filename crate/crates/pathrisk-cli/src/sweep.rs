//! Radius sweep: how well first-order updates track the Monte Carlo ground
//! truth when the combined radius changes and the path stays fixed.
//!
//! For each (trajectory, sigma) pair the combined radius walks a log-spaced
//! grid; at each step both update rules predict the next probability from
//! the current Monte Carlo value, and the prediction error against a fresh
//! Monte Carlo run is recorded.

use rayon::prelude::*;

use pathrisk_core::estimators::{cp_update, mc_ground_truth, Scenario, UpdateMode};
use pathrisk_core::{CombinedBody, Mat2};

use crate::bench::cell_seed;
use crate::config::BenchSetup;
use crate::CliError;

#[derive(Clone, Debug)]
pub struct SweepCell {
    pub trajectory: usize,
    pub sigma_index: usize,
    /// Monte Carlo value per radius.
    pub mc: Vec<f64>,
    /// Sensitivity-based prediction for radius k+1 (length radii-1).
    pub sensitivity_update: Vec<f64>,
    /// Risk-density-based prediction for radius k+1 (length radii-1).
    pub riskdensity_update: Vec<f64>,
    pub mean_abs_err_sensitivity: f64,
    pub mean_abs_err_riskdensity: f64,
    pub mean_rel_err_sensitivity: f64,
    pub mean_rel_err_riskdensity: f64,
}

#[derive(Clone, Debug)]
pub struct SweepResults {
    pub names: Vec<String>,
    pub sigmas: Vec<f64>,
    pub radii: Vec<f64>,
    pub cells: Vec<SweepCell>,
}

/// Mean of per-step absolute errors and of per-step relative errors.
///
/// A step with zero ground truth and zero error contributes zero; a step
/// with zero ground truth but a nonzero error counts as 100% relative error.
fn error_means(mc: &[f64], pred: &[f64]) -> (f64, f64) {
    let mut abs_acc = 0.0;
    let mut rel_acc = 0.0;
    let n = pred.len();
    for k in 0..n {
        let truth = mc[k + 1];
        let e = (truth - pred[k]).abs();
        abs_acc += e;
        rel_acc += if truth > 0.0 {
            e / truth
        } else if e == 0.0 {
            0.0
        } else {
            1.0
        };
    }
    (abs_acc / n as f64, rel_acc / n as f64)
}

pub fn radius_sweep(setup: &BenchSetup) -> Result<SweepResults, CliError> {
    let radii = &setup.sweep_radii;
    if radii.len() < 2 {
        return Err(CliError::Config("radius sweep needs at least two radii".into()));
    }

    let jobs: Vec<(usize, usize)> = (0..setup.trajectories.len())
        .flat_map(|i| (0..setup.sweep_sigmas.len()).map(move |j| (i, j)))
        .collect();

    let cells: Vec<Result<SweepCell, CliError>> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let sigma = setup.sweep_sigmas[j];
            let mut mc = Vec::with_capacity(radii.len());
            let mut scenarios = Vec::with_capacity(radii.len());
            for (k, &r) in radii.iter().enumerate() {
                let body = CombinedBody::new(r).map_err(|e| CliError::Runtime(e.to_string()))?;
                let sc = Scenario::new(
                    setup.trajectories[i].clone(),
                    setup.obstacle_mean,
                    body,
                    Mat2::isotropic(sigma),
                )
                .map_err(|e| CliError::Runtime(e.to_string()))?;
                let seed = cell_seed(setup.seed, i, 1000 * (j + 1) + k);
                let est = mc_ground_truth(&sc, setup.mc_trials, setup.ds_factor * r, seed);
                mc.push(est.value);
                scenarios.push(sc);
            }

            let mut sens = Vec::with_capacity(radii.len() - 1);
            let mut rd = Vec::with_capacity(radii.len() - 1);
            for k in 0..radii.len() - 1 {
                let dt = radii[k + 1] - radii[k];
                sens.push(cp_update(
                    mc[k],
                    &scenarios[k],
                    radii[k],
                    dt,
                    UpdateMode::SensitivityH3,
                    &setup.quad,
                )?);
                rd.push(cp_update(
                    mc[k],
                    &scenarios[k],
                    radii[k],
                    dt,
                    UpdateMode::RiskDensity,
                    &setup.quad,
                )?);
            }

            let (abs_s, rel_s) = error_means(&mc, &sens);
            let (abs_r, rel_r) = error_means(&mc, &rd);
            Ok(SweepCell {
                trajectory: i,
                sigma_index: j,
                mc,
                sensitivity_update: sens,
                riskdensity_update: rd,
                mean_abs_err_sensitivity: abs_s,
                mean_abs_err_riskdensity: abs_r,
                mean_rel_err_sensitivity: rel_s,
                mean_rel_err_riskdensity: rel_r,
            })
        })
        .collect();

    let mut out = Vec::with_capacity(cells.len());
    for c in cells {
        out.push(c?);
    }
    Ok(SweepResults {
        names: setup.names.clone(),
        sigmas: setup.sweep_sigmas.clone(),
        radii: radii.clone(),
        cells: out,
    })
}

/// Per-(trajectory, sigma) radius table:
/// `radius,mc,sensitivity_update,riskdensity_update` (updates blank for the
/// first radius, which seeds the walk).
pub fn sweep_cell_csv(results: &SweepResults, cell: &SweepCell) -> String {
    let mut out = String::from("radius,mc,sensitivity_update,riskdensity_update\n");
    for (k, &r) in results.radii.iter().enumerate() {
        let (s, d) = if k == 0 {
            (String::new(), String::new())
        } else {
            (
                crate::csvio::fmt_f64(cell.sensitivity_update[k - 1]),
                crate::csvio::fmt_f64(cell.riskdensity_update[k - 1]),
            )
        };
        out.push_str(&format!(
            "{},{},{s},{d}\n",
            crate::csvio::fmt_f64(r),
            crate::csvio::fmt_f64(cell.mc[k])
        ));
    }
    out
}

/// Error summary in the layout of the radius-sweep tables: one row per
/// (trajectory, sigma), mean absolute and mean relative errors per mode.
pub fn sweep_summary_csv(results: &SweepResults) -> String {
    let mut out = String::from(
        "trajectory,sigma,mean_abs_err_riskdensity,mean_abs_err_sensitivity,\
         mean_rel_err_riskdensity,mean_rel_err_sensitivity\n",
    );
    for c in &results.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            results.names[c.trajectory],
            crate::csvio::fmt_f64(results.sigmas[c.sigma_index]),
            crate::csvio::fmt_f64(c.mean_abs_err_riskdensity),
            crate::csvio::fmt_f64(c.mean_abs_err_sensitivity),
            crate::csvio::fmt_f64(c.mean_rel_err_riskdensity),
            crate::csvio::fmt_f64(c.mean_rel_err_sensitivity),
        ));
    }
    out
}

/// Write all radius-sweep artifacts; returns written paths.
pub fn write_sweep(
    out: &std::path::Path,
    results: &SweepResults,
) -> Result<Vec<std::path::PathBuf>, CliError> {
    std::fs::create_dir_all(out)?;
    let mut written = Vec::new();
    for cell in &results.cells {
        let path = out.join(format!(
            "sweep_{}_sigma{}.csv",
            results.names[cell.trajectory], cell.sigma_index
        ));
        std::fs::write(&path, sweep_cell_csv(results, cell))?;
        written.push(path);
    }
    let path = out.join("sweep_summary.csv");
    std::fs::write(&path, sweep_summary_csv(results))?;
    written.push(path);
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::FileConfig;

    #[test]
    fn telescoping_and_monotonicity() {
        let mut cfg = FileConfig::default();
        cfg.montecarlo.trials = 800;
        cfg.radius_sweep.sigmas = vec![1e-2];
        cfg.trajectories.truncate(1);
        let setup = cfg.to_setup().unwrap();
        let res = radius_sweep(&setup).unwrap();

        // radius grid telescopes: last = first + sum of steps
        let steps: f64 = res.radii.windows(2).map(|w| w[1] - w[0]).sum();
        assert!((res.radii[0] + steps - *res.radii.last().unwrap()).abs() < 1e-12);

        // nested swept sets: MC nondecreasing in r
        let mc = &res.cells[0].mc;
        for w in mc.windows(2) {
            assert!(w[1] >= w[0] - 1e-12, "{mc:?}");
        }
    }

    #[test]
    fn error_means_handle_zero_truth() {
        let (abs, rel) = error_means(&[0.0, 0.0, 0.5], &[0.0, 0.4]);
        assert!((abs - 0.05).abs() < 1e-15);
        assert!((rel - 0.1).abs() < 1e-15);
    }
}
