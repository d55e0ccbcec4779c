//! The trajectory-by-covariance benchmark: Monte Carlo ground truth, one
//! matrix per estimation method, error norms, timing, and the scale fit for
//! the risk-density estimate.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use pathrisk_core::estimators::{
    grid_estimate_capped, mc_ground_truth, naive_param_h3, risk_density, risk_density_estimate,
    stagewise_estimate, Estimate, Scenario,
};
use pathrisk_core::Mat2;

use crate::config::BenchSetup;
use crate::CliError;

/// Row-major trajectories-by-sigmas matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// One method's outputs over the whole scenario grid.
#[derive(Clone, Debug)]
pub struct MethodRun {
    /// Stable method label used in file names and the summary.
    pub label: String,
    /// Saturated values.
    pub values: Matrix,
    /// Pre-saturation values.
    pub raws: Matrix,
    /// Per-cell estimator wall time.
    pub seconds: Matrix,
}

impl MethodRun {
    pub fn total_seconds(&self) -> f64 {
        self.seconds.data.iter().sum()
    }
}

#[derive(Clone, Debug)]
pub struct BenchResults {
    pub names: Vec<String>,
    pub sigmas: Vec<f64>,
    /// Monte Carlo ground truth (`M_T`).
    pub ground_truth: MethodRun,
    /// One run per estimation method (`M_P` each), in stable order.
    pub methods: Vec<MethodRun>,
    /// Raw risk densities per scenario, for the scale fit.
    pub risk_densities: Matrix,
}

impl BenchResults {
    /// Ground truth plus estimators, in summary order.
    pub fn all_runs(&self) -> impl Iterator<Item = &MethodRun> {
        std::iter::once(&self.ground_truth).chain(self.methods.iter())
    }

    pub fn method(&self, label: &str) -> Option<&MethodRun> {
        self.all_runs().find(|m| m.label == label)
    }
}

/// Method-tagged error matrix `M_e = M_T - M_P`.
#[derive(Clone, Debug)]
pub struct ErrorMatrix {
    pub method: String,
    pub entries: Matrix,
}

impl ErrorMatrix {
    pub fn new(method: &str, m_t: &Matrix, m_p: &Matrix) -> Result<Self, CliError> {
        if m_t.rows != m_p.rows || m_t.cols != m_p.cols {
            return Err(CliError::Runtime(format!(
                "shape mismatch: {}x{} vs {}x{}",
                m_t.rows, m_t.cols, m_p.rows, m_p.cols
            )));
        }
        let mut entries = Matrix::zeros(m_t.rows, m_t.cols);
        for k in 0..entries.data.len() {
            entries.data[k] = m_t.data[k] - m_p.data[k];
        }
        Ok(ErrorMatrix { method: method.to_string(), entries })
    }
}

/// Error matrix with its Frobenius norm and largest absolute entry.
pub fn error_metrics(m_t: &Matrix, m_p: &Matrix) -> Result<(Matrix, f64, f64), CliError> {
    let e = ErrorMatrix::new("", m_t, m_p)?.entries;
    let fro = e.frobenius();
    let max = e.max_abs();
    Ok((e, fro, max))
}

/// Deterministic per-cell seed so scenario jobs can run in any order.
pub fn cell_seed(master: u64, i: usize, j: usize) -> u64 {
    // splitmix64 over the cell index
    let cell = ((i as u64) << 32) | ((j as u64) + 1);
    let mut z = master.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(cell));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn scenario(setup: &BenchSetup, i: usize, sigma: f64) -> Result<Scenario, CliError> {
    Scenario::new(
        setup.trajectories[i].clone(),
        setup.obstacle_mean,
        setup.body,
        Mat2::isotropic(sigma),
    )
    .map_err(|e| CliError::Runtime(e.to_string()))
}

/// Run one estimator over the whole grid, cells in parallel, assembling by
/// index so the result is schedule-independent.
fn run_over_grid<F>(setup: &BenchSetup, label: &str, f: F) -> Result<MethodRun, CliError>
where
    F: Fn(&Scenario, usize, usize) -> Result<Estimate, CliError> + Sync,
{
    let rows = setup.trajectories.len();
    let cols = setup.sigmas.len();
    let cells: Vec<(usize, usize)> =
        (0..rows).flat_map(|i| (0..cols).map(move |j| (i, j))).collect();

    let results: Vec<Result<(usize, usize, Estimate), CliError>> = cells
        .par_iter()
        .map(|&(i, j)| {
            let sc = scenario(setup, i, setup.sigmas[j])?;
            let est = f(&sc, i, j)?;
            Ok((i, j, est))
        })
        .collect();

    let mut run = MethodRun {
        label: label.to_string(),
        values: Matrix::zeros(rows, cols),
        raws: Matrix::zeros(rows, cols),
        seconds: Matrix::zeros(rows, cols),
    };
    for r in results {
        let (i, j, est) = r?;
        run.values.set(i, j, est.value);
        run.raws.set(i, j, est.raw);
        run.seconds.set(i, j, est.wall_time);
    }
    Ok(run)
}

/// Method selection for `--methods`; ground truth always runs.
pub const METHOD_LABELS: [&str; 4] = ["stagewise", "parametrization", "riskdensity", "grid"];

/// Run the full benchmark.
///
/// `methods` filters the estimator list by label (empty = all). When
/// `cache_dir` is given, the Monte Carlo ground-truth matrix is loaded from /
/// stored into a content-addressed cache file keyed by everything that
/// affects it.
pub fn run_benchmark(
    setup: &BenchSetup,
    methods: &[String],
    cache_dir: Option<&Path>,
) -> Result<BenchResults, CliError> {
    for m in methods {
        if !METHOD_LABELS.contains(&m.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown method '{m}' (expected one of {})",
                METHOD_LABELS.join(", ")
            )));
        }
    }
    let want = |label: &str| methods.is_empty() || methods.iter().any(|m| m == label);

    let ground_truth = ground_truth_cached(setup, cache_dir)?;

    let mut runs: Vec<MethodRun> = Vec::new();
    if want("stagewise") {
        runs.push(run_over_grid(setup, "stagewise", |sc, _, _| {
            Ok(stagewise_estimate(sc, setup.stagewise_n, setup.stagewise_mode))
        })?);
    }
    if want("parametrization") {
        runs.push(run_over_grid(setup, "parametrization", |sc, _, _| {
            naive_param_h3(sc, &setup.quad).map_err(CliError::from)
        })?);
    }
    if want("riskdensity") {
        runs.push(run_over_grid(setup, "riskdensity", |sc, _, _| {
            risk_density_estimate(sc, sc.body().radius(), &setup.quad).map_err(CliError::from)
        })?);
    }
    if want("grid") {
        for (k, &h) in setup.grid_cell_sizes.iter().enumerate() {
            let label = if setup.grid_cell_sizes.len() == 1 {
                "grid".to_string()
            } else {
                format!("grid_{k}")
            };
            runs.push(run_over_grid(setup, &label, |sc, _, _| {
                grid_estimate_capped(sc, h, setup.grid_cell_cap).map_err(CliError::from)
            })?);
        }
    }

    // raw risk densities for the scale fit (cheap; always computed)
    let rows = setup.trajectories.len();
    let cols = setup.sigmas.len();
    let mut rd = Matrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let sc = scenario(setup, i, setup.sigmas[j])?;
            rd.set(i, j, risk_density(&sc, &setup.quad)?);
        }
    }

    Ok(BenchResults {
        names: setup.names.clone(),
        sigmas: setup.sigmas.clone(),
        ground_truth,
        methods: runs,
        risk_densities: rd,
    })
}

fn ground_truth_cached(
    setup: &BenchSetup,
    cache_dir: Option<&Path>,
) -> Result<MethodRun, CliError> {
    let key = mc_cache_key(setup);
    if let Some(dir) = cache_dir {
        if let Some(run) = load_mc_cache(&cache_path(dir, key), setup)? {
            return Ok(run);
        }
    }
    let ds = setup.ds_factor * setup.body.radius();
    let run = run_over_grid(setup, "montecarlo", |sc, i, j| {
        Ok(mc_ground_truth(sc, setup.mc_trials, ds, cell_seed(setup.seed, i, j)))
    })?;
    if let Some(dir) = cache_dir {
        store_mc_cache(&cache_path(dir, key), key, &run)?;
    }
    Ok(run)
}

/// FNV-1a over a canonical description of everything the ground truth
/// depends on. Stable across runs and platforms.
fn mc_cache_key(setup: &BenchSetup) -> u64 {
    let mut desc = String::new();
    desc.push_str("mc-v1;");
    desc.push_str(&format!("seed={};trials={};dsf={:e};", setup.seed, setup.mc_trials, setup.ds_factor));
    desc.push_str(&format!("r={:e};mu_o={:e},{:e};", setup.body.radius(), setup.obstacle_mean.x, setup.obstacle_mean.y));
    for s in &setup.sigmas {
        desc.push_str(&format!("s={s:e};"));
    }
    for t in &setup.trajectories {
        desc.push_str(&format!("t={t:?};"));
    }
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in desc.as_bytes() {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01B3);
    }
    hash
}

fn cache_path(dir: &Path, key: u64) -> PathBuf {
    dir.join(format!("mc_{key:016x}.txt"))
}

const CACHE_HEADER: &str = "pathrisk-mc-cache v1";

fn load_mc_cache(path: &Path, setup: &BenchSetup) -> Result<Option<MethodRun>, CliError> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(_) => return Ok(None),
    };
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.starts_with(CACHE_HEADER) => {}
        _ => return Ok(None), // unknown version: recompute
    }
    let rows = setup.trajectories.len();
    let cols = setup.sigmas.len();
    let mut run = MethodRun {
        label: "montecarlo".to_string(),
        values: Matrix::zeros(rows, cols),
        raws: Matrix::zeros(rows, cols),
        seconds: Matrix::zeros(rows, cols),
    };
    let mut seen = 0usize;
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Ok(None);
        }
        let parse =
            |s: &str| s.parse::<f64>().map_err(|e| CliError::Runtime(format!("cache: {e}")));
        let i = fields[0].parse::<usize>().map_err(|e| CliError::Runtime(e.to_string()))?;
        let j = fields[1].parse::<usize>().map_err(|e| CliError::Runtime(e.to_string()))?;
        if i >= rows || j >= cols {
            return Ok(None);
        }
        run.values.set(i, j, parse(fields[2])?);
        run.raws.set(i, j, parse(fields[3])?);
        run.seconds.set(i, j, parse(fields[4])?);
        seen += 1;
    }
    if seen != rows * cols {
        return Ok(None);
    }
    Ok(Some(run))
}

fn store_mc_cache(path: &Path, key: u64, run: &MethodRun) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut out = format!("{CACHE_HEADER} {key:016x}\n");
    for i in 0..run.values.rows {
        for j in 0..run.values.cols {
            out.push_str(&format!(
                "{i},{j},{},{},{}\n",
                crate::csvio::fmt_f64(run.values.get(i, j)),
                crate::csvio::fmt_f64(run.raws.get(i, j)),
                crate::csvio::fmt_f64(run.seconds.get(i, j)),
            ));
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Fit the scalar multiplying the risk density so the saturated estimate
/// best matches the ground truth in Frobenius norm.
///
/// Coarse scan over the bracket, then golden-section refinement; returns
/// `(r_opt, achieved_norm)`.
pub fn fit_scale(m_t: &Matrix, rd: &Matrix) -> (f64, f64) {
    assert_eq!(m_t.rows, rd.rows);
    assert_eq!(m_t.cols, rd.cols);
    let objective = |c: f64| -> f64 {
        let mut acc = 0.0;
        for k in 0..m_t.data.len() {
            let e = m_t.data[k] - (rd.data[k] * c).min(1.0);
            acc += e * e;
        }
        acc.sqrt()
    };

    let (mut best_c, mut best_f) = (0.0, objective(0.0));
    const SCAN: usize = 400;
    for k in 0..=SCAN {
        let c = k as f64 / SCAN as f64;
        let f = objective(c);
        if f < best_f {
            best_f = f;
            best_c = c;
        }
    }

    let mut a = (best_c - 1.0 / SCAN as f64).max(0.0);
    let mut b = (best_c + 1.0 / SCAN as f64).min(1.0);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c1 = b - phi * (b - a);
    let mut c2 = a + phi * (b - a);
    let mut f1 = objective(c1);
    let mut f2 = objective(c2);
    for _ in 0..200 {
        if b - a < 1e-12 {
            break;
        }
        if f1 <= f2 {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - phi * (b - a);
            f1 = objective(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + phi * (b - a);
            f2 = objective(c2);
        }
    }
    let c = 0.5 * (a + b);
    (c, objective(c))
}
