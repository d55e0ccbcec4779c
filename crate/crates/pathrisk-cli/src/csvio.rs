//! CSV emission and parsing.
//!
//! Column contracts (bit-exact order):
//! * values files:  `method,trajectory,sigma,value,raw,seconds`
//! * error files:   `trajectory,sigma,error`
//! * summary file:  `method,frobenius,max_abs,seconds`
//!
//! Floats are printed with 17 significant digits so re-parsing reproduces
//! the in-memory matrices exactly.

use std::path::Path;

use crate::bench::{BenchResults, Matrix, MethodRun};
use crate::CliError;

/// 17 significant digits: lossless f64 round-trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub const VALUES_HEADER: &str = "method,trajectory,sigma,value,raw,seconds";
pub const ERRORS_HEADER: &str = "trajectory,sigma,error";
pub const SUMMARY_HEADER: &str = "method,frobenius,max_abs,seconds";

pub fn values_csv(run: &MethodRun, names: &[String], sigmas: &[f64]) -> String {
    let mut out = String::from(VALUES_HEADER);
    out.push('\n');
    for i in 0..run.values.rows {
        for j in 0..run.values.cols {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                run.label,
                names[i],
                fmt_f64(sigmas[j]),
                fmt_f64(run.values.get(i, j)),
                fmt_f64(run.raws.get(i, j)),
                fmt_f64(run.seconds.get(i, j)),
            ));
        }
    }
    out
}

pub fn errors_csv(errors: &Matrix, names: &[String], sigmas: &[f64]) -> String {
    let mut out = String::from(ERRORS_HEADER);
    out.push('\n');
    for i in 0..errors.rows {
        for j in 0..errors.cols {
            out.push_str(&format!(
                "{},{},{}\n",
                names[i],
                fmt_f64(sigmas[j]),
                fmt_f64(errors.get(i, j))
            ));
        }
    }
    out
}

pub fn summary_csv(rows: &[(String, f64, f64, f64)]) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    for (label, fro, max, secs) in rows {
        out.push_str(&format!("{label},{},{},{}\n", fmt_f64(*fro), fmt_f64(*max), fmt_f64(*secs)));
    }
    out
}

/// Parse a values CSV back into `(labels, trajectory names, sigmas, value,
/// raw, seconds)` row tuples.
pub fn parse_values_csv(text: &str) -> Result<Vec<(String, String, f64, f64, f64, f64)>, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == VALUES_HEADER => {}
        other => return Err(CliError::Runtime(format!("bad values header: {other:?}"))),
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(CliError::Runtime(format!("bad values row: {line}")));
        }
        let num = |s: &str| {
            s.parse::<f64>().map_err(|e| CliError::Runtime(format!("bad float {s}: {e}")))
        };
        rows.push((f[0].to_string(), f[1].to_string(), num(f[2])?, num(f[3])?, num(f[4])?, num(f[5])?));
    }
    Ok(rows)
}

/// Parse an errors CSV into `(trajectory, sigma, error)` rows.
pub fn parse_errors_csv(text: &str) -> Result<Vec<(String, f64, f64)>, CliError> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == ERRORS_HEADER => {}
        other => return Err(CliError::Runtime(format!("bad errors header: {other:?}"))),
    }
    let mut rows = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 3 {
            return Err(CliError::Runtime(format!("bad errors row: {line}")));
        }
        let num = |s: &str| {
            s.parse::<f64>().map_err(|e| CliError::Runtime(format!("bad float {s}: {e}")))
        };
        rows.push((f[0].to_string(), num(f[1])?, num(f[2])?));
    }
    Ok(rows)
}

/// Write every benchmark artifact into `out`: per-method values and error
/// files plus the summary.
pub fn write_benchmark(
    out: &Path,
    results: &BenchResults,
    emit_svg: bool,
) -> Result<Vec<std::path::PathBuf>, CliError> {
    std::fs::create_dir_all(out)?;
    let mut written = Vec::new();
    let mut summary: Vec<(String, f64, f64, f64)> = Vec::new();

    for run in results.all_runs() {
        let vpath = out.join(format!("values_{}.csv", run.label));
        std::fs::write(&vpath, values_csv(run, &results.names, &results.sigmas))?;
        written.push(vpath);

        let errors =
            crate::bench::ErrorMatrix::new(&run.label, &results.ground_truth.values, &run.values)?;
        let (fro, max) = (errors.entries.frobenius(), errors.entries.max_abs());
        let epath = out.join(format!("errors_{}.csv", errors.method));
        std::fs::write(&epath, errors_csv(&errors.entries, &results.names, &results.sigmas))?;
        written.push(epath);

        if emit_svg {
            let spath = out.join(format!("heatmap_{}.svg", run.label));
            std::fs::write(
                &spath,
                crate::svg::heatmap(&run.values, &results.names, &results.sigmas, &run.label),
            )?;
            written.push(spath);
        }

        summary.push((run.label.clone(), fro, max, run.total_seconds()));
    }

    let spath = out.join("summary.csv");
    std::fs::write(&spath, summary_csv(&summary))?;
    written.push(spath);
    Ok(written)
}
