//! Occupancy-grid estimate: rasterize the swept set onto a square grid,
//! charge each touched cell with its Gaussian mass, and combine the cells
//! multiplicatively as if independent.

use alloc::vec::Vec;

use super::{combine_h1, Estimate, Meta, Method, Scenario, Stopwatch};
use crate::error::Error;
use crate::gauss::integrate_rect;
use crate::math;
use crate::vec2::Vec2;
use crate::Result;

/// Default bound on the number of grid cells held in memory.
pub const DEFAULT_CELL_CAP: u64 = 50_000_000;

/// Occupancy-grid estimate with the default cell cap.
pub fn grid_estimate(sc: &Scenario, cell_size: f64) -> Result<Estimate> {
    grid_estimate_capped(sc, cell_size, DEFAULT_CELL_CAP)
}

/// Occupancy-grid estimate.
///
/// The grid is axis-aligned with cell corners on multiples of `cell_size`.
/// A cell is selected when its closed square intersects the swept set `D_T`
/// (distance from square to the path curve at most the combined radius);
/// each selected cell `m_i` is charged `P(C_{m_i})`, the mass of the cell
/// under `N(mu_O, Sigma_T)`, and the result is `1 - prod(1 - P(C_{m_i}))`.
pub fn grid_estimate_capped(sc: &Scenario, cell_size: f64, cell_cap: u64) -> Result<Estimate> {
    if !(cell_size > 0.0) || !cell_size.is_finite() {
        return Err(Error::Domain { what: "grid cell size", value: cell_size });
    }
    let clock = Stopwatch::start();
    let h = cell_size;
    let r = sc.body().radius();
    let (lo_s, hi_s) = sc.param_range();
    let span = hi_s - lo_s;

    // dense path samples; spacing keeps the rasterized boundary within a
    // small fraction of a cell of the true swept set
    let delta = 0.5 * h.min(r);
    let arc_bound = sc.trajectory().max_speed() * span;
    let steps = if arc_bound > 0.0 { math::ceil(arc_bound / delta) as usize } else { 0 };
    let n = steps.max(1);
    let mut samples = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let s = (lo_s + span * k as f64 / n as f64).clamp(0.0, 1.0);
        samples.push(sc.trajectory().eval(s).expect("s in domain").position);
    }

    let mut min = samples[0];
    let mut max = samples[0];
    for p in &samples {
        min = Vec2::new(min.x.min(p.x), min.y.min(p.y));
        max = Vec2::new(max.x.max(p.x), max.y.max(p.y));
    }

    // index window of cells that can possibly touch the tube
    let ix0 = math::floor((min.x - r) / h) as i64 - 1;
    let ix1 = math::floor((max.x + r) / h) as i64 + 1;
    let iy0 = math::floor((min.y - r) / h) as i64 - 1;
    let iy1 = math::floor((max.y + r) / h) as i64 + 1;
    let nx = (ix1 - ix0 + 1) as u64;
    let ny = (iy1 - iy0 + 1) as u64;
    let total = nx.checked_mul(ny).ok_or(Error::Resource { cells: u64::MAX, cap: cell_cap })?;
    if total > cell_cap {
        return Err(Error::Resource { cells: total, cap: cell_cap });
    }
    let (nx, ny) = (nx as usize, ny as usize);
    let mut selected = alloc::vec![false; nx * ny];

    // stamp the disk of radius r around every sample: for each cell row,
    // clamp in y then solve the admissible x span directly
    let r_sq = r * r;
    for p in &samples {
        let jy0 = (math::floor((p.y - r) / h) as i64).max(iy0);
        let jy1 = (math::floor((p.y + r) / h) as i64).min(iy1);
        for jy in jy0..=jy1 {
            let cell_y0 = jy as f64 * h;
            let cell_y1 = cell_y0 + h;
            let dy = (cell_y0 - p.y).max(0.0).max(p.y - cell_y1);
            let rem = r_sq - dy * dy;
            if rem < 0.0 {
                continue;
            }
            let wx = math::sqrt(rem);
            let jx0 = (math::floor((p.x - wx) / h) as i64).max(ix0);
            let jx1 = (math::floor((p.x + wx) / h) as i64).min(ix1);
            if jx1 < jx0 {
                continue;
            }
            let row = (jy - iy0) as usize * nx;
            let a = row + (jx0 - ix0) as usize;
            let b = row + (jx1 - ix0) as usize;
            selected[a..=b].fill(true);
        }
    }

    // charge selected cells with their Gaussian mass under N(mu_O, Sigma_T)
    let obstacle = sc.obstacle_gaussian();
    let mut masses: Vec<f64> = Vec::new();
    let mut count: u64 = 0;
    if obstacle.is_diagonal() {
        // factorized CDF differences: one pass per axis instead of per cell
        let sx = math::sqrt(obstacle.cov().m11);
        let sy = math::sqrt(obstacle.cov().m22);
        let mx = obstacle.mean().x;
        let my = obstacle.mean().y;
        let px: Vec<f64> = (ix0..=ix1)
            .map(|ix| {
                let x0 = ix as f64 * h;
                math::normal_cdf((x0 + h - mx) / sx) - math::normal_cdf((x0 - mx) / sx)
            })
            .collect();
        let py: Vec<f64> = (iy0..=iy1)
            .map(|iy| {
                let y0 = iy as f64 * h;
                math::normal_cdf((y0 + h - my) / sy) - math::normal_cdf((y0 - my) / sy)
            })
            .collect();
        for jy in 0..ny {
            let row = jy * nx;
            for jx in 0..nx {
                if selected[row + jx] {
                    count += 1;
                    masses.push((px[jx] * py[jy]).clamp(0.0, 1.0));
                }
            }
        }
    } else {
        for jy in 0..ny {
            for jx in 0..nx {
                if !selected[jy * nx + jx] {
                    continue;
                }
                count += 1;
                let lo = Vec2::new((ix0 + jx as i64) as f64 * h, (iy0 + jy as i64) as f64 * h);
                let hi = Vec2::new(lo.x + h, lo.y + h);
                masses.push(integrate_rect(&obstacle, lo, hi)?);
            }
        }
    }

    let value = combine_h1(&masses);
    Ok(Estimate::from_raw(
        Method::Grid,
        value,
        clock.seconds(),
        Meta::Grid { cell_size: h, cells: count },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::mc_ground_truth;
    use crate::geometry::CombinedBody;
    use crate::path::benchmark_paths;
    use crate::vec2::Mat2;

    fn scenario_a(sigma: f64) -> Scenario {
        let (a, _, _) = benchmark_paths();
        Scenario::new(
            a,
            Vec2::new(2.5, 0.0),
            CombinedBody::new(0.1).unwrap(),
            Mat2::isotropic(sigma),
        )
        .unwrap()
    }

    #[test]
    fn zero_mass_cells_give_zero() {
        let (a, _, _) = benchmark_paths();
        let sc = Scenario::new(
            a,
            Vec2::new(2.5, 1000.0),
            CombinedBody::new(0.1).unwrap(),
            Mat2::isotropic(1e-3),
        )
        .unwrap();
        let e = grid_estimate(&sc, 0.05).unwrap();
        assert_eq!(e.value, 0.0);
        assert!(matches!(e.meta, Meta::Grid { cells, .. } if cells > 0));
    }

    #[test]
    fn cell_cap_respected() {
        let sc = scenario_a(0.01);
        match grid_estimate_capped(&sc, 1e-4, 1000) {
            Err(Error::Resource { cells, cap }) => {
                assert!(cells > cap);
            }
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn refinement_is_cauchy_and_off_monte_carlo() {
        // successive halvings converge, but not to the Monte Carlo value
        let sc = scenario_a(0.01);
        let sizes = [2f64.powi(-5), 2f64.powi(-6), 2f64.powi(-7), 2f64.powi(-8), 2f64.powi(-9)];
        let vals: Vec<f64> =
            sizes.iter().map(|&h| grid_estimate(&sc, h).unwrap().value).collect();
        let mut diffs: Vec<f64> = vals.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for w in diffs.windows(2) {
            assert!(w[1] <= w[0] + 1e-3, "refinement not settling: {diffs:?}");
        }
        diffs.truncate(diffs.len());
        let mc = mc_ground_truth(&sc, 10_000, 0.01, 42).value;
        let limit = *vals.last().unwrap();
        assert!(
            (limit - mc).abs() > 0.05,
            "grid limit {limit} unexpectedly agrees with MC {mc}"
        );
    }

    #[test]
    fn single_cell_charge_passes_through() {
        // a lone selected cell charged p must combine to exactly p
        let p = 0.3137;
        assert!((combine_h1(&[p]) - p).abs() < 1e-15);
    }
}
