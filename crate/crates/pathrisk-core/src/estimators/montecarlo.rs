//! Monte Carlo ground truth under the stopped-process hypothesis.
//!
//! Each trial draws one obstacle position and walks the discretized path;
//! the trial registers a collision the first time the robot center comes
//! within the combined radius of the sample. Per-trial ChaCha substreams
//! make the estimate independent of trial evaluation order.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Estimate, Meta, Method, Scenario, Stopwatch};
use crate::vec2::Vec2;

/// Positions per culling block; small enough that a block behaves like a
/// local bounding circle, large enough to amortize the circle test.
const BLOCK: usize = 64;

struct DiscretizedPath {
    positions: Vec<Vec2>,
    /// Bounding circles over consecutive position blocks.
    blocks: Vec<(Vec2, f64)>,
    /// Axis-aligned bounds of all positions.
    lo: Vec2,
    hi: Vec2,
}

fn discretize(sc: &Scenario, ds_max: f64) -> DiscretizedPath {
    let (lo_s, hi_s) = sc.param_range();
    let span = hi_s - lo_s;
    let arc_bound = sc.trajectory().max_speed() * span;
    let steps = if arc_bound > 0.0 {
        crate::math::ceil(arc_bound / ds_max) as usize
    } else {
        0
    };
    let n = steps.max(1);
    let mut positions = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let s = (lo_s + span * k as f64 / n as f64).clamp(0.0, 1.0);
        positions.push(sc.trajectory().eval(s).expect("s within domain").position);
    }

    let mut lo = positions[0];
    let mut hi = positions[0];
    for p in &positions {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }

    let blocks = positions
        .chunks(BLOCK)
        .map(|chunk| {
            let mut blo = chunk[0];
            let mut bhi = chunk[0];
            for p in chunk {
                blo = Vec2::new(blo.x.min(p.x), blo.y.min(p.y));
                bhi = Vec2::new(bhi.x.max(p.x), bhi.y.max(p.y));
            }
            let center = (blo + bhi) * 0.5;
            let radius = chunk.iter().map(|p| (*p - center).norm()).fold(0.0, f64::max);
            (center, radius)
        })
        .collect();

    DiscretizedPath { positions, blocks, lo, hi }
}

/// Seeded Monte Carlo estimate over `trials` trials with path discretization
/// fine enough that consecutive positions are at most `ds_max` apart.
///
/// Deterministic for a given `seed`: trial `i` draws from stream `i` of a
/// ChaCha generator seeded with `seed`, so splitting trials across workers
/// cannot change the result.
pub fn mc_ground_truth(sc: &Scenario, trials: u64, ds_max: f64, seed: u64) -> Estimate {
    assert!(trials >= 1, "at least one trial required");
    assert!(ds_max > 0.0 && ds_max.is_finite(), "ds_max must be positive");

    let clock = Stopwatch::start();
    let path = discretize(sc, ds_max);
    let obstacle = sc.obstacle_gaussian();
    let r = sc.body().radius();
    let r_sq = r * r;

    let mut hits: u64 = 0;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let sample = obstacle.sample(&mut rng);

        // quick reject against the path bounding box
        let dx = (path.lo.x - sample.x).max(0.0).max(sample.x - path.hi.x);
        let dy = (path.lo.y - sample.y).max(0.0).max(sample.y - path.hi.y);
        if dx * dx + dy * dy > r_sq {
            continue;
        }

        'walk: for (b, (center, radius)) in path.blocks.iter().enumerate() {
            if (sample - *center).norm() > radius + r {
                continue;
            }
            let start = b * BLOCK;
            let end = (start + BLOCK).min(path.positions.len());
            for p in &path.positions[start..end] {
                if (*p - sample).norm_squared() <= r_sq {
                    hits += 1;
                    break 'walk;
                }
            }
        }
    }

    let value = hits as f64 / trials as f64;
    Estimate::from_raw(
        Method::MonteCarlo,
        value,
        clock.seconds(),
        Meta::MonteCarlo { trials, seed, ds_max, hits },
    )
}
