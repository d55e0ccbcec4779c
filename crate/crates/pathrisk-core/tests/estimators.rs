//! Cross-module oracle tests for the estimators: closed forms, brute-force
//! quadrature oracles, and the documented invariances.

use pathrisk_core::estimators::{
    combine_h1, combine_h2_discrete, mc_ground_truth, naive_param_h3, p_config, risk_density,
    Scenario,
};
use pathrisk_core::path::benchmark_paths;
use pathrisk_core::{math, CombinedBody, Gaussian2, Mat2, QuadratureSpec, Trajectory, Vec2};

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn scenario(traj: Trajectory, mu_o: Vec2, r: f64, sigma: f64) -> Scenario {
    Scenario::new(traj, mu_o, CombinedBody::new(r).unwrap(), Mat2::isotropic(sigma)).unwrap()
}

fn benchmark_scenario(idx: usize, sigma: f64) -> Scenario {
    let (a, b, c) = benchmark_paths();
    scenario([a, b, c][idx].clone(), Vec2::new(2.5, 0.0), 0.1, sigma)
}

#[test]
fn p_config_isotropic_closed_form() {
    // zero offset at the midpoint of mu_A: 1 - exp(-r^2/(2 sigma))
    let sc = benchmark_scenario(0, 0.01);
    let got = p_config(&sc, 0.5, &spec()).unwrap();
    assert!((got - 0.393469).abs() < 1e-6, "{got}");
}

#[test]
fn p_config_far_is_zero() {
    let (a, _, _) = benchmark_paths();
    let sc = scenario(a, Vec2::new(2.5, 10.0), 0.1, 0.01);
    assert!(p_config(&sc, 0.5, &spec()).unwrap() < 1e-12);
}

#[test]
fn p_config_offset_matches_polar_riemann_oracle() {
    // mu_C at s = 0.5: disk center offset (0, 0.25) under N(0, 0.01 I)
    let sc = benchmark_scenario(2, 0.01);
    let got = p_config(&sc, 0.5, &spec()).unwrap();

    let g = Gaussian2::isotropic(0.01).unwrap();
    let center = Vec2::new(0.0, 0.25);
    let (nr, np) = (1200usize, 1200usize);
    let mut acc = 0.0;
    for i in 0..nr {
        let rho = (i as f64 + 0.5) / nr as f64 * 0.1;
        for j in 0..np {
            let phi = (j as f64 + 0.5) / np as f64 * math::TAU;
            acc += g.pdf(center + Vec2::new(rho * math::cos(phi), rho * math::sin(phi))) * rho;
        }
    }
    let oracle = acc * (0.1 / nr as f64) * (math::TAU / np as f64);
    assert!((got - oracle).abs() < 1e-6, "{got} vs oracle {oracle}");
}

#[test]
fn p_config_translation_invariant() {
    let base = Trajectory::quadratic([0.3, 2.0, -0.4], [0.1, 0.6, 0.2]).unwrap();
    let shift = Vec2::new(-3.7, 11.2);
    let shifted = Trajectory::quadratic([0.3 + shift.x, 2.0, -0.4], [0.1 + shift.y, 0.6, 0.2]).unwrap();
    let mu_o = Vec2::new(1.0, 0.5);
    let a = scenario(base, mu_o, 0.2, 0.05);
    let b = scenario(shifted, mu_o + shift, 0.2, 0.05);
    for s in [0.1, 0.5, 0.9] {
        let pa = p_config(&a, s, &spec()).unwrap();
        let pb = p_config(&b, s, &spec()).unwrap();
        assert!((pa - pb).abs() < 1e-10, "s={s}: {pa} vs {pb}");
    }
}

#[test]
fn h1_combiner_examples() {
    // recovered per-cell beliefs of the occupancy-grid pathology example
    let got = combine_h1(&[0.1, 0.1, 0.7]);
    assert!((got - 0.757).abs() < 1e-12, "{got}");
    assert!((combine_h1(&[0.5, 0.5]) - 0.75).abs() < 1e-15);
    assert_eq!(combine_h1(&[]), 0.0);
}

#[test]
fn h1_union_bounds() {
    let probs = [0.03, 0.4, 0.11, 0.2];
    let c = combine_h1(&probs);
    let max = probs.iter().fold(0.0f64, |m, &p| m.max(p));
    let sum: f64 = probs.iter().sum();
    assert!(c >= max && c <= sum.min(1.0));
}

#[test]
fn h2_single_configuration_equals_p_config() {
    let sc = benchmark_scenario(0, 0.01);
    let single = combine_h2_discrete(&sc, &[0.4], &spec()).unwrap();
    let direct = p_config(&sc, 0.4, &spec()).unwrap();
    assert!((single - direct).abs() < 1e-10, "{single} vs {direct}");
}

#[test]
fn h2_duplicate_configuration_adds_nothing() {
    let sc = benchmark_scenario(0, 0.01);
    let twice = combine_h2_discrete(&sc, &[0.4, 0.4], &spec()).unwrap();
    let once = combine_h2_discrete(&sc, &[0.4], &spec()).unwrap();
    assert!((twice - once).abs() < 1e-10);
}

#[test]
fn h2_far_separated_disks_reduce_to_h1() {
    // consecutive disks far apart: the lune is the whole next disk
    let sc = benchmark_scenario(0, 0.25);
    let q = spec();
    let h2 = combine_h2_discrete(&sc, &[0.0, 0.5], &q).unwrap();
    let p0 = p_config(&sc, 0.0, &q).unwrap();
    let p1 = p_config(&sc, 0.5, &q).unwrap();
    let h1 = combine_h1(&[p0, p1]);
    assert!((h2 - h1).abs() < 1e-6, "{h2} vs {h1}");
}

#[test]
fn h2_ordering_and_range_validated() {
    let sc = benchmark_scenario(0, 0.01);
    assert!(combine_h2_discrete(&sc, &[0.5, 0.4], &spec()).is_err());
    assert!(combine_h2_discrete(&sc, &[0.5, 1.4], &spec()).is_err());
}

#[test]
fn straight_line_naive_and_mc_agree_across_sigmas() {
    // |naive - mc| <= 3 binomial SE + quadrature tolerance on every sigma
    let q = spec();
    let trials = 10_000u64;
    for (j, &sigma) in math::log_spaced(1e-3, 1.0, 10).iter().enumerate() {
        let sc = benchmark_scenario(0, sigma);
        let naive = naive_param_h3(&sc, &q).unwrap().value;
        let mc = mc_ground_truth(&sc, trials, 0.01, 1000 + j as u64).value;
        let se = math::sqrt(mc.max(1e-4) * (1.0 - mc).max(1e-4) / trials as f64);
        assert!(
            (naive - mc).abs() <= 3.0 * se + 1e-4,
            "sigma={sigma}: naive {naive} vs mc {mc} (3se = {})",
            3.0 * se
        );
    }
}

#[test]
fn rotation_invariance_for_isotropic_noise() {
    // rotate the whole scenario by 90 degrees; isotropic noise makes every
    // estimator distributionally identical (MC within binomial tolerance)
    let q = spec();
    let sigma = 0.02;
    let base = benchmark_scenario(2, sigma);
    let rotated = scenario(
        // (x, y) -> (-y, x) applied to the mu_C coefficients
        Trajectory::quadratic([0.0, -1.0, 1.0], [0.0, 5.0, 0.0]).unwrap(),
        Vec2::new(0.0, 2.5),
        0.1,
        sigma,
    );

    let pa = p_config(&base, 0.37, &q).unwrap();
    let pb = p_config(&rotated, 0.37, &q).unwrap();
    assert!((pa - pb).abs() < 1e-9);

    let na = naive_param_h3(&base, &q).unwrap().value;
    let nb = naive_param_h3(&rotated, &q).unwrap().value;
    assert!((na - nb).abs() < 1e-7, "{na} vs {nb}");

    let ra = risk_density(&base, &q).unwrap();
    let rb = risk_density(&rotated, &q).unwrap();
    assert!((ra - rb).abs() < 1e-7 * ra.max(1.0));

    let trials = 10_000u64;
    let ma = mc_ground_truth(&base, trials, 0.01, 77).value;
    let mb = mc_ground_truth(&rotated, trials, 0.01, 77).value;
    let se = math::sqrt(ma.max(1e-3) * (1.0 - ma).max(1e-3) / trials as f64);
    assert!((ma - mb).abs() <= 3.0 * math::SQRT_2 * se, "{ma} vs {mb}");
}

#[test]
fn swept_set_monotone_in_radius() {
    // fixed seed and fixed discretization: hits can only grow with r
    let q = spec();
    let (_, _, c) = benchmark_paths();
    let radii = [0.05, 0.1, 0.2, 0.4];
    let ds = 0.005; // shared discretization to make nesting exact
    let mut last_mc = -1.0;
    let mut last_naive = -1.0;
    for &r in &radii {
        let sc = scenario(c.clone(), Vec2::new(2.5, 0.0), r, 0.05);
        let mc = mc_ground_truth(&sc, 3000, ds, 123).value;
        let naive = naive_param_h3(&sc, &q).unwrap().raw;
        assert!(mc >= last_mc, "mc not monotone at r={r}");
        assert!(naive >= last_naive - 1e-9, "naive not monotone at r={r}");
        last_mc = mc;
        last_naive = naive;
    }
}

#[test]
fn probability_to_go_via_param_range() {
    // the H3 probability of the remaining subpath, and the h2 combiner on it
    let (a, _, _) = benchmark_paths();
    let body = CombinedBody::new(0.1).unwrap();
    let sc = Scenario::with_param_range(
        a,
        Vec2::new(2.5, 0.0),
        body,
        Mat2::isotropic(0.01),
        0.55,
        1.0,
    )
    .unwrap();
    // the subpath starts past the obstacle: far smaller risk than the full path
    let est = naive_param_h3(&sc, &spec()).unwrap();
    assert!(est.value < 0.35, "{}", est.value);
    assert!(p_config(&sc, 0.2, &spec()).is_err(), "s outside the range must error");
}
