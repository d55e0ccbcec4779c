//! Risk density, its linear probability estimate, and first-order
//! collision-probability updates under changes of the combined radius.

use super::tube::{sensitivity, Hypothesis};
use super::{Estimate, Meta, Method, Scenario, Stopwatch};
use crate::error::Error;
use crate::gauss::QuadratureSpec;
use crate::quad;
use crate::Result;

/// Risk density along the scenario path:
/// `2 * integral of N(mu_R(g) - mu_O | 0, Sigma_T) * |d mu_R / d g| dg`.
///
/// Depends only on the geometric curve (invariant under monotone smooth
/// reparametrization) and carries units of one over length.
pub fn risk_density(sc: &Scenario, q: &QuadratureSpec) -> Result<f64> {
    let (lo, hi) = sc.param_range();
    let v = quad::adaptive(
        |gamma| {
            let p = sc
                .trajectory()
                .eval(gamma.clamp(0.0, 1.0))
                .expect("clamped parameter in domain");
            sc.noise().pdf(p.position - sc.obstacle_mean()) * p.d1.norm()
        },
        lo,
        hi,
        q,
    )?;
    Ok(2.0 * v.max(0.0))
}

/// Linear collision-probability estimate `min(risk_density * scale, 1)`.
///
/// The natural scale is the combined radius (`scale = r`), which makes this
/// the first-order expansion of the tube probability in the half-width.
pub fn risk_density_estimate(sc: &Scenario, scale: f64, q: &QuadratureSpec) -> Result<Estimate> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Domain { what: "risk density scale", value: scale });
    }
    let clock = Stopwatch::start();
    let raw = risk_density(sc, q)? * scale;
    Ok(Estimate::from_raw(
        Method::RiskDensity,
        raw,
        clock.seconds(),
        Meta::RiskDensity { scale, rel_tol: q.rel_tol },
    ))
}

/// First-order update rule used by [`cp_update`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UpdateMode {
    /// Slope from the H2 sensitivity at the previous half-width.
    SensitivityH2,
    /// Slope from the H3 sensitivity at the previous half-width.
    SensitivityH3,
    /// Slope from the risk density (half-width independent).
    RiskDensity,
}

/// Propagate a known collision probability across a change `dt` of the
/// combined radius: `clamp(p_prev + slope * dt, 0, 1)`.
pub fn cp_update(
    p_prev: f64,
    sc: &Scenario,
    t_prev: f64,
    dt: f64,
    mode: UpdateMode,
    q: &QuadratureSpec,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_prev) {
        return Err(Error::Domain { what: "previous probability", value: p_prev });
    }
    let slope = match mode {
        UpdateMode::SensitivityH2 => sensitivity(sc, t_prev, Hypothesis::H2, q)?,
        UpdateMode::SensitivityH3 => sensitivity(sc, t_prev, Hypothesis::H3, q)?,
        UpdateMode::RiskDensity => risk_density(sc, q)?,
    };
    Ok((p_prev + slope * dt).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CombinedBody;
    use crate::math;
    use crate::path::{benchmark_paths, Trajectory};
    use crate::vec2::{Mat2, Vec2};

    fn scenario_a(sigma: f64) -> super::Scenario {
        let (a, _, _) = benchmark_paths();
        super::Scenario::new(
            a,
            Vec2::new(2.5, 0.0),
            CombinedBody::new(0.1).unwrap(),
            Mat2::isotropic(sigma),
        )
        .unwrap()
    }

    #[test]
    fn straight_line_closed_form() {
        // line through the mean: rd = 2 / sqrt(2 pi sigma), tails negligible
        let q = QuadratureSpec::default();
        let sigma = 0.01;
        let rd = risk_density(&scenario_a(sigma), &q).unwrap();
        let want = 2.0 / math::sqrt(math::TAU * sigma);
        assert!((rd - want).abs() < 1e-6, "{rd} vs {want}");
        assert!((rd - 7.9788).abs() < 1e-3);
    }

    #[test]
    fn far_obstacle_density_vanishes() {
        let (a, _, _) = benchmark_paths();
        let sc = super::Scenario::new(
            a,
            Vec2::new(2.5, 10.0),
            CombinedBody::new(0.1).unwrap(),
            Mat2::isotropic(1e-2),
        )
        .unwrap();
        assert!(risk_density(&sc, &QuadratureSpec::default()).unwrap() < 1e-15);
    }

    #[test]
    fn reparametrization_invariance() {
        // same geometric segment traversed as s and as s^2
        let q = QuadratureSpec::default();
        let line = Trajectory::line(Vec2::ZERO, Vec2::new(5.0, 0.0)).unwrap();
        let squared = Trajectory::quadratic([0.0, 0.0, 5.0], [0.0, 0.0, 0.0]).unwrap();
        let body = CombinedBody::new(0.1).unwrap();
        let cov = Mat2::isotropic(0.01);
        let mu_o = Vec2::new(2.5, 0.0);
        let a = risk_density(
            &super::Scenario::new(line, mu_o, body, cov).unwrap(),
            &q,
        )
        .unwrap();
        let b = risk_density(
            &super::Scenario::new(squared, mu_o, body, cov).unwrap(),
            &q,
        )
        .unwrap();
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn estimate_saturates_and_scales() {
        let q = QuadratureSpec::default();
        let sc = scenario_a(0.01);
        let e = risk_density_estimate(&sc, 0.1, &q).unwrap();
        assert!((e.value - 0.79788).abs() < 1e-4);
        assert_eq!(e.value, e.raw.min(1.0));

        let doubled = risk_density_estimate(&sc, 0.2, &q).unwrap();
        assert!((doubled.raw - 2.0 * e.raw).abs() < 1e-12);

        let saturated = risk_density_estimate(&scenario_a(1e-3), sc.body().radius(), &q);
        let saturated = saturated.unwrap();
        assert_eq!(saturated.value, 1.0);
        assert!(saturated.raw > 1.0);
    }

    #[test]
    fn update_identity_at_zero_step() {
        let q = QuadratureSpec::default();
        let sc = scenario_a(0.01);
        for mode in [UpdateMode::SensitivityH2, UpdateMode::SensitivityH3, UpdateMode::RiskDensity]
        {
            assert_eq!(cp_update(0.37, &sc, 0.1, 0.0, mode, &q).unwrap(), 0.37);
        }
    }

    #[test]
    fn update_is_linear_before_clamping() {
        let q = QuadratureSpec::default();
        let sc = scenario_a(0.01);
        let rd = risk_density(&sc, &q).unwrap();
        let updated = cp_update(0.2, &sc, 0.1, 0.01, UpdateMode::RiskDensity, &q).unwrap();
        assert!((updated - (0.2 + rd * 0.01)).abs() < 1e-12);
    }
}
