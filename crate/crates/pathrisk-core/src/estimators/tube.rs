//! Swept-tube estimators: the parametrized double integral (H3), its
//! Volterra / product-integral transform (H2), and the tube-width
//! sensitivities of both.

use super::{Estimate, Meta, Method, Scenario, Stopwatch};
use crate::error::Error;
use crate::gauss::QuadratureSpec;
use crate::math;
use crate::quad;
use crate::Result;

/// Interaction hypothesis selecting which sensitivity is computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    H2,
    H3,
}

/// The raw tube integral over `[lo, hi] x [-t_half, t_half]` of the noise
/// density times the tube Jacobian factor.
///
/// This single routine backs the parametrization estimate, the Volterra
/// estimate, and the H2 sensitivity attenuation so their documented exact
/// relations hold bit-for-bit.
pub(crate) fn tube_integral(sc: &Scenario, t_half: f64, q: &QuadratureSpec) -> Result<f64> {
    if t_half < 0.0 || !t_half.is_finite() {
        return Err(Error::Domain { what: "tube half-width", value: t_half });
    }
    if t_half == 0.0 {
        return Ok(0.0);
    }
    let (lo, hi) = sc.param_range();
    let inner_spec = q.inner(hi - lo);
    let mut degenerate: Option<f64> = None;
    let mut inner_failure: Option<f64> = None;

    let outer = quad::adaptive(
        |gamma| {
            let slice = quad::adaptive(
                |nu| match sc.trajectory().tube_map(gamma.clamp(0.0, 1.0), nu, t_half) {
                    Ok(tp) => sc.noise().pdf(tp.position - sc.obstacle_mean()) * tp.gamma,
                    Err(_) => {
                        degenerate = Some(gamma);
                        0.0
                    }
                },
                -t_half,
                t_half,
                &inner_spec,
            );
            match slice {
                Ok(v) => v,
                Err(Error::Tolerance { best, error }) => {
                    inner_failure = Some(inner_failure.unwrap_or(0.0).max(error));
                    best
                }
                Err(_) => unreachable!("inner adaptive only fails on tolerance"),
            }
        },
        lo,
        hi,
        q,
    )?;

    if let Some(s) = degenerate {
        return Err(Error::DegenerateTangent { s });
    }
    if let Some(err) = inner_failure {
        return Err(Error::Tolerance { best: outer.max(0.0), error: err });
    }
    Ok(outer.max(0.0))
}

/// Swept-tube double integral under the stopped-process hypothesis, with the
/// tube half-width set to the combined radius.
///
/// Exact for straight lines (the tube map is globally injective there); on
/// curved paths regions covered more than once are counted more than once,
/// so the raw value can exceed the true swept mass.
pub fn naive_param_h3(sc: &Scenario, q: &QuadratureSpec) -> Result<Estimate> {
    let clock = Stopwatch::start();
    let raw = tube_integral(sc, sc.body().tube_half_width(), q)?;
    Ok(Estimate::from_raw(
        Method::NaiveTube,
        raw,
        clock.seconds(),
        Meta::Tube { rel_tol: q.rel_tol, abs_tol: q.abs_tol },
    ))
}

/// Markovian product-integral estimate `1 - exp(-I)` where `I` is exactly
/// the raw tube integral of [`naive_param_h3`].
pub fn volterra_h2(sc: &Scenario, q: &QuadratureSpec) -> Result<Estimate> {
    let clock = Stopwatch::start();
    let exponent = tube_integral(sc, sc.body().tube_half_width(), q)?;
    let value = -math::expm1(-exponent);
    Ok(Estimate::from_raw(
        Method::Volterra,
        value,
        clock.seconds(),
        Meta::Tube { rel_tol: q.rel_tol, abs_tol: q.abs_tol },
    ))
}

/// Sensitivity of the tube collision probability to the half-width `T`.
///
/// Under H3 this is the boundary term of the Leibniz rule: the density-times-
/// Jacobian integrand summed over the two tube edges `nu = +-T`. Under H2 the
/// H3 value is attenuated by `exp(-I(T))`. At `T = 0` both reduce to the risk
/// density.
pub fn sensitivity(sc: &Scenario, t_half: f64, hyp: Hypothesis, q: &QuadratureSpec) -> Result<f64> {
    if t_half < 0.0 || !t_half.is_finite() {
        return Err(Error::Domain { what: "tube half-width", value: t_half });
    }
    let (lo, hi) = sc.param_range();

    let edge = |nu: f64| -> Result<f64> {
        let mut degenerate: Option<f64> = None;
        let v = quad::adaptive(
            |gamma| match sc.trajectory().tube_map(gamma.clamp(0.0, 1.0), nu, t_half) {
                Ok(tp) => sc.noise().pdf(tp.position - sc.obstacle_mean()) * tp.gamma,
                Err(_) => {
                    degenerate = Some(gamma);
                    0.0
                }
            },
            lo,
            hi,
            q,
        )?;
        match degenerate {
            Some(s) => Err(Error::DegenerateTangent { s }),
            None => Ok(v),
        }
    };

    let h3 = edge(t_half)? + edge(-t_half)?;
    match hyp {
        Hypothesis::H3 => Ok(h3),
        Hypothesis::H2 => Ok(h3 * math::exp(-tube_integral(sc, t_half, q)?)),
    }
}
