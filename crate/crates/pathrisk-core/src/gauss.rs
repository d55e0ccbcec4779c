//! Bivariate normal distributions: density evaluation, covariance
//! combination, seeded sampling, and numerical integration over disks and
//! axis-aligned rectangles.

use rand::Rng;

use crate::error::Error;
use crate::math;
use crate::quad;
use crate::vec2::{Mat2, Vec2};
use crate::Result;

/// Tolerances and budget for adaptive quadrature.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    /// Relative tolerance on the integral value.
    pub rel_tol: f64,
    /// Absolute tolerance floor (controls near-zero integrals).
    pub abs_tol: f64,
    /// Panel subdivision budget per one-dimensional pass.
    pub max_subdivisions: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { rel_tol: 1e-8, abs_tol: 1e-12, max_subdivisions: 400 }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: u32) -> Result<Self> {
        if !(rel_tol > 0.0) || !(abs_tol > 0.0) || max_subdivisions == 0 {
            return Err(Error::Domain { what: "quadrature spec", value: rel_tol });
        }
        Ok(QuadratureSpec { rel_tol, abs_tol, max_subdivisions })
    }

    /// Spec for the inner pass of a nested 2D integral: tighter by one order
    /// so the inner error stays below the outer error estimate.
    pub(crate) fn inner(&self, outer_range: f64) -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: (self.rel_tol * 0.1).max(1e-14),
            abs_tol: (self.abs_tol / outer_range.max(1.0) * 0.1).max(1e-300),
            max_subdivisions: self.max_subdivisions,
        }
    }
}

/// A bivariate normal `N(mean, cov)` with symmetric positive definite `cov`.
///
/// Derived quantities (inverse covariance, normalization, Cholesky factor)
/// are cached at construction.
#[derive(Clone, Copy, Debug)]
pub struct Gaussian2 {
    mean: Vec2,
    cov: Mat2,
    inv_cov: Mat2,
    chol: Mat2,
    norm: f64,
}

impl Gaussian2 {
    pub fn new(mean: Vec2, cov: Mat2) -> Result<Self> {
        if !mean.is_finite() || !cov.is_finite() {
            return Err(Error::InvalidCovariance);
        }
        if !cov.is_symmetric() || !cov.is_positive_definite() {
            return Err(Error::InvalidCovariance);
        }
        let inv_cov = cov.inverse().ok_or(Error::InvalidCovariance)?;
        let chol = cov.cholesky().ok_or(Error::InvalidCovariance)?;
        let det = cov.det();
        Ok(Gaussian2 { mean, cov, inv_cov, chol, norm: 1.0 / (math::TAU * math::sqrt(det)) })
    }

    /// Zero-mean isotropic `N(0, sigma I)`; the benchmark's noise model.
    pub fn isotropic(sigma: f64) -> Result<Self> {
        Self::new(Vec2::ZERO, Mat2::isotropic(sigma))
    }

    #[inline]
    pub fn mean(&self) -> Vec2 {
        self.mean
    }

    #[inline]
    pub fn cov(&self) -> Mat2 {
        self.cov
    }

    /// True when the off-diagonal term is negligible against the diagonal.
    pub fn is_diagonal(&self) -> bool {
        math::abs(self.cov.m12) <= 1e-14 * math::abs(self.cov.m11).max(math::abs(self.cov.m22))
    }

    /// Largest marginal standard deviation; used to bound integration boxes.
    pub fn max_std(&self) -> f64 {
        math::sqrt(self.cov.m11.max(self.cov.m22))
    }

    /// Density at `x`.
    #[inline]
    pub fn pdf(&self, x: Vec2) -> f64 {
        let d = x - self.mean;
        let q = d.dot(self.inv_cov.mul_vec(d));
        self.norm * math::exp(-0.5 * q)
    }

    /// One draw, distributed as this Gaussian; deterministic given the
    /// generator state (Box–Muller through the cached Cholesky factor).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec2 {
        let u1: f64 = 1.0 - rng.gen::<f64>(); // (0, 1]
        let u2: f64 = rng.gen();
        let radius = math::sqrt(-2.0 * math::ln(u1));
        let angle = math::TAU * u2;
        let z = Vec2::new(radius * math::cos(angle), radius * math::sin(angle));
        self.mean + self.chol.mul_vec(z)
    }
}

/// Sum of the robot and obstacle covariances: the covariance of the relative
/// position in the difference domain.
pub fn combine_covariance(sigma_r: Mat2, sigma_o: Mat2) -> Result<Mat2> {
    for m in [&sigma_r, &sigma_o] {
        if !m.is_finite() || !m.is_symmetric() || !m.is_positive_definite() {
            return Err(Error::InvalidCovariance);
        }
    }
    Ok(sigma_r.add(sigma_o))
}

/// Gaussian mass of the disk of `radius` around `center`.
///
/// Polar coordinates about the disk center with nested adaptive
/// Gauss–Kronrod panels; the integrand is smooth so convergence is fast.
pub fn integrate_disk(
    g: &Gaussian2,
    center: Vec2,
    radius: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidShape { radius });
    }
    let inner_spec = spec.inner(math::TAU);
    let mut inner_failure: Option<f64> = None;
    let outer = quad::adaptive(
        |phi| {
            let dir = Vec2::new(math::cos(phi), math::sin(phi));
            let radial = quad::adaptive(
                |rho| g.pdf(center + dir * rho) * rho,
                0.0,
                radius,
                &inner_spec,
            );
            match radial {
                Ok(v) => v,
                Err(Error::Tolerance { best, error }) => {
                    inner_failure = Some(inner_failure.unwrap_or(0.0).max(error));
                    best
                }
                Err(_) => unreachable!("radial adaptive only fails on tolerance"),
            }
        },
        0.0,
        math::TAU,
        spec,
    )?;
    let value = outer.clamp(0.0, 1.0);
    match inner_failure {
        Some(err) => Err(Error::Tolerance { best: value, error: err * math::TAU }),
        None => Ok(value),
    }
}

/// Gaussian mass of the axis-aligned rectangle `[lo, hi]`.
///
/// Diagonal covariances use the exact product of 1D CDF differences (the
/// benchmark grid touches ~1e5 cells, so this path must stay cheap). General
/// covariances fall back to nested quadrature on a clipped box.
pub fn integrate_rect(g: &Gaussian2, lo: Vec2, hi: Vec2) -> Result<f64> {
    integrate_rect_with(g, lo, hi, &QuadratureSpec::default())
}

/// As [`integrate_rect`] with an explicit quadrature spec for the
/// non-diagonal fallback.
pub fn integrate_rect_with(
    g: &Gaussian2,
    lo: Vec2,
    hi: Vec2,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if lo.x > hi.x || lo.y > hi.y || lo.x.is_nan() || lo.y.is_nan() || hi.x.is_nan() || hi.y.is_nan()
    {
        return Err(Error::Domain { what: "rectangle bounds", value: f64::NAN });
    }
    if lo.x == hi.x || lo.y == hi.y {
        return Ok(0.0);
    }
    if g.is_diagonal() {
        let sx = math::sqrt(g.cov().m11);
        let sy = math::sqrt(g.cov().m22);
        let px = math::normal_cdf((hi.x - g.mean().x) / sx) - math::normal_cdf((lo.x - g.mean().x) / sx);
        let py = math::normal_cdf((hi.y - g.mean().y) / sy) - math::normal_cdf((lo.y - g.mean().y) / sy);
        return Ok((px * py).clamp(0.0, 1.0));
    }

    // clip unbounded or very large boxes to where the mass lives
    let reach = 40.0 * g.max_std();
    let cx = (g.mean().x - reach, g.mean().x + reach);
    let cy = (g.mean().y - reach, g.mean().y + reach);
    let lx = lo.x.max(cx.0);
    let hx = hi.x.min(cx.1);
    let ly = lo.y.max(cy.0);
    let hy = hi.y.min(cy.1);
    if lx >= hx || ly >= hy {
        return Ok(0.0);
    }

    let inner_spec = spec.inner(hx - lx);
    let mut inner_failure: Option<f64> = None;
    let outer = quad::adaptive(
        |x| {
            let column = quad::adaptive(|y| g.pdf(Vec2::new(x, y)), ly, hy, &inner_spec);
            match column {
                Ok(v) => v,
                Err(Error::Tolerance { best, error }) => {
                    inner_failure = Some(inner_failure.unwrap_or(0.0).max(error));
                    best
                }
                Err(_) => unreachable!(),
            }
        },
        lx,
        hx,
        spec,
    )?;
    let value = outer.clamp(0.0, 1.0);
    match inner_failure {
        Some(err) => Err(Error::Tolerance { best: value, error: err * (hx - lx) }),
        None => Ok(value),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pdf_standard_normal_at_origin() {
        let g = Gaussian2::new(Vec2::ZERO, Mat2::identity()).unwrap();
        assert!((g.pdf(Vec2::ZERO) - 1.0 / math::TAU).abs() < 1e-15);
    }

    #[test]
    fn pdf_isotropic_peak() {
        let sigma = 0.07;
        let g = Gaussian2::isotropic(sigma).unwrap();
        assert!((g.pdf(Vec2::ZERO) - 1.0 / (math::TAU * sigma)).abs() < 1e-12);
    }

    #[test]
    fn pdf_diagonal_matches_marginal_product() {
        // independent cross-check: product of 1D marginals for diagonal cov
        let g = Gaussian2::new(Vec2::new(1.0, 1.0), Mat2::diagonal(0.04, 0.09)).unwrap();
        let x = Vec2::new(1.1, 0.9);
        let m1 = math::normal_pdf(0.1 / 0.2) / 0.2;
        let m2 = math::normal_pdf(-0.1 / 0.3) / 0.3;
        let want = m1 * m2;
        assert!((g.pdf(x) - want).abs() / want < 1e-13, "{} vs {}", g.pdf(x), want);
    }

    #[test]
    fn covariance_combination() {
        let s = combine_covariance(Mat2::isotropic(0.3), Mat2::isotropic(0.3)).unwrap();
        assert_eq!(s, Mat2::isotropic(0.6));
        let s = combine_covariance(Mat2::diagonal(1.0, 2.0), Mat2::diagonal(3.0, 4.0)).unwrap();
        assert_eq!(s, Mat2::diagonal(4.0, 6.0));
        let s = combine_covariance(Mat2::isotropic(0.005), Mat2::isotropic(0.005)).unwrap();
        assert_eq!(s, Mat2::isotropic(0.01));
        assert!(combine_covariance(Mat2::new(1.0, 2.0, 2.0, 1.0), Mat2::identity()).is_err());
    }

    #[test]
    fn disk_mass_isotropic_closed_form() {
        // centered disk: 1 - exp(-r^2 / (2 sigma))
        let spec = QuadratureSpec::default();
        let g = Gaussian2::isotropic(0.01).unwrap();
        let got = integrate_disk(&g, Vec2::ZERO, 0.1, &spec).unwrap();
        let want = -math::expm1(-0.1 * 0.1 / (2.0 * 0.01));
        assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        assert!((want - 0.393469).abs() < 1e-6);
    }

    #[test]
    fn disk_mass_far_away_is_zero() {
        let spec = QuadratureSpec::default();
        let g = Gaussian2::isotropic(0.01).unwrap();
        let got = integrate_disk(&g, Vec2::new(100.0, 0.0), 0.1, &spec).unwrap();
        assert!(got < 1e-12);
    }

    #[test]
    fn disk_mass_anisotropic_vs_polar_riemann() {
        // brute-force fine polar-grid Riemann sum as an independent oracle
        let g = Gaussian2::new(Vec2::ZERO, Mat2::diagonal(0.01, 0.04)).unwrap();
        let center = Vec2::new(0.1, 0.0);
        let radius = 0.1;
        let (nr, np) = (1500usize, 1500usize);
        let mut acc = 0.0;
        for i in 0..nr {
            let rho = (i as f64 + 0.5) / nr as f64 * radius;
            for j in 0..np {
                let phi = (j as f64 + 0.5) / np as f64 * math::TAU;
                let p = center + Vec2::new(rho * math::cos(phi), rho * math::sin(phi));
                acc += g.pdf(p) * rho;
            }
        }
        let oracle = acc * (radius / nr as f64) * (math::TAU / np as f64);
        let got = integrate_disk(&g, center, radius, &QuadratureSpec::default()).unwrap();
        assert!((got - oracle).abs() < 5e-7, "{got} vs oracle {oracle}");
    }

    #[test]
    fn rect_quadrant_and_plane() {
        let g = Gaussian2::new(Vec2::ZERO, Mat2::identity()).unwrap();
        let q = integrate_rect(&g, Vec2::ZERO, Vec2::new(f64::INFINITY, f64::INFINITY)).unwrap();
        assert!((q - 0.25).abs() < 1e-12);
        let all = integrate_rect(
            &g,
            Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
            Vec2::new(f64::INFINITY, f64::INFINITY),
        )
        .unwrap();
        assert!((all - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rect_unit_square() {
        let g = Gaussian2::new(Vec2::ZERO, Mat2::identity()).unwrap();
        let got = integrate_rect(&g, Vec2::ZERO, Vec2::new(1.0, 1.0)).unwrap();
        let phi1 = math::normal_cdf(1.0);
        let want = (phi1 - 0.5) * (phi1 - 0.5);
        assert!((got - want).abs() < 1e-12);
        assert!((got - 0.116516).abs() < 5e-7);
    }

    #[test]
    fn rect_degenerate_is_zero() {
        let g = Gaussian2::new(Vec2::ZERO, Mat2::identity()).unwrap();
        assert_eq!(integrate_rect(&g, Vec2::ZERO, Vec2::new(0.0, 5.0)).unwrap(), 0.0);
    }

    #[test]
    fn rect_correlated_matches_diagonal_limit() {
        // tiny correlation should stay near the diagonal answer
        let g0 = Gaussian2::new(Vec2::ZERO, Mat2::identity()).unwrap();
        let g1 = Gaussian2::new(Vec2::ZERO, Mat2::new(1.0, 1e-6, 1e-6, 1.0)).unwrap();
        let r0 = integrate_rect(&g0, Vec2::new(-0.5, -1.0), Vec2::new(1.5, 0.7)).unwrap();
        let r1 = integrate_rect(&g1, Vec2::new(-0.5, -1.0), Vec2::new(1.5, 0.7)).unwrap();
        assert!((r0 - r1).abs() < 1e-5);
    }

    #[test]
    fn sampling_is_deterministic_given_seed() {
        let g = Gaussian2::new(Vec2::new(1.0, 2.0), Mat2::new(0.5, 0.1, 0.1, 0.3)).unwrap();
        let a = g.sample(&mut ChaCha8Rng::seed_from_u64(7));
        let b = g.sample(&mut ChaCha8Rng::seed_from_u64(7));
        assert_eq!(a, b);
    }

    #[test]
    fn sampling_tiny_cov_stays_near_mean() {
        let eps = 1e-12;
        let g = Gaussian2::new(Vec2::new(3.0, -4.0), Mat2::isotropic(eps)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let s = g.sample(&mut rng);
            assert!((s - g.mean()).norm() < 8.0 * math::sqrt(eps));
        }
    }

    #[test]
    fn sampling_mean_converges() {
        let g = Gaussian2::new(Vec2::new(1.0, 2.0), Mat2::identity()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let n = 100_000;
        let mut acc = Vec2::ZERO;
        for _ in 0..n {
            acc = acc + g.sample(&mut rng);
        }
        let mean = acc / n as f64;
        assert!((mean.x - 1.0).abs() < 0.02, "mean.x = {}", mean.x);
        assert!((mean.y - 2.0).abs() < 0.02, "mean.y = {}", mean.y);
    }
}
