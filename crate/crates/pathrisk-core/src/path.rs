//! Parametric planar trajectories on `s in [0, 1]`, their derivatives, and
//! the swept-tube map.
//!
//! The tube map offsets the curve along its unit left normal, so the
//! off-track coordinate `theta` is a metric distance and the Jacobian factor
//! at `theta = 0` reduces to the parameter speed `|d mu / ds|`. That is the
//! form under which the tube integral, the sensitivities, and the risk
//! density agree in the zero-width limit.

use alloc::vec::Vec;

use crate::error::Error;
use crate::math;
use crate::vec2::Vec2;
use crate::Result;

/// Position and first two parameter derivatives at a point of a curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub position: Vec2,
    pub d1: Vec2,
    pub d2: Vec2,
}

/// A point of the swept tube `Phi(s, theta)` with its Jacobian factor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TubePoint {
    pub s: f64,
    pub theta: f64,
    pub position: Vec2,
    /// `|det grad Phi| = |d1| * |1 - theta * kappa|`.
    pub gamma: f64,
}

/// Supported curve families.
///
/// All families share the domain `s in [0, 1]` and are expected to be
/// regular (`|d1| > 0`); regularity is only enforced where a unit normal is
/// actually needed, so degenerate-at-a-point reparametrizations can still be
/// integrated along.
#[derive(Clone, Debug, PartialEq)]
pub enum Trajectory {
    /// Straight segment from `start` to `end`.
    Line { start: Vec2, end: Vec2 },
    /// Component-wise polynomials `x(s) = x[0] + x[1] s + x[2] s^2`, same for y.
    Quadratic { x: [f64; 3], y: [f64; 3] },
    /// Piecewise-linear curve, uniform parameter across segments. Derivative
    /// queries at a knot use the right-hand segment.
    Polyline { points: Vec<Vec2> },
}

impl Trajectory {
    pub fn line(start: Vec2, end: Vec2) -> Result<Self> {
        if !start.is_finite() || !end.is_finite() {
            return Err(Error::Domain { what: "line endpoint", value: f64::NAN });
        }
        if start == end {
            return Err(Error::DegenerateTangent { s: 0.0 });
        }
        Ok(Trajectory::Line { start, end })
    }

    pub fn quadratic(x: [f64; 3], y: [f64; 3]) -> Result<Self> {
        if x.iter().chain(y.iter()).any(|c| !c.is_finite()) {
            return Err(Error::Domain { what: "quadratic coefficient", value: f64::NAN });
        }
        Ok(Trajectory::Quadratic { x, y })
    }

    pub fn polyline(points: Vec<Vec2>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Domain { what: "polyline point count", value: points.len() as f64 });
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::Domain { what: "polyline point", value: f64::NAN });
        }
        if points.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::DegenerateTangent { s: 0.0 });
        }
        Ok(Trajectory::Polyline { points })
    }

    /// Position and derivatives at `s in [0, 1]`.
    pub fn eval(&self, s: f64) -> Result<CurvePoint> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Domain { what: "curve parameter s", value: s });
        }
        Ok(match self {
            Trajectory::Line { start, end } => {
                let d = *end - *start;
                CurvePoint { position: *start + d * s, d1: d, d2: Vec2::ZERO }
            }
            Trajectory::Quadratic { x, y } => CurvePoint {
                position: Vec2::new(x[0] + x[1] * s + x[2] * s * s, y[0] + y[1] * s + y[2] * s * s),
                d1: Vec2::new(x[1] + 2.0 * x[2] * s, y[1] + 2.0 * y[2] * s),
                d2: Vec2::new(2.0 * x[2], 2.0 * y[2]),
            },
            Trajectory::Polyline { points } => {
                let segments = points.len() - 1;
                let u = s * segments as f64;
                let i = (u as usize).min(segments - 1);
                let local = u - i as f64;
                let d = points[i + 1] - points[i];
                CurvePoint {
                    position: points[i] + d * local,
                    d1: d * segments as f64,
                    d2: Vec2::ZERO,
                }
            }
        })
    }

    /// Exact upper bound on `|d1|` over the domain.
    ///
    /// `|d1|^2` is a convex quadratic in `s` for every family here, so the
    /// supremum sits at a segment endpoint.
    pub fn max_speed(&self) -> f64 {
        match self {
            Trajectory::Line { start, end } => (*end - *start).norm(),
            Trajectory::Quadratic { .. } => {
                let a = self.eval(0.0).expect("0 in domain").d1.norm();
                let b = self.eval(1.0).expect("1 in domain").d1.norm();
                a.max(b)
            }
            Trajectory::Polyline { points } => {
                let segments = (points.len() - 1) as f64;
                points
                    .windows(2)
                    .map(|w| (w[1] - w[0]).norm() * segments)
                    .fold(0.0, f64::max)
            }
        }
    }

    /// The swept-tube map `Phi(s, theta) = mu(s) + theta n(s)` and its
    /// Jacobian factor, with `n` the unit left normal of the curve.
    ///
    /// Requires `|theta| <= t_half` and a non-vanishing tangent at `s`.
    pub fn tube_map(&self, s: f64, theta: f64, t_half: f64) -> Result<TubePoint> {
        if math::abs(theta) > t_half {
            return Err(Error::Domain { what: "off-track theta", value: theta });
        }
        let p = self.eval(s)?;
        let speed = p.d1.norm();
        if speed < 1e-300 {
            return Err(Error::DegenerateTangent { s });
        }
        let normal = p.d1.perp() / speed;
        // signed curvature kappa = (d1 x d2) / |d1|^3 gives
        // det grad Phi = |d1| (1 - theta kappa)
        let kappa = p.d1.cross(p.d2) / (speed * speed * speed);
        let gamma = math::abs(speed * (1.0 - theta * kappa));
        Ok(TubePoint { s, theta, position: p.position + normal * theta, gamma })
    }
}

/// The three benchmark trajectories: a straight line through the nominal
/// obstacle position and two parabolas, all from `(0, 0)` to `(5, 0)` with
/// apex offsets 0.125 and 0.25.
pub fn benchmark_paths() -> (Trajectory, Trajectory, Trajectory) {
    let mu_a = Trajectory::line(Vec2::ZERO, Vec2::new(5.0, 0.0)).expect("valid line");
    let mu_b = Trajectory::quadratic([0.0, 5.0, 0.0], [0.0, 0.5, -0.5]).expect("valid parabola");
    let mu_c = Trajectory::quadratic([0.0, 5.0, 0.0], [0.0, 1.0, -1.0]).expect("valid parabola");
    (mu_a, mu_b, mu_c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn benchmark_midpoints_and_endpoints() {
        let (a, b, c) = benchmark_paths();

        let pa = a.eval(0.5).unwrap();
        assert_eq!(pa.position, Vec2::new(2.5, 0.0));
        assert_eq!(pa.d1, Vec2::new(5.0, 0.0));
        assert_eq!(pa.d2, Vec2::ZERO);

        let pc = c.eval(0.5).unwrap();
        assert_eq!(pc.position, Vec2::new(2.5, 0.25));
        assert_eq!(pc.d1, Vec2::new(5.0, 0.0));
        assert_eq!(pc.d2, Vec2::new(0.0, -2.0));

        let pb = b.eval(0.5).unwrap();
        assert_eq!(pb.position, Vec2::new(2.5, 0.125));

        for t in [&a, &b, &c] {
            assert_eq!(t.eval(0.0).unwrap().position, Vec2::ZERO);
            assert_eq!(t.eval(1.0).unwrap().position, Vec2::new(5.0, 0.0));
        }
    }

    #[test]
    fn eval_rejects_out_of_domain() {
        let (a, _, _) = benchmark_paths();
        assert!(a.eval(-0.01).is_err());
        assert!(a.eval(1.01).is_err());
    }

    #[test]
    fn tube_map_straight_line() {
        let (a, _, _) = benchmark_paths();
        let tp = a.tube_map(0.5, 0.1, 0.1).unwrap();
        assert!((tp.position - Vec2::new(2.5, 0.1)).norm() < 1e-15);
        assert!((tp.gamma - 5.0).abs() < 1e-12);
    }

    #[test]
    fn tube_map_centerline_identity() {
        let (_, b, c) = benchmark_paths();
        for t in [&b, &c] {
            for s in [0.0, 0.25, 0.5, 0.77, 1.0] {
                let tp = t.tube_map(s, 0.0, 0.1).unwrap();
                let p = t.eval(s).unwrap();
                assert_eq!(tp.position, p.position);
                assert_eq!(tp.gamma, p.d1.norm());
            }
        }
    }

    #[test]
    fn tube_map_rejects_wide_theta() {
        let (a, _, _) = benchmark_paths();
        assert!(a.tube_map(0.5, 0.2, 0.1).is_err());
    }

    #[test]
    fn tube_map_gamma_matches_finite_difference_jacobian() {
        // independent oracle: numerical determinant of the offset map
        let t = Trajectory::quadratic([0.0, 1.0, 0.0], [0.0, 1.0, -1.0]).unwrap();
        let h = 1e-6;
        for &(s, theta) in &[(0.3, 0.05), (0.5, -0.08), (0.7, 0.02), (0.212, 0.099)] {
            let pos = |s: f64, th: f64| t.tube_map(s, th, 0.1).unwrap().position;
            let ds = (pos(s + h, theta) - pos(s - h, theta)) / (2.0 * h);
            let dth = (pos(s, theta + h) - pos(s, theta - h)) / (2.0 * h);
            let det = math::abs(ds.cross(dth));
            let gamma = t.tube_map(s, theta, 0.1).unwrap().gamma;
            assert!((det - gamma).abs() < 1e-5, "s={s} theta={theta}: {det} vs {gamma}");
        }
    }

    #[test]
    fn tube_map_circular_arc_rule() {
        // at a parabola apex the osculating circle has R = 1/|kappa|; the
        // inward offset shrinks gamma by exactly (1 - theta/R)
        let t = Trajectory::quadratic([0.0, 1.0, 0.0], [0.0, 1.0, -1.0]).unwrap();
        let p = t.eval(0.5).unwrap();
        let speed = p.d1.norm();
        let kappa = p.d1.cross(p.d2) / (speed * speed * speed);
        let radius = 1.0 / math::abs(kappa);
        // curve bends right (kappa < 0): inward is the negative normal side
        let theta = -0.05;
        let gamma = t.tube_map(0.5, theta, 0.1).unwrap().gamma;
        let want = speed * (1.0 - math::abs(theta) / radius);
        assert!((gamma - want).abs() < 1e-12, "{gamma} vs {want}");
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let trajectories = [
            Trajectory::line(Vec2::new(-1.0, 2.0), Vec2::new(3.0, -0.5)).unwrap(),
            Trajectory::quadratic([0.3, 2.0, -1.0], [-0.2, 0.7, 0.9]).unwrap(),
        ];
        let h = 1e-5;
        for t in &trajectories {
            for i in 1..100 {
                let s = i as f64 / 101.0;
                let p = t.eval(s).unwrap();
                let fd1 = (t.eval(s + h).unwrap().position - t.eval(s - h).unwrap().position)
                    / (2.0 * h);
                let scale = p.d1.norm().max(1.0);
                assert!((fd1 - p.d1).norm() / scale < 1e-6);
                let fd2 =
                    (t.eval(s + h).unwrap().d1 - t.eval(s - h).unwrap().d1) / (2.0 * h);
                assert!((fd2 - p.d2).norm() / p.d2.norm().max(1.0) < 1e-6);
            }
        }
    }

    #[test]
    fn polyline_uses_right_hand_segment_at_knots() {
        let t = Trajectory::polyline(alloc::vec![
            Vec2::ZERO,
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
        ])
        .unwrap();
        let knot = t.eval(0.5).unwrap();
        assert_eq!(knot.position, Vec2::new(1.0, 0.0));
        assert_eq!(knot.d1, Vec2::new(0.0, 2.0));
        assert_eq!(t.eval(1.0).unwrap().position, Vec2::new(1.0, 1.0));
        assert!((t.max_speed() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn unit_normal_orthogonality() {
        let (_, b, _) = benchmark_paths();
        for i in 0..50 {
            let s = i as f64 / 49.0;
            let p = b.eval(s).unwrap();
            let tp = b.tube_map(s, 0.07, 0.1).unwrap();
            let n = (tp.position - p.position) / 0.07;
            assert!(math::abs(n.dot(p.d1)) < 1e-12);
            assert!(math::abs(n.norm() - 1.0) < 1e-12);
        }
    }

    #[test]
    fn max_speed_bounds_sampled_speeds() {
        let t = Trajectory::quadratic([0.0, 5.0, -2.0], [0.1, -0.3, 1.4]).unwrap();
        let cap = t.max_speed();
        for i in 0..=1000 {
            let s = i as f64 / 1000.0;
            assert!(t.eval(s).unwrap().d1.norm() <= cap + 1e-12);
        }
    }
}
