//! Adaptive one-dimensional quadrature on a Gauss–Kronrod 7-15 rule.
//!
//! Panels are kept in a max-heap on their error estimate; the worst panel is
//! bisected until the summed error meets `max(abs_tol, rel_tol * |I|)` or the
//! subdivision budget runs out. Two-dimensional integrals elsewhere in the
//! crate are nested applications of this routine.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

use crate::error::Error;
use crate::gauss::QuadratureSpec;
use crate::math;
use crate::Result;

/// Positive abscissae of the 15-point Kronrod rule (x = 0 first).
const XGK: [f64; 8] = [
    0.000000000000000000000000000000000,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
];

/// Weights of the embedded 7-point Gauss rule (nodes XGK[0], XGK[2], XGK[4], XGK[6]).
const WG: [f64; 4] = [
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
];

/// One Kronrod evaluation over `[a, b]`: returns (integral, error estimate).
fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut fv1 = [0.0f64; 8];
    let mut fv2 = [0.0f64; 8];
    fv1[0] = fc;
    fv2[0] = fc;

    let mut kron = fc * WGK[0];
    let mut gauss = fc * WG[0];
    let mut res_abs = math::abs(kron);

    for j in 1..8 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let fsum = f1 + f2;
        kron += WGK[j] * fsum;
        res_abs += WGK[j] * (math::abs(f1) + math::abs(f2));
        if j % 2 == 0 {
            gauss += WG[j / 2] * fsum;
        }
    }

    // QUADPACK-style rescaled error estimate
    let mean = 0.5 * kron;
    let mut res_asc = WGK[0] * math::abs(fc - mean);
    for j in 1..8 {
        res_asc += WGK[j] * (math::abs(fv1[j] - mean) + math::abs(fv2[j] - mean));
    }
    let err_raw = math::abs((kron - gauss) * half);
    let integral = kron * half;
    res_abs *= math::abs(half);
    res_asc *= math::abs(half);

    let mut err = err_raw;
    if res_asc != 0.0 && err != 0.0 {
        let scale = math::powf(200.0 * err / res_asc, 1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (integral, err)
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Adaptively integrate `f` over `[a, b]` to the tolerances in `spec`.
///
/// Returns `Error::Tolerance` (carrying the best estimate) when the
/// subdivision budget is exhausted before convergence. A zero-width interval
/// integrates to exactly zero.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = kronrod(&mut f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value: v, error: e });
    let mut total_value = v;
    let mut total_error = e;

    for _ in 0..spec.max_subdivisions {
        if total_error <= spec.abs_tol.max(spec.rel_tol * math::abs(total_value)) {
            return Ok(total_value);
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval no longer splittable in f64; accept its estimate
            total_error -= worst.error;
            continue;
        }
        let (v1, e1) = kronrod(&mut f, worst.a, mid);
        let (v2, e2) = kronrod(&mut f, mid, worst.b);
        total_value += v1 + v2 - worst.value;
        total_error += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    }

    if total_error <= spec.abs_tol.max(spec.rel_tol * math::abs(total_value)) {
        Ok(total_value)
    } else {
        Err(Error::Tolerance { best: total_value, error: total_error })
    }
}
