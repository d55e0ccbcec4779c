//! Scalar math routines backed by `libm`.
//!
//! Routing every transcendental through `libm` keeps the crate `no_std`-clean
//! and makes results bit-identical with and without the `std` feature, which
//! matters for the seeded Monte Carlo estimates.

pub use core::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2, TAU};

#[inline]
pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// Standard normal cumulative distribution function.
///
/// Evaluated through `erfc` so that deep lower-tail values keep relative
/// precision instead of cancelling to 0.5 - 0.5.
#[inline]
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// Standard normal density.
#[inline]
pub fn normal_pdf(z: f64) -> f64 {
    exp(-0.5 * z * z) / sqrt(TAU)
}

/// `count` points spaced logarithmically (inclusive) between `lo` and `hi`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> alloc::vec::Vec<f64> {
    assert!(count >= 1 && lo > 0.0 && hi > lo);
    if count == 1 {
        return alloc::vec![lo];
    }
    let (la, lb) = (ln(lo), ln(hi));
    (0..count)
        .map(|i| exp(la + (lb - la) * i as f64 / (count - 1) as f64))
        .collect()
}
