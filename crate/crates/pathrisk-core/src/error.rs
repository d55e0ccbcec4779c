//! Error type shared by all core modules.

use core::fmt;

/// Errors produced by geometry validation, Gaussian construction, quadrature,
/// and the estimators built on top of them.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A disk or combined body with a non-positive or non-finite radius.
    InvalidShape {
        radius: f64,
    },
    /// A covariance matrix that is not symmetric positive definite.
    InvalidCovariance,
    /// A query parameter outside its documented domain.
    Domain {
        what: &'static str,
        value: f64,
    },
    /// A trajectory tangent vanished where a unit normal was required.
    DegenerateTangent {
        s: f64,
    },
    /// Adaptive quadrature failed to meet the requested tolerance within the
    /// subdivision budget. Carries the best estimate and its error bound.
    Tolerance {
        best: f64,
        error: f64,
    },
    /// A grid request would allocate more cells than the configured cap.
    Resource {
        cells: u64,
        cap: u64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidShape { radius } => {
                write!(f, "invalid shape: radius {radius} must be positive and finite")
            }
            Error::InvalidCovariance => {
                write!(f, "covariance must be symmetric positive definite")
            }
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::DegenerateTangent { s } => {
                write!(f, "trajectory tangent vanishes at s = {s}")
            }
            Error::Tolerance { best, error } => write!(
                f,
                "quadrature tolerance not met: best estimate {best} with error bound {error}"
            ),
            Error::Resource { cells, cap } => {
                write!(f, "grid of {cells} cells exceeds cap of {cap}")
            }
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// Best available value for tolerance failures, `None` otherwise.
    pub fn best_estimate(&self) -> Option<f64> {
        match self {
            Error::Tolerance { best, .. } => Some(*best),
            _ => None,
        }
    }
}
