//! Adaptive quadrature, Gauss–Hermite rules, histograms and
//! goodness-of-fit statistics.

mod cdf;
mod hermite;
mod hist;
mod quad;
mod stats;

pub use cdf::TabulatedCdf;
pub use hermite::{gauss_hermite, gauss_hermite_48};
pub use hist::{build_histogram, Histogram};
pub use quad::{integrate, try_integrate, Domain, EvalResult, QuadratureSpec, Singular};
pub use stats::{gof_stats, ks_distance, GofStats};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("quadrature did not converge after {subdivisions} subdivisions (value {value:e}, error estimate {est_abs_error:e})")]
    NoConvergence { subdivisions: usize, value: f64, est_abs_error: f64 },
    #[error("integrand returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("empty data")]
    EmptyData,
    #[error("invalid argument: {0}")]
    Invalid(String),
}
