//! Special functions used by the closed-form densities: the Gamma function,
//! the upper incomplete Gamma function (including non-positive first
//! argument), Kummer's confluent hypergeometric function, the modified
//! Bessel function `K0`, and the error function.
//!
//! Everything here is pure `f64` code with no shared state.

mod bessel;
mod erf;
mod gamma;
mod hyper;
mod incgamma;

pub use bessel::{bessel_k0, bessel_k0_scaled};
pub use erf::{erf, erfc};
pub use gamma::{gamma, gamma1pm1, ln_gamma, rgamma, sin_pi};
pub use hyper::{kummer_1f1, kummer_1f1_scaled};
pub use incgamma::{gamma_p, gamma_q, upper_incomplete_gamma};

use thiserror::Error;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("pole of {func} at {arg}")]
    Pole { func: &'static str, arg: f64 },
    #[error("{func} overflows at {arg}")]
    Overflow { func: &'static str, arg: f64 },
    #[error("{func}: argument out of domain ({detail})")]
    Domain { func: &'static str, detail: String },
    #[error("{func}: series or continued fraction failed to converge")]
    NoConvergence { func: &'static str },
}

pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> SpecialError {
    SpecialError::Domain { func, detail: detail.into() }
}
