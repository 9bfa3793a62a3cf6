//! Invariant 2×2 random-matrix ensembles whose level repulsion is tuned by a
//! real parameter `η`, with effective Dyson index `β_eff = 2 − 2η`.
//!
//! ```
//! use etaue::gaussian::GaussianEnsemble;
//! use etaue::sampling::run_experiment;
//! use etaue::EnsembleParams;
//!
//! let g = GaussianEnsemble::new(0.75)?;
//! assert!(g.spectral_density(0.0)? > g.spectral_density(1.0)?);
//! let r = run_experiment(EnsembleParams::gaussian(0.75), 2000, 42, 30, (-6.0, 6.0), 1)?;
//! assert!(r.gof_spacing.ks_distance < 0.05);
//! # Ok::<(), etaue::Error>(())
//! ```
//!
//! The guide in `book/` is compiled into the doctests below.

// `!(x >= 0.0)` is the idiom that also rejects NaN; tabulated constants keep
// their published digits; elimination loops index several arrays at once
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::needless_range_loop)]

pub mod bessel;
pub mod error;
pub mod gaussian;
pub mod numerics;
pub mod sampling;
pub mod specfun;
mod types;

pub use error::{Error, ErrorKind, Result};
pub use types::{eigen_from_traces, eigenvalues_2x2, EnsembleParams, HermitianEntries, SpectralPair, Symmetry, Weight};

macro_rules! book_chapters {
    ($($name:ident => $file:literal),* $(,)?) => {
        $(
            #[cfg(doctest)]
            #[doc = include_str!(concat!("../../../book/src/", $file))]
            mod $name {}
        )*
    };
}

book_chapters! {
    book_introduction => "introduction.md",
    book_gaussian => "gaussian.md",
    book_marginals => "marginals.md",
    book_twins => "twins.md",
    book_bessel => "bessel.md",
    book_sampling => "sampling.md",
    book_numerics => "numerics.md",
    book_cli => "cli.md",
    book_validation => "validation.md",
}
