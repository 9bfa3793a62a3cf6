//! Monte Carlo engine: the entry-chain sampler for the Gaussian weight,
//! eigenvalue-space samplers, Haar lifts, the power-sum determinant check and
//! seeded experiments.

mod eigen;
mod entries;
mod envelope;
mod experiment;
mod haar;
mod hankel;
mod rng;

pub use eigen::{sample_eigen_bessel, sample_eigen_gaussian, BesselEigenSampler};
pub use entries::{sample_entries_gaussian, GaussianEntrySampler};
pub use envelope::{
    rejection_sample, Draw, Envelope, GridBuilder, GridTable, RejectionSampler, MAX_ATTEMPTS, PROBE_POINTS,
    SAFETY_MARGIN,
};
pub use experiment::{
    draw_samples, reference_curves, run_experiment, ExperimentResult, MatrixSample, MatrixSampler, ReferenceCurves,
};
pub use haar::{conjugate, haar_unitary_2x2, lift_real, lift_unitary, Unitary2};
pub use hankel::{vandermonde_power_sum_det, HankelMomentMatrix};
pub use rng::RngStream;
