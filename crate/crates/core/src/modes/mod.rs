//! Single-photon internal states and their overlaps.
//!
//! A photon's internal state is a product of a temporal mode, a polarisation
//! qubit and an optional auxiliary vector. Overlaps factorise accordingly, and
//! the Gram matrix of a photon set is the only thing the interference
//! calculation needs to know about it.

mod gram;
mod state;
mod temporal;
mod triad;

pub use gram::{gram_matrix, orthonormal_coefficients, GramMatrix};
pub use state::{overlap, InternalState, PolarizationState, TemporalMode};
pub use temporal::{gaussian_overlap, spectral_overlap, GaussianTemporalMode, SampledSpectrum};
pub use triad::{
    angle_distance, delay_invariance_test, normalize_angle, qubit_triad_phase, triad_phase,
    triad_phase_with_tolerance, triad_product, DelayInvarianceReport, QubitTriadPhase,
};
