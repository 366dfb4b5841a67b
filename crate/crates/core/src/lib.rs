//! Multiphoton interference of partially distinguishable photons.
//!
//! `triad-core` computes output statistics for single photons with arbitrary
//! internal states (time, polarisation, auxiliary labels) scattered by a
//! passive linear-optical network. Interference enters only through the Gram
//! matrix of pairwise overlaps; for three photons that means the three overlap
//! moduli plus one collective, gauge-invariant phase (the triad phase).
//!
//! # Layout
//!
//! - [`modes`]: internal states, overlaps, Gram matrices, triad phase.
//! - [`interference`]: permanents and exact event probabilities, with
//!   closed forms for the balanced tritter and beamsplitter.
//! - [`mixedstate`]: trace formula for mixed internal states.
//! - [`source`]: heralded squeezed-pair sources with noise photons.
//! - [`oracle`]: brute-force Fock-space simulator used for validation.
//! - [`experiment`]: state preparations, delay/phase scans, detection
//!   cascades and the full noisy count simulation.
//!
//! # Quick start
//!
//! ```
//! use triad_core::interference::{balanced_tritter, event_probability, EventSpec};
//! use triad_core::modes::GramMatrix;
//!
//! let tritter = balanced_tritter();
//! let identical = GramMatrix::all_ones(3);
//! let spec = EventSpec::new(vec![0, 1, 2], vec![1, 1, 1]).unwrap();
//! let p111 = event_probability(&tritter, &spec, &identical).unwrap();
//! assert!((p111 - 1.0 / 3.0).abs() < 1e-12);
//! ```

pub mod error;
pub mod experiment;
pub mod interference;
pub mod mixedstate;
pub mod modes;
pub mod oracle;
pub mod source;
pub mod tolerance;

pub use error::{Error, Result};
pub use interference::{EventSpec, Network, Occupation};
pub use modes::{GramMatrix, InternalState, PolarizationState};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
