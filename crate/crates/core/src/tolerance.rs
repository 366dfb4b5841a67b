//! Numerical tolerances shared by validation checks.

/// Unit norm of a pure state, unit diagonal and Hermiticity of a Gram matrix.
pub const NORM: f64 = 1e-12;

/// Smallest admissible eigenvalue of a positive semi-definite matrix.
pub const PSD_EIGENVALUE: f64 = -1e-9;

/// Unitarity of a network matrix, `U U^† = I`.
pub const UNITARY: f64 = 1e-10;

/// Below this cyclic-product modulus the triad phase is reported as undefined.
pub const TRIAD_MODULUS: f64 = 1e-12;

/// Imaginary residue of a probability sum that is silently discarded.
pub const IMAG_DISCARD: f64 = 1e-10;

/// Imaginary residue that flags a numerical inconsistency.
pub const IMAG_FATAL: f64 = 1e-8;

/// Probabilities may overshoot `[0, 1]` by this much before being rejected.
pub const PROBABILITY_SLACK: f64 = 1e-10;

/// Gram–Schmidt pivots below this are treated as linearly dependent.
pub const GRAM_SCHMIDT_PIVOT: f64 = 1e-10;

/// Density-matrix trace, Hermiticity and PSD checks.
pub const DENSITY: f64 = 1e-10;

/// Normalisation of a sampled spectrum.
pub const SPECTRUM_NORM: f64 = 1e-9;
