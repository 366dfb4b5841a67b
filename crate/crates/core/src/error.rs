use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two modes whose overlap has no closed form here (different widths,
    /// central frequencies, spectra, or auxiliary dimensions).
    #[error("unsupported mode pair: {0}")]
    UnsupportedModePair(String),

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    /// The cyclic overlap product is too small for its argument to mean anything.
    #[error("triad phase undefined: |S12 S23 S31| = {modulus:e} below {tolerance:e}")]
    TriadPhaseUndefined { modulus: f64, tolerance: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("size limit: {what} = {value} exceeds {limit}")]
    SizeLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
