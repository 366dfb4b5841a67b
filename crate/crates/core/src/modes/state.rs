use serde::{Deserialize, Serialize};

use super::temporal::{gaussian_overlap, spectral_overlap, GaussianTemporalMode, SampledSpectrum};
use crate::error::{Error, Result};
use crate::tolerance;
use crate::C64;

/// Polarisation qubit `h |H> + v |V>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolarization", into = "RawPolarization")]
pub struct PolarizationState {
    h: C64,
    v: C64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPolarization {
    h: C64,
    v: C64,
}

impl TryFrom<RawPolarization> for PolarizationState {
    type Error = Error;
    fn try_from(raw: RawPolarization) -> Result<Self> {
        PolarizationState::new(raw.h, raw.v)
    }
}

impl From<PolarizationState> for RawPolarization {
    fn from(p: PolarizationState) -> Self {
        RawPolarization { h: p.h, v: p.v }
    }
}

impl PolarizationState {
    pub fn new(h: C64, v: C64) -> Result<Self> {
        let norm = h.norm_sqr() + v.norm_sqr();
        if (norm - 1.0).abs() > tolerance::NORM {
            return Err(Error::domain(format!(
                "polarisation amplitudes have squared norm {norm}, expected 1"
            )));
        }
        Ok(PolarizationState { h, v })
    }

    pub fn horizontal() -> Self {
        PolarizationState { h: C64::new(1.0, 0.0), v: C64::new(0.0, 0.0) }
    }

    pub fn vertical() -> Self {
        PolarizationState { h: C64::new(0.0, 0.0), v: C64::new(1.0, 0.0) }
    }

    /// `cos(alpha) |H> + exp(i eta) sin(alpha) |V>`.
    pub fn from_angles(alpha: f64, eta: f64) -> Self {
        PolarizationState {
            h: C64::new(alpha.cos(), 0.0),
            v: C64::from_polar(alpha.sin(), eta),
        }
    }

    pub fn h(&self) -> C64 {
        self.h
    }

    pub fn v(&self) -> C64 {
        self.v
    }

    pub fn overlap(&self, other: &PolarizationState) -> C64 {
        self.h.conj() * other.h + self.v.conj() * other.v
    }
}

/// Temporal part of an internal state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TemporalMode {
    Gaussian(GaussianTemporalMode),
    Sampled { spectrum: SampledSpectrum, delay: f64 },
}

impl TemporalMode {
    pub fn gaussian(delay: f64, sigma: f64) -> Result<Self> {
        Ok(TemporalMode::Gaussian(GaussianTemporalMode::new(delay, sigma, 0.0)?))
    }

    pub fn delay(&self) -> f64 {
        match self {
            TemporalMode::Gaussian(g) => g.delay,
            TemporalMode::Sampled { delay, .. } => *delay,
        }
    }

    pub fn overlap(&self, other: &TemporalMode) -> Result<C64> {
        match (self, other) {
            (TemporalMode::Gaussian(a), TemporalMode::Gaussian(b)) => gaussian_overlap(a, b),
            (
                TemporalMode::Sampled { spectrum: sa, delay: ta },
                TemporalMode::Sampled { spectrum: sb, delay: tb },
            ) => {
                if sa != sb {
                    return Err(Error::UnsupportedModePair(
                        "sampled modes must share one spectrum".into(),
                    ));
                }
                spectral_overlap(sa, tb - ta)
            }
            _ => Err(Error::UnsupportedModePair(
                "cannot overlap a gaussian mode with a sampled spectrum".into(),
            )),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            TemporalMode::Gaussian(g) => g.validate(),
            TemporalMode::Sampled { delay, .. } if !delay.is_finite() => {
                Err(Error::domain("delay must be finite"))
            }
            TemporalMode::Sampled { .. } => Ok(()),
        }
    }
}

/// Pure internal state of one photon: temporal mode, polarisation and an
/// optional vector over a shared auxiliary orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawState", into = "RawState")]
pub struct InternalState {
    temporal: TemporalMode,
    polarization: PolarizationState,
    aux: Vec<C64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    temporal: TemporalMode,
    polarization: PolarizationState,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    aux: Vec<C64>,
}

impl TryFrom<RawState> for InternalState {
    type Error = Error;
    fn try_from(raw: RawState) -> Result<Self> {
        InternalState::with_aux(raw.temporal, raw.polarization, raw.aux)
    }
}

impl From<InternalState> for RawState {
    fn from(s: InternalState) -> Self {
        RawState { temporal: s.temporal, polarization: s.polarization, aux: s.aux }
    }
}

impl InternalState {
    pub fn new(temporal: TemporalMode, polarization: PolarizationState) -> Result<Self> {
        InternalState::with_aux(temporal, polarization, Vec::new())
    }

    /// `aux` must be empty or a unit vector.
    pub fn with_aux(
        temporal: TemporalMode,
        polarization: PolarizationState,
        aux: Vec<C64>,
    ) -> Result<Self> {
        temporal.validate()?;
        if !aux.is_empty() {
            let norm: f64 = aux.iter().map(|a| a.norm_sqr()).sum();
            if (norm - 1.0).abs() > tolerance::NORM {
                return Err(Error::domain(format!("aux vector has squared norm {norm}")));
            }
        }
        Ok(InternalState { temporal, polarization, aux })
    }

    /// Gaussian wavepacket with central frequency zero.
    pub fn gaussian(delay: f64, sigma: f64, polarization: PolarizationState) -> Result<Self> {
        InternalState::new(TemporalMode::gaussian(delay, sigma)?, polarization)
    }

    pub fn temporal(&self) -> &TemporalMode {
        &self.temporal
    }

    pub fn polarization(&self) -> &PolarizationState {
        &self.polarization
    }

    pub fn aux(&self) -> &[C64] {
        &self.aux
    }

    /// Same state multiplied by the global phase `exp(i chi)`.
    pub fn with_global_phase(&self, chi: f64) -> Self {
        let phase = C64::from_polar(1.0, chi);
        let polarization = PolarizationState {
            h: self.polarization.h * phase,
            v: self.polarization.v * phase,
        };
        InternalState { polarization, ..self.clone() }
    }

    fn aux_overlap(&self, other: &InternalState) -> Result<C64> {
        match (self.aux.len(), other.aux.len()) {
            (0, 0) => Ok(C64::new(1.0, 0.0)),
            (a, b) if a == b => Ok(self
                .aux
                .iter()
                .zip(&other.aux)
                .map(|(x, y)| x.conj() * y)
                .sum()),
            (a, b) => Err(Error::UnsupportedModePair(format!(
                "aux dimensions differ: {a} vs {b}"
            ))),
        }
    }

    /// Overlap of everything except polarisation (temporal times auxiliary).
    pub fn overlap_without_polarization(&self, other: &InternalState) -> Result<C64> {
        Ok(self.temporal.overlap(&other.temporal)? * self.aux_overlap(other)?)
    }
}

/// `<a|b>`, antilinear in `a`, as the product of the temporal, polarisation
/// and auxiliary overlaps.
pub fn overlap(a: &InternalState, b: &InternalState) -> Result<C64> {
    Ok(a.overlap_without_polarization(b)? * a.polarization.overlap(&b.polarization))
}
