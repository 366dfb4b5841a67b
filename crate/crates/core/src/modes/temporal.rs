use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;
use crate::C64;

/// Gaussian wavepacket delayed by `delay`, with temporal standard deviation
/// `sigma` and central angular frequency `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussianTemporalMode {
    pub delay: f64,
    pub sigma: f64,
    #[serde(default)]
    pub omega: f64,
}

impl GaussianTemporalMode {
    pub fn new(delay: f64, sigma: f64, omega: f64) -> Result<Self> {
        let mode = GaussianTemporalMode { delay, sigma, omega };
        mode.validate()?;
        Ok(mode)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::domain(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !self.delay.is_finite() || !self.omega.is_finite() {
            return Err(Error::domain("delay and omega must be finite"));
        }
        Ok(())
    }
}

fn same_parameter(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// `<t1|t2> = exp(-(t1-t2)^2 / (4 sigma^2) - i Omega (t1-t2))`.
///
/// Only modes with identical width and central frequency are supported.
pub fn gaussian_overlap(a: &GaussianTemporalMode, b: &GaussianTemporalMode) -> Result<C64> {
    if !same_parameter(a.sigma, b.sigma) || !same_parameter(a.omega, b.omega) {
        return Err(Error::UnsupportedModePair(format!(
            "gaussian modes differ in width or frequency: (sigma {}, omega {}) vs (sigma {}, omega {})",
            a.sigma, a.omega, b.sigma, b.omega
        )));
    }
    let dt = a.delay - b.delay;
    let envelope = (-dt * dt / (4.0 * a.sigma * a.sigma)).exp();
    Ok(C64::from_polar(envelope, -a.omega * dt))
}

/// Spectral intensity `|psi(omega)|^2` sampled on a strictly increasing grid,
/// normalised to unit trapezoidal integral.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpectrum", into = "RawSpectrum")]
pub struct SampledSpectrum {
    frequency_grid: Vec<f64>,
    intensity: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpectrum {
    frequency_grid: Vec<f64>,
    intensity: Vec<f64>,
}

impl TryFrom<RawSpectrum> for SampledSpectrum {
    type Error = Error;
    fn try_from(raw: RawSpectrum) -> Result<Self> {
        SampledSpectrum::new(raw.frequency_grid, raw.intensity)
    }
}

impl From<SampledSpectrum> for RawSpectrum {
    fn from(s: SampledSpectrum) -> Self {
        RawSpectrum {
            frequency_grid: s.frequency_grid,
            intensity: s.intensity,
        }
    }
}

fn trapezoid(grid: &[f64], values: impl Fn(usize) -> C64) -> C64 {
    grid.windows(2)
        .enumerate()
        .map(|(i, w)| (values(i) + values(i + 1)) * (0.5 * (w[1] - w[0])))
        .sum()
}

impl SampledSpectrum {
    /// Validates the grid and rescales the intensity to unit integral.
    pub fn new(frequency_grid: Vec<f64>, intensity: Vec<f64>) -> Result<Self> {
        if frequency_grid.len() != intensity.len() {
            return Err(Error::InvalidSpectrum(format!(
                "grid has {} points but intensity has {}",
                frequency_grid.len(),
                intensity.len()
            )));
        }
        if frequency_grid.len() < 2 {
            return Err(Error::InvalidSpectrum("need at least two grid points".into()));
        }
        if frequency_grid.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidSpectrum("grid contains non-finite values".into()));
        }
        if let Some(i) = frequency_grid.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSpectrum(format!(
                "grid is not strictly increasing at index {}",
                i + 1
            )));
        }
        if intensity.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::InvalidSpectrum("intensity must be finite and nonnegative".into()));
        }
        let norm = trapezoid(&frequency_grid, |i| C64::new(intensity[i], 0.0)).re;
        if !(norm > 0.0) {
            return Err(Error::InvalidSpectrum("intensity integrates to zero".into()));
        }
        let intensity = intensity.into_iter().map(|v| v / norm).collect();
        Ok(SampledSpectrum { frequency_grid, intensity })
    }

    /// Samples `f` on `points` equally spaced frequencies in `[lo, hi]`.
    pub fn from_fn(lo: f64, hi: f64, points: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if points < 2 {
            return Err(Error::InvalidSpectrum("need at least two grid points".into()));
        }
        let step = (hi - lo) / (points - 1) as f64;
        let grid: Vec<f64> = (0..points).map(|i| lo + step * i as f64).collect();
        let intensity = grid.iter().map(|&w| f(w)).collect();
        SampledSpectrum::new(grid, intensity)
    }

    /// Spectrum of a Gaussian wavepacket with temporal standard deviation
    /// `sigma_t`, centred on `omega`, sampled over `half_width` spectral
    /// standard deviations either side.
    pub fn gaussian(sigma_t: f64, omega: f64, points: usize, half_width: f64) -> Result<Self> {
        if !(sigma_t > 0.0) {
            return Err(Error::domain("sigma_t must be positive"));
        }
        let sigma_w = 1.0 / (2.0f64.sqrt() * sigma_t);
        let reach = half_width * sigma_w;
        SampledSpectrum::from_fn(omega - reach, omega + reach, points, |w| {
            let x = (w - omega) / sigma_w;
            (-0.5 * x * x).exp() / (sigma_w * (2.0 * PI).sqrt())
        })
    }

    pub fn frequency_grid(&self) -> &[f64] {
        &self.frequency_grid
    }

    pub fn intensity(&self) -> &[f64] {
        &self.intensity
    }

    pub fn mean_frequency(&self) -> f64 {
        trapezoid(&self.frequency_grid, |i| {
            C64::new(self.frequency_grid[i] * self.intensity[i], 0.0)
        })
        .re
    }

    /// Trapezoidal integral of the intensity; 1 up to rounding.
    pub fn total(&self) -> f64 {
        trapezoid(&self.frequency_grid, |i| C64::new(self.intensity[i], 0.0)).re
    }

    pub(crate) fn is_normalized(&self) -> bool {
        (self.total() - 1.0).abs() <= tolerance::SPECTRUM_NORM
    }
}

/// `zeta(dt) = integral of exp(-i dt omega) |psi(omega)|^2 d omega`, which is
/// the overlap `<t1|t2>` for `dt = t2 - t1`.
pub fn spectral_overlap(spec: &SampledSpectrum, dt: f64) -> Result<C64> {
    if !dt.is_finite() {
        return Err(Error::domain("delay must be finite"));
    }
    if !spec.is_normalized() {
        return Err(Error::InvalidSpectrum("spectrum is not normalised".into()));
    }
    let grid = &spec.frequency_grid;
    Ok(trapezoid(grid, |i| C64::from_polar(spec.intensity[i], -dt * grid[i])))
}
