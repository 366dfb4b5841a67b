//! Three heralded squeezed-pair sources with uncorrelated noise photons.
//!
//! Each source emits `n` pairs with probability `(1 - lambda^2) lambda^(2n)`,
//! plus independent geometric numbers of noise photons on the signal (`P_S`)
//! and idler (`P_I`) arms. Signals are heralded by threshold detectors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixedstate::PurityModel;

pub const SOURCES: usize = 3;

fn default_lambda() -> f64 {
    0.16
}
fn default_purity() -> f64 {
    0.9
}
fn default_p_idler() -> f64 {
    0.035
}
fn default_p_signal() -> f64 {
    0.009
}
fn default_total() -> usize {
    8
}
fn default_noise() -> usize {
    3
}

/// Emission parameters shared by the three sources.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceParams {
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(default = "default_purity")]
    pub purity: f64,
    #[serde(default)]
    pub purity_model: PurityModel,
    #[serde(default = "default_p_idler")]
    pub p_noise_idler: f64,
    #[serde(default = "default_p_signal")]
    pub p_noise_signal: f64,
    #[serde(default = "default_total")]
    pub truncation_total_photons: usize,
    #[serde(default = "default_noise")]
    pub truncation_noise_photons: usize,
}

impl Default for SourceParams {
    fn default() -> Self {
        SourceParams {
            lambda: default_lambda(),
            purity: default_purity(),
            purity_model: PurityModel::default(),
            p_noise_idler: default_p_idler(),
            p_noise_signal: default_p_signal(),
            truncation_total_photons: default_total(),
            truncation_noise_photons: default_noise(),
        }
    }
}

impl SourceParams {
    /// Pure, noiseless sources in the weak-squeezing limit.
    pub fn ideal() -> Self {
        SourceParams {
            lambda: 1e-6,
            purity: 1.0,
            p_noise_idler: 0.0,
            p_noise_signal: 0.0,
            ..SourceParams::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.lambda) {
            return Err(Error::domain(format!("lambda {} outside [0, 1)", self.lambda)));
        }
        for (name, p) in [("p_noise_idler", self.p_noise_idler), ("p_noise_signal", self.p_noise_signal)] {
            if !(0.0..1.0).contains(&p) {
                return Err(Error::domain(format!("{name} {p} outside [0, 1)")));
            }
        }
        if !(self.purity > 0.0 && self.purity <= 1.0) {
            return Err(Error::domain(format!("purity {} outside (0, 1]", self.purity)));
        }
        if self.truncation_total_photons < 2 {
            return Err(Error::domain("truncation_total_photons must be at least 2"));
        }
        Ok(())
    }

    fn single_weight(&self, e: SourceEmission) -> f64 {
        let l2 = self.lambda * self.lambda;
        (1.0 - l2)
            * (1.0 - self.p_noise_idler)
            * (1.0 - self.p_noise_signal)
            * l2.powi(e.pairs as i32)
            * self.p_noise_signal.powi(e.signal_noise as i32)
            * self.p_noise_idler.powi(e.idler_noise as i32)
    }
}

/// Photon numbers emitted by one source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct SourceEmission {
    pub pairs: usize,
    pub signal_noise: usize,
    pub idler_noise: usize,
}

impl SourceEmission {
    pub fn photons(&self) -> usize {
        2 * self.pairs + self.signal_noise + self.idler_noise
    }

    pub fn noise(&self) -> usize {
        self.signal_noise + self.idler_noise
    }

    /// Photons reaching the herald detector.
    pub fn signals(&self) -> usize {
        self.pairs + self.signal_noise
    }
}

/// One joint emission of the three sources with its probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmissionTerm {
    pub sources: [SourceEmission; SOURCES],
    pub weight: f64,
}

impl EmissionTerm {
    pub fn photons(&self) -> usize {
        self.sources.iter().map(SourceEmission::photons).sum()
    }

    pub fn noise(&self) -> usize {
        self.sources.iter().map(SourceEmission::noise).sum()
    }
}

/// All joint terms within the photon-number and noise truncation, ordered
/// lexicographically in `(n1, n2, n3, k1, k2, k3, l1, l2, l3)`.
pub fn enumerate_terms(params: &SourceParams) -> Result<Vec<EmissionTerm>> {
    params.validate()?;
    let n_max = params.truncation_total_photons;
    let noise_max = params.truncation_noise_photons;
    let mut out = Vec::new();
    let l2 = params.lambda * params.lambda;
    let pairs_max = if l2 == 0.0 { 0 } else { n_max / 2 };
    let k_max = if params.p_noise_signal == 0.0 { 0 } else { noise_max };
    let l_max = if params.p_noise_idler == 0.0 { 0 } else { noise_max };
    let cube = |hi: usize| {
        (0..=hi).flat_map(move |a| (0..=hi).flat_map(move |b| (0..=hi).map(move |c| [a, b, c])))
    };
    for n in cube(pairs_max) {
        for k in cube(k_max) {
            for l in cube(l_max) {
                let sources: [SourceEmission; SOURCES] = std::array::from_fn(|s| SourceEmission {
                    pairs: n[s],
                    signal_noise: k[s],
                    idler_noise: l[s],
                });
                let term = EmissionTerm { sources, weight: 0.0 };
                if term.photons() > n_max || term.noise() > noise_max {
                    continue;
                }
                let weight = sources.iter().map(|&e| params.single_weight(e)).product();
                out.push(EmissionTerm { weight, ..term });
            }
        }
    }
    Ok(out)
}

/// `1 - sum of retained weights`.
pub fn truncation_deficit(terms: &[EmissionTerm]) -> f64 {
    1.0 - terms.iter().map(|t| t.weight).sum::<f64>()
}

/// Idler-side photons left after all three heralds click.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeraldedConfig {
    /// Pair idlers per input; photons from one source share its internal state.
    pub pair_idlers: [usize; SOURCES],
    /// Noise idlers per input; each is orthogonal to every other photon.
    pub noise_idlers: [usize; SOURCES],
    /// Emission probability times the probability that every herald clicks.
    pub weight: f64,
}

impl HeraldedConfig {
    pub fn photons(&self) -> usize {
        self.pair_idlers.iter().chain(&self.noise_idlers).sum()
    }
}

/// Probability that a threshold detector with efficiency `eta` fires on `photons`.
pub fn threshold_click(photons: usize, eta: f64) -> f64 {
    1.0 - (1.0 - eta).powi(photons as i32)
}

/// Groups terms by their idler content, weighting each by the probability that
/// every herald in `heralded` fires. Sources outside `heralded` are not
/// conditioned on.
pub fn heralded_ensemble_subset(
    terms: &[EmissionTerm],
    herald_efficiency: [f64; SOURCES],
    heralded: [bool; SOURCES],
) -> Result<Vec<HeraldedConfig>> {
    if let Some(eta) = herald_efficiency.iter().find(|&&e| !(e > 0.0 && e <= 1.0)) {
        return Err(Error::domain(format!("herald efficiency {eta} outside (0, 1]")));
    }
    let mut groups: BTreeMap<([usize; SOURCES], [usize; SOURCES]), f64> = BTreeMap::new();
    for t in terms {
        let click: f64 = (0..SOURCES)
            .filter(|&s| heralded[s])
            .map(|s| threshold_click(t.sources[s].signals(), herald_efficiency[s]))
            .product();
        if click == 0.0 || t.weight == 0.0 {
            continue;
        }
        let pairs = t.sources.map(|e| e.pairs);
        let noise = t.sources.map(|e| e.idler_noise);
        *groups.entry((pairs, noise)).or_insert(0.0) += t.weight * click;
    }
    Ok(groups
        .into_iter()
        .map(|((pair_idlers, noise_idlers), weight)| HeraldedConfig { pair_idlers, noise_idlers, weight })
        .collect())
}

/// [`heralded_ensemble_subset`] with all three heralds required.
pub fn heralded_ensemble(
    terms: &[EmissionTerm],
    herald_efficiency: [f64; SOURCES],
) -> Result<Vec<HeraldedConfig>> {
    heralded_ensemble_subset(terms, herald_efficiency, [true; SOURCES])
}
