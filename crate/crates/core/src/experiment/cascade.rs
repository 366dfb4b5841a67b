use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Optional splitter in front of one output mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Splitter {
    #[default]
    None,
    #[serde(rename = "beamsplitter_2way")]
    Beamsplitter2way,
    #[serde(rename = "tritter_3way")]
    Tritter3way,
}

impl Splitter {
    /// Number of threshold detectors behind the splitter.
    pub fn leaves(self) -> usize {
        match self {
            Splitter::None => 1,
            Splitter::Beamsplitter2way => 2,
            Splitter::Tritter3way => 3,
        }
    }
}

fn default_efficiency() -> f64 {
    0.5
}

/// Threshold detectors behind uniform splitters, one tree per output mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectionCascade {
    #[serde(default)]
    pub splitters: [Splitter; 3],
    /// Efficiency of every leaf detector.
    #[serde(default = "default_efficiency")]
    pub efficiency: f64,
}

impl Default for DetectionCascade {
    fn default() -> Self {
        DetectionCascade::none(default_efficiency())
    }
}

impl DetectionCascade {
    /// One detector per output.
    pub fn none(efficiency: f64) -> Self {
        DetectionCascade { splitters: [Splitter::None; 3], efficiency }
    }

    /// Two-way splitters on outputs 1 and 3.
    pub fn config_a(efficiency: f64) -> Self {
        DetectionCascade {
            splitters: [Splitter::Beamsplitter2way, Splitter::None, Splitter::Beamsplitter2way],
            efficiency,
        }
    }

    /// A three-way splitter on output 1.
    pub fn config_b(efficiency: f64) -> Self {
        DetectionCascade {
            splitters: [Splitter::Tritter3way, Splitter::None, Splitter::None],
            efficiency,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.efficiency > 0.0 && self.efficiency <= 1.0) {
            return Err(Error::domain(format!("detector efficiency {} outside (0, 1]", self.efficiency)));
        }
        Ok(())
    }

    /// Probability of `c` clicking leaves behind output `mode`, for `c = 0..=leaves`,
    /// given `photons` photons in that mode.
    pub fn clicks(&self, mode: usize, photons: usize) -> Vec<f64> {
        click_distribution(self.splitters[mode].leaves(), self.efficiency, photons)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `P(c of L leaves click | s photons)` for a uniform `L`-way split followed
/// by threshold detectors of efficiency `eta`:
/// `C(L, c) sum_b (-1)^(c-b) C(c, b) (b eta / L + 1 - eta)^s`.
pub fn click_distribution(leaves: usize, eta: f64, photons: usize) -> Vec<f64> {
    let l = leaves as f64;
    (0..=leaves)
        .map(|c| {
            let inner: f64 = (0..=c)
                .map(|b| {
                    let sign = if (c - b) % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binomial(c, b) * (b as f64 * eta / l + 1.0 - eta).powi(photons as i32)
                })
                .sum();
            (binomial(leaves, c) * inner).max(0.0)
        })
        .collect()
}
