use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cascade::DetectionCascade;
use super::preparation::{dynamic_phase, prepare, Preparation, Recipe};
use crate::error::{Error, Result};
use crate::interference::{balanced_tritter, output_distribution, two_photon_marginals_tritter};
use crate::modes::gram_matrix;
use crate::source::SourceParams;
use crate::tolerance;

/// Output columns in file order: the three-photon coincidence, the three
/// two-photon marginals, then the nine bunched three-photon events.
pub const EVENT_COLUMNS: [&str; 13] = [
    "P111", "P011", "P101", "P110", "P300", "P030", "P003", "P210", "P201", "P120", "P021", "P102",
    "P012",
];

/// Output occupation of a column name, e.g. `"P120"` -> `[1, 2, 0]`.
pub fn column_occupation(name: &str) -> Option<[usize; 3]> {
    let d: Vec<usize> = name.strip_prefix('P')?.chars().map(|c| c.to_digit(10).map(|x| x as usize)).collect::<Option<_>>()?;
    d.try_into().ok()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ScanMetadata {
    /// `"ideal"` or `"experiment"`.
    pub model: String,
    pub recipe: String,
    pub sigma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cascade: Option<DetectionCascade>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub herald_efficiency: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation_deficit: Option<f64>,
    /// Pump repetition rate used to turn per-trial probabilities into rates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trial_rate_hz: Option<f64>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

/// Event series over a delay or phase axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub x_label: String,
    pub x: Vec<f64>,
    pub series: Vec<Series>,
    pub metadata: ScanMetadata,
}

impl ScanResult {
    pub fn series(&self, name: &str) -> Option<&[f64]> {
        self.series.iter().find(|s| s.name == name).map(|s| s.values.as_slice())
    }

    /// Series lengths match the axis and every value is a probability.
    pub fn validate(&self) -> Result<()> {
        for s in &self.series {
            if s.values.len() != self.x.len() {
                return Err(Error::NumericalInconsistency(format!(
                    "series {} has {} values for {} grid points",
                    s.name,
                    s.values.len(),
                    self.x.len()
                )));
            }
            if let Some(v) = s.values.iter().find(|v| !(0.0..=1.0 + tolerance::PROBABILITY_SLACK).contains(*v)) {
                return Err(Error::NumericalInconsistency(format!("series {} has value {v}", s.name)));
            }
        }
        Ok(())
    }

    pub(crate) fn from_rows(x_label: &str, x: Vec<f64>, rows: Vec<[f64; 13]>, metadata: ScanMetadata) -> Self {
        let series = EVENT_COLUMNS
            .iter()
            .enumerate()
            .map(|(c, name)| Series { name: (*name).to_string(), values: rows.iter().map(|r| r[c]).collect() })
            .collect();
        ScanResult { x_label: x_label.to_string(), x, series, metadata }
    }
}

/// Ideal balanced-tritter probabilities for one preparation, in
/// [`EVENT_COLUMNS`] order.
pub fn ideal_row(prep: &Preparation) -> Result<[f64; 13]> {
    let states = prepare(prep)?;
    let g = gram_matrix(&states)?;
    let dist = output_distribution(&balanced_tritter(), &[0, 1, 2], &g)?;
    let marg = two_photon_marginals_tritter(&g)?;
    let mut row = [0.0; 13];
    for (c, name) in EVENT_COLUMNS.iter().enumerate() {
        row[c] = match *name {
            "P011" => marg.p011,
            "P101" => marg.p101,
            "P110" => marg.p110,
            _ => {
                let occ = column_occupation(name).expect("column name");
                dist.iter().find(|(o, _)| o.0 == occ).map(|x| x.1).unwrap_or(0.0)
            }
        };
    }
    Ok(row)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::domain("scan grid is empty"));
    }
    if let Some(x) = grid.iter().find(|x| !x.is_finite()) {
        return Err(Error::domain(format!("scan grid contains {x}")));
    }
    Ok(())
}

/// Preparations for the symmetric delay scan `t1 = -tau/2`, `t2 = 0`, `t3 = tau/2`.
pub fn delay_preparations(recipe: Recipe, taus: &[f64], sigma: f64) -> Vec<Preparation> {
    taus.iter().map(|&tau| Preparation::symmetric_scan(recipe, tau, sigma)).collect()
}

/// Dynamic preparations with all moduli held at 1/2; the axis is the triad
/// phase of each `theta`.
pub fn triad_preparations(thetas: &[f64], sigma: f64) -> (Vec<f64>, Vec<Preparation>) {
    let phis = thetas.iter().map(|&t| dynamic_phase(t)).collect();
    (phis, thetas.iter().map(|&t| Preparation::dynamic(t, sigma)).collect())
}

/// Ideal scan over arbitrary preparations.
pub fn ideal_scan(x_label: &str, x: Vec<f64>, preps: &[Preparation]) -> Result<ScanResult> {
    check_grid(&x)?;
    if x.len() != preps.len() {
        return Err(Error::domain("grid and preparation lists differ in length"));
    }
    let rows = preps.par_iter().map(ideal_row).collect::<Result<Vec<_>>>()?;
    let first = preps[0];
    let meta = ScanMetadata {
        model: "ideal".into(),
        recipe: first.recipe.name().into(),
        sigma: first.sigma,
        ..ScanMetadata::default()
    };
    let result = ScanResult::from_rows(x_label, x, rows, meta);
    result.validate()?;
    Ok(result)
}

/// Ideal delay scan for the static recipes.
pub fn scan_delays(recipe: Recipe, taus: &[f64], sigma: f64) -> Result<ScanResult> {
    if !matches!(recipe, Recipe::AllH | Recipe::StaticPi) {
        return Err(Error::domain("delay scans use the all_h or static_pi recipe"));
    }
    check_grid(taus)?;
    ideal_scan("tau", taus.to_vec(), &delay_preparations(recipe, taus, sigma))
}

/// Ideal triad-phase scan over polariser angles `thetas`; the axis is the
/// resulting triad phase.
pub fn scan_triad(thetas: &[f64], sigma: f64) -> Result<ScanResult> {
    check_grid(thetas)?;
    let (phis, preps) = triad_preparations(thetas, sigma);
    ideal_scan("phi", phis, &preps)
}

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..n).map(|i| start + (stop - start) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Default delay grid: `tau` in `[-12 sigma, 12 sigma]`, 61 points.
pub fn default_delay_grid(sigma: f64) -> Vec<f64> {
    linspace(-12.0 * sigma, 12.0 * sigma, 61)
}

/// Default phase grid: 33 points on `[0, 2 pi]`.
pub fn default_phase_grid() -> Vec<f64> {
    linspace(0.0, std::f64::consts::TAU, 33)
}
