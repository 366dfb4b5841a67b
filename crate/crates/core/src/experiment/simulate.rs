use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::cascade::DetectionCascade;
use super::preparation::{prepare, Preparation};
use super::scan::{column_occupation, ScanMetadata, ScanResult, EVENT_COLUMNS};
use crate::error::{Error, Result};
use crate::interference::{balanced_tritter, output_distribution, Network};
use crate::mixedstate::common_mode_weight;
use crate::modes::{gram_matrix, InternalState};
use crate::oracle::{evolve_and_measure_polarized, expand_inputs_polarized};
use crate::source::{
    enumerate_terms, heralded_ensemble_subset, truncation_deficit, EmissionTerm, HeraldedConfig,
    SourceEmission, SourceParams, SOURCES,
};

/// Deficit above which the result carries a truncation warning.
pub const TRUNCATION_WARNING: f64 = 1e-2;

/// Default pump repetition rate, reported for converting probabilities to rates.
pub const DEFAULT_TRIAL_RATE_HZ: f64 = 80e6;

/// Everything besides the photon preparation.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSetup {
    pub source: SourceParams,
    pub cascade: DetectionCascade,
    /// Efficiency of each herald detector.
    pub herald_efficiency: f64,
    /// Network seen by horizontally polarised light.
    pub network_h: Network,
    /// Network seen by vertically polarised light.
    pub network_v: Network,
    pub trial_rate_hz: f64,
}

impl Default for ExperimentSetup {
    fn default() -> Self {
        ExperimentSetup {
            source: SourceParams::default(),
            cascade: DetectionCascade::default(),
            herald_efficiency: 0.5,
            network_h: balanced_tritter(),
            network_v: balanced_tritter(),
            trial_rate_hz: DEFAULT_TRIAL_RATE_HZ,
        }
    }
}

impl ExperimentSetup {
    /// Weak pure noiseless sources, perfect detectors, no cascade.
    pub fn ideal() -> Self {
        ExperimentSetup {
            source: SourceParams::ideal(),
            cascade: DetectionCascade::none(1.0),
            herald_efficiency: 1.0,
            ..ExperimentSetup::default()
        }
    }

    fn validate(&self) -> Result<()> {
        self.source.validate()?;
        self.cascade.validate()?;
        if !(self.herald_efficiency > 0.0 && self.herald_efficiency <= 1.0) {
            return Err(Error::domain(format!("herald efficiency {} outside (0, 1]", self.herald_efficiency)));
        }
        if self.network_h.dim() != 3 || self.network_v.dim() != 3 {
            return Err(Error::domain("the experiment needs 3-mode networks"));
        }
        Ok(())
    }
}

/// Click counts per output (number of leaf detectors that fired).
pub type ClickPattern = [usize; 3];

type OccupationDist = BTreeMap<Vec<usize>, f64>;

const PAIR_RUNS: [(usize, usize); 3] = [(1, 2), (0, 2), (0, 1)];

/// Heralded configurations for the full run and the three two-source runs.
struct Ensembles {
    all: Vec<HeraldedConfig>,
    pairs: [Vec<HeraldedConfig>; 3],
}

fn ensembles(terms: &[EmissionTerm], eta: f64) -> Result<Ensembles> {
    let all = heralded_ensemble_subset(terms, [eta; SOURCES], [true; SOURCES])?;
    let mut pairs: [Vec<HeraldedConfig>; 3] = Default::default();
    for (slot, &(i, j)) in PAIR_RUNS.iter().enumerate() {
        let off = 3 - i - j;
        let kept: Vec<EmissionTerm> = terms
            .iter()
            .filter(|t| t.sources[off] == SourceEmission::default())
            .copied()
            .collect();
        let mut active = [false; SOURCES];
        active[i] = true;
        active[j] = true;
        pairs[slot] = heralded_ensemble_subset(&kept, [eta; SOURCES], active)?;
    }
    Ok(Ensembles { all, pairs })
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

struct Point<'a> {
    setup: &'a ExperimentSetup,
    states: [InternalState; 3],
    /// Weight of the common (interfering) mode in each photon's mixture.
    p: f64,
    /// Output distribution of one distinguishable photon from each input.
    single: [[f64; 3]; 3],
    groups: HashMap<[usize; 3], OccupationDist>,
}

impl<'a> Point<'a> {
    fn new(setup: &'a ExperimentSetup, states: [InternalState; 3], p: f64) -> Self {
        let (uh, uv) = (setup.network_h.matrix(), setup.network_v.matrix());
        let single = std::array::from_fn(|a| {
            let pol = states[a].polarization();
            std::array::from_fn(|k| {
                pol.h().norm_sqr() * uh[(k, a)].norm_sqr() + pol.v().norm_sqr() * uv[(k, a)].norm_sqr()
            })
        });
        Point { setup, states, p, single, groups: HashMap::new() }
    }

    /// Output distribution of `counts[a]` mutually identical photons from
    /// each source, all in their pure internal states.
    fn group(&mut self, counts: [usize; 3]) -> Result<OccupationDist> {
        if let Some(d) = self.groups.get(&counts) {
            return Ok(d.clone());
        }
        let mut inputs = Vec::new();
        let mut states = Vec::new();
        for a in 0..3 {
            for _ in 0..counts[a] {
                inputs.push(a);
                states.push(self.states[a].clone());
            }
        }
        let dist: OccupationDist = if inputs.is_empty() {
            [(vec![0; 3], 1.0)].into_iter().collect()
        } else if self.setup.network_h == self.setup.network_v {
            let g = gram_matrix(&states)?;
            output_distribution(&self.setup.network_h, &inputs, &g)?
                .into_iter()
                .map(|(o, p)| (o.0, p))
                .collect()
        } else {
            let (fock, vertical) = expand_inputs_polarized(&states, &inputs, 3)?;
            evolve_and_measure_polarized(&fock, &vertical, &self.setup.network_h, &self.setup.network_v)?
                .into_iter()
                .map(|(o, p)| (o.0, p))
                .collect()
        };
        self.groups.insert(counts, dist.clone());
        Ok(dist)
    }

    /// Heralded output-occupation distribution averaged over `configs`.
    fn occupations(&mut self, configs: &[HeraldedConfig]) -> Result<OccupationDist> {
        let mut total = OccupationDist::new();
        let norm: f64 = configs.iter().map(|c| c.weight).sum();
        if norm <= 0.0 {
            return Err(Error::NumericalInconsistency("no heralded configuration survives".into()));
        }
        for cfg in configs {
            let n = cfg.pair_idlers;
            for c0 in 0..=n[0] {
                for c1 in 0..=n[1] {
                    for c2 in 0..=n[2] {
                        let c = [c0, c1, c2];
                        let w: f64 = (0..3)
                            .map(|a| {
                                binomial(n[a], c[a])
                                    * self.p.powi(c[a] as i32)
                                    * (1.0 - self.p).powi((n[a] - c[a]) as i32)
                            })
                            .product();
                        if w == 0.0 {
                            continue;
                        }
                        let mut dist = self.group(c)?;
                        // photons outside the common mode and noise photons
                        // interfere with nothing
                        for a in 0..3 {
                            for _ in 0..(n[a] - c[a] + cfg.noise_idlers[a]) {
                                dist = convolve(&dist, &self.single[a]);
                            }
                        }
                        let scale = cfg.weight * w / norm;
                        for (o, p) in dist {
                            *total.entry(o).or_default() += scale * p;
                        }
                    }
                }
            }
        }
        Ok(total)
    }
}

fn convolve(dist: &OccupationDist, single: &[f64; 3]) -> OccupationDist {
    let mut out = OccupationDist::new();
    for (o, &p) in dist {
        for (k, &q) in single.iter().enumerate() {
            if q == 0.0 {
                continue;
            }
            let mut next = o.clone();
            next[k] += 1;
            *out.entry(next).or_default() += p * q;
        }
    }
    out
}

/// Pushes an occupation distribution through the cascade.
pub fn click_patterns(cascade: &DetectionCascade, occ: &BTreeMap<Vec<usize>, f64>) -> BTreeMap<ClickPattern, f64> {
    let mut memo: HashMap<(usize, usize), Vec<f64>> = HashMap::new();
    let mut out = BTreeMap::new();
    for (o, &p) in occ {
        let per: Vec<Vec<f64>> = (0..3)
            .map(|j| memo.entry((j, o[j])).or_insert_with(|| cascade.clicks(j, o[j])).clone())
            .collect();
        for (a, pa) in per[0].iter().enumerate() {
            for (b, pb) in per[1].iter().enumerate() {
                for (c, pc) in per[2].iter().enumerate() {
                    let w = p * pa * pb * pc;
                    if w != 0.0 {
                        *out.entry([a, b, c]).or_default() += w;
                    }
                }
            }
        }
    }
    out
}

fn check_total(clicks: &BTreeMap<ClickPattern, f64>) -> Result<()> {
    let total: f64 = clicks.values().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::NumericalInconsistency(format!("click probabilities sum to {total}")));
    }
    Ok(())
}

fn simulate_point(setup: &ExperimentSetup, ens: &Ensembles, prep: &Preparation, p: f64) -> Result<[f64; 13]> {
    let states = prepare(prep)?;
    let mut point = Point::new(setup, states, p);
    let three = click_patterns(&setup.cascade, &point.occupations(&ens.all)?);
    check_total(&three)?;
    let mut pairs: Vec<BTreeMap<ClickPattern, f64>> = Vec::with_capacity(3);
    for configs in &ens.pairs {
        let c = click_patterns(&setup.cascade, &point.occupations(configs)?);
        check_total(&c)?;
        pairs.push(c);
    }
    let mut row = [0.0; 13];
    for (col, name) in EVENT_COLUMNS.iter().enumerate() {
        let pattern = column_occupation(name).expect("column name");
        let source = match *name {
            "P011" => &pairs[0],
            "P101" => &pairs[1],
            "P110" => &pairs[2],
            _ => &three,
        };
        row[col] = source.get(&pattern).copied().unwrap_or(0.0);
    }
    Ok(row)
}

/// Heralded click-pattern probabilities for each preparation. Three-photon
/// columns come from runs with all three sources; the two-photon columns come
/// from runs with only the two relevant sources pumped.
pub fn simulate_counts(
    x_label: &str,
    x: Vec<f64>,
    preps: &[Preparation],
    setup: &ExperimentSetup,
) -> Result<ScanResult> {
    setup.validate()?;
    if x.is_empty() || x.len() != preps.len() {
        return Err(Error::domain("grid and preparation lists must be nonempty and equal in length"));
    }
    let terms = enumerate_terms(&setup.source)?;
    let deficit = truncation_deficit(&terms);
    let ens = ensembles(&terms, setup.herald_efficiency)?;
    let p = common_mode_weight(setup.source.purity, setup.source.purity_model)?;
    let rows = preps
        .par_iter()
        .map(|prep| simulate_point(setup, &ens, prep, p))
        .collect::<Result<Vec<_>>>()?;
    let mut warnings = Vec::new();
    if deficit > TRUNCATION_WARNING {
        warnings.push(format!("TruncationWarning: retained emission terms miss {deficit:.3e} of the probability"));
    }
    let meta = ScanMetadata {
        model: "experiment".into(),
        recipe: preps[0].recipe.name().into(),
        sigma: preps[0].sigma,
        source: Some(setup.source),
        cascade: Some(setup.cascade),
        herald_efficiency: Some(setup.herald_efficiency),
        truncation_deficit: Some(deficit),
        trial_rate_hz: Some(setup.trial_rate_hz),
        warnings,
    };
    let result = ScanResult::from_rows(x_label, x, rows, meta);
    result.validate()?;
    Ok(result)
}

/// `1 - value(x nearest 0) / mean(value at both ends)`.
pub fn dip_visibility(x: &[f64], values: &[f64]) -> Result<f64> {
    if x.len() != values.len() || x.len() < 2 {
        return Err(Error::domain("visibility needs matching series with at least two points"));
    }
    let centre = x
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .expect("nonempty");
    let far = 0.5 * (values[0] + values[values.len() - 1]);
    if far <= 0.0 {
        return Err(Error::NumericalInconsistency("reference level is zero".into()));
    }
    Ok(1.0 - values[centre] / far)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{scan_delays, scan_triad, theta_for_phase, triad_preparations, Recipe};
    use crate::CMatrix;
    use std::f64::consts::PI;

    #[test]
    fn ideal_setup_reduces_to_closed_forms() {
        let thetas: Vec<f64> = [0.0, PI / 3.0, PI, 1.7 * PI].iter().map(|&p| theta_for_phase(p)).collect();
        let (phis, preps) = triad_preparations(&thetas, 1.0);
        let sim = simulate_counts("phi", phis, &preps, &ExperimentSetup::ideal()).unwrap();
        let ideal = scan_triad(&thetas, 1.0).unwrap();
        for name in ["P111", "P011", "P101", "P110"] {
            for (a, b) in sim.series(name).unwrap().iter().zip(ideal.series(name).unwrap()) {
                assert!((a - b).abs() < 1e-9, "{name}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn ideal_setup_delay_scan() {
        let taus = [-4.0, -1.0, 0.0, 2.5];
        let preps: Vec<_> = taus.iter().map(|&t| Preparation::symmetric_scan(Recipe::AllH, t, 1.0)).collect();
        let sim = simulate_counts("tau", taus.to_vec(), &preps, &ExperimentSetup::ideal()).unwrap();
        let ideal = scan_delays(Recipe::AllH, &taus, 1.0).unwrap();
        for name in ["P111", "P110"] {
            for (a, b) in sim.series(name).unwrap().iter().zip(ideal.series(name).unwrap()) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn click_patterns_normalised() {
        let mut occ = BTreeMap::new();
        occ.insert(vec![2, 1, 0], 0.25);
        occ.insert(vec![3, 0, 0], 0.25);
        occ.insert(vec![1, 1, 1], 0.5);
        for cascade in [DetectionCascade::none(0.4), DetectionCascade::config_a(0.7), DetectionCascade::config_b(1.0)] {
            let c = click_patterns(&cascade, &occ);
            assert!((c.values().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn noisy_model_keeps_distributions() {
        let preps = [Preparation::symmetric_scan(Recipe::AllH, 0.0, 1.0)];
        let setup = ExperimentSetup { cascade: DetectionCascade::config_a(0.5), ..ExperimentSetup::default() };
        let r = simulate_counts("tau", vec![0.0], &preps, &setup).unwrap();
        r.validate().unwrap();
        let meta = &r.metadata;
        assert!(meta.truncation_deficit.unwrap() < 1e-3);
        assert!(meta.warnings.is_empty());
        // pseudo-number resolution sees suppressed events through imperfections
        assert!(r.series("P210").unwrap()[0] > 0.0);
    }

    #[test]
    fn polarisation_dependent_tritter_moves_marginals() {
        let t = balanced_tritter();
        let e = 0.05f64;
        let rot = CMatrix::from_fn(3, 3, |i, j| {
            let v = match (i, j) {
                (0, 0) | (1, 1) => e.cos(),
                (0, 1) => -e.sin(),
                (1, 0) => e.sin(),
                (2, 2) => 1.0,
                _ => 0.0,
            };
            crate::C64::new(v, 0.0)
        });
        let tv = Network::new(t.matrix() * rot).unwrap();
        let setup = ExperimentSetup { network_v: tv, ..ExperimentSetup::ideal() };
        let thetas: Vec<f64> = [0.0, PI / 2.0, PI].iter().map(|&p| theta_for_phase(p)).collect();
        let (phis, preps) = triad_preparations(&thetas, 1.0);
        let r = simulate_counts("phi", phis, &preps, &setup).unwrap();
        let m = r.series("P110").unwrap();
        let spread = m.iter().cloned().fold(f64::MIN, f64::max) - m.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread > 1e-4, "{m:?}");
    }

    #[test]
    fn visibility_helper() {
        let v = dip_visibility(&[-1.0, 0.0, 1.0], &[0.2, 0.1, 0.2]).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        assert!(dip_visibility(&[0.0], &[1.0]).is_err());
    }
}
