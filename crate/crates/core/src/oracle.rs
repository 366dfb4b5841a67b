//! Brute-force second-quantised simulator.
//!
//! Photons are written as creation operators on (spatial mode, internal basis
//! index) pairs, the network acts on the spatial label of every creation
//! operator, and probabilities are read off by summing `|amplitude|^2` over
//! internal labels. Deliberately simple; used to check everything else.

use std::collections::BTreeMap;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interference::{event_probability, EventSpec, Network, Occupation};
use crate::mixedstate::{pure_coefficients, InternalDensity};
use crate::modes::{gram_matrix, orthonormal_coefficients, InternalState, PolarizationState, TemporalMode};
use crate::tolerance;
use crate::C64;

pub const MAX_PHOTONS: usize = 6;

/// Output distribution over spatial occupations.
pub type Distribution = BTreeMap<Occupation, f64>;

/// Normalised state in the occupation basis of (spatial mode, internal index)
/// pairs. Key index `mode * internal_dim + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    spatial_modes: usize,
    internal_dim: usize,
    amplitudes: BTreeMap<Vec<usize>, C64>,
}

impl FockState {
    pub fn spatial_modes(&self) -> usize {
        self.spatial_modes
    }

    pub fn internal_dim(&self) -> usize {
        self.internal_dim
    }

    pub fn amplitudes(&self) -> &BTreeMap<Vec<usize>, C64> {
        &self.amplitudes
    }

    pub fn photons(&self) -> usize {
        self.amplitudes.keys().next().map_or(0, |k| k.iter().sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Amplitude of `|occupation>` (absent entries are zero).
    pub fn amplitude(&self, occupation: &[usize]) -> C64 {
        self.amplitudes.get(occupation).copied().unwrap_or_default()
    }
}

type Amplitudes = BTreeMap<Vec<usize>, C64>;

/// `sum_j c_j a^dagger_j` applied to `state`; `a^dagger |n> = sqrt(n + 1) |n + 1>`.
fn apply_creation(state: &Amplitudes, ops: &[(usize, C64)]) -> Amplitudes {
    let mut out = Amplitudes::new();
    for (occ, &amp) in state {
        for &(j, c) in ops {
            if c == C64::default() {
                continue;
            }
            let mut next = occ.clone();
            next[j] += 1;
            let factor = (next[j] as f64).sqrt();
            *out.entry(next).or_default() += amp * c * factor;
        }
    }
    out
}

/// Photons with internal vectors `vectors` (in one shared orthonormal basis)
/// entering `input_modes`.
pub fn expand_vectors(
    vectors: &[DVector<C64>],
    input_modes: &[usize],
    spatial_modes: usize,
) -> Result<FockState> {
    let n = vectors.len();
    if n > MAX_PHOTONS {
        return Err(Error::SizeLimit { what: "oracle photons", value: n, limit: MAX_PHOTONS });
    }
    if input_modes.len() != n {
        return Err(Error::domain(format!("{n} photons but {} input modes", input_modes.len())));
    }
    if let Some(&bad) = input_modes.iter().find(|&&m| m >= spatial_modes) {
        return Err(Error::domain(format!("input mode {bad} outside {spatial_modes} modes")));
    }
    let d = vectors.first().map_or(1, |v| v.len());
    if vectors.iter().any(|v| v.len() != d) {
        return Err(Error::domain("internal vectors have different dimensions"));
    }
    let mut state = Amplitudes::new();
    state.insert(vec![0; spatial_modes * d], C64::new(1.0, 0.0));
    for (v, &mode) in vectors.iter().zip(input_modes) {
        let ops: Vec<_> = v.iter().enumerate().map(|(k, &c)| (mode * d + k, c)).collect();
        state = apply_creation(&state, &ops);
    }
    state.retain(|_, a| a.norm_sqr() > 0.0);
    let norm = state.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm <= tolerance::NORM {
        return Err(Error::NumericalInconsistency("input state has zero norm".into()));
    }
    for a in state.values_mut() {
        *a /= norm;
    }
    Ok(FockState { spatial_modes, internal_dim: d, amplitudes: state })
}

/// Orthonormalises the joint Gram matrix of `states` and expands the product
/// of their creation operators.
pub fn expand_inputs(
    states: &[InternalState],
    input_modes: &[usize],
    spatial_modes: usize,
) -> Result<FockState> {
    let c = orthonormal_coefficients(gram_matrix(states)?.entries())?;
    let vectors: Vec<_> = (0..c.nrows()).map(|i| c.row(i).transpose()).collect();
    expand_vectors(&vectors, input_modes, spatial_modes)
}

/// Like [`expand_inputs`], but in a basis whose indices carry a definite
/// polarisation. The returned flags mark the vertical indices.
pub fn expand_inputs_polarized(
    states: &[InternalState],
    input_modes: &[usize],
    spatial_modes: usize,
) -> Result<(FockState, Vec<bool>)> {
    let vectors = pure_coefficients(states)?;
    let aux = states.first().map_or(1, |s| s.aux().len().max(1));
    let fock = expand_vectors(&vectors, input_modes, spatial_modes)?;
    let vertical = (0..fock.internal_dim).map(|k| (k / aux) % 2 == 1).collect();
    Ok((fock, vertical))
}

/// Output distribution when internal index `k` sees network `net_for(k)`.
fn evolve_with<'a>(fock: &FockState, net_for: impl Fn(usize) -> &'a Network) -> Result<Distribution> {
    let m = fock.spatial_modes;
    let d = fock.internal_dim;
    for k in 0..d {
        if net_for(k).dim() != m {
            return Err(Error::domain(format!("network has {} modes, state has {m}", net_for(k).dim())));
        }
    }
    let mut out = Amplitudes::new();
    for (occ, &amp) in &fock.amplitudes {
        let mut norm = 1.0;
        let mut state = Amplitudes::new();
        state.insert(vec![0; m * d], C64::new(1.0, 0.0));
        for (slot, &count) in occ.iter().enumerate() {
            let (mode, k) = (slot / d, slot % d);
            let u = net_for(k).matrix();
            let ops: Vec<_> = (0..m).map(|o| (o * d + k, u[(o, mode)])).collect();
            for c in 1..=count {
                norm *= c as f64;
                state = apply_creation(&state, &ops);
            }
        }
        let scale = amp / norm.sqrt();
        for (o, a) in state {
            *out.entry(o).or_default() += a * scale;
        }
    }
    let mut dist: Distribution = Occupation::all(fock.photons(), m).into_iter().map(|o| (o, 0.0)).collect();
    for (occ, a) in out {
        let spatial: Vec<usize> = (0..m).map(|j| occ[j * d..(j + 1) * d].iter().sum()).collect();
        *dist.entry(Occupation(spatial)).or_default() += a.norm_sqr();
    }
    Ok(dist)
}

/// Applies `net` to the spatial label of every internal index and returns the
/// probability of every spatial occupation.
pub fn evolve_and_measure(fock: &FockState, net: &Network) -> Result<Distribution> {
    evolve_with(fock, |_| net)
}

/// Polarisation-dependent network: vertical indices see `net_v`, the rest `net_h`.
pub fn evolve_and_measure_polarized(
    fock: &FockState,
    vertical: &[bool],
    net_h: &Network,
    net_v: &Network,
) -> Result<Distribution> {
    if vertical.len() != fock.internal_dim {
        return Err(Error::domain("polarisation flags do not match the internal basis"));
    }
    evolve_with(fock, |k| if vertical[k] { net_v } else { net_h })
}

/// Distribution for mixed photons, as the convex combination over the
/// eigen-decompositions of every density matrix.
pub fn mixed_distribution(
    densities: &[&InternalDensity],
    input_modes: &[usize],
    net: &Network,
) -> Result<Distribution> {
    let mut components: Vec<Vec<(f64, DVector<C64>)>> = Vec::new();
    for rho in densities {
        let eig = rho.matrix().clone().symmetric_eigen();
        let parts: Vec<_> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 1e-14)
            .map(|(i, &w)| (w, eig.eigenvectors.column(i).into_owned()))
            .collect();
        components.push(parts);
    }
    let mut total = Distribution::new();
    let mut choice = vec![0usize; components.len()];
    loop {
        let weight: f64 = choice.iter().zip(&components).map(|(&c, p)| p[c].0).product();
        let vectors: Vec<_> = choice.iter().zip(&components).map(|(&c, p)| p[c].1.clone()).collect();
        let dist = evolve_and_measure(&expand_vectors(&vectors, input_modes, net.dim())?, net)?;
        for (o, p) in dist {
            *total.entry(o).or_default() += weight * p;
        }
        // odometer over eigencomponents
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(total);
            }
            choice[i] += 1;
            if choice[i] < components[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Outcome of [`oracle_equivalence`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub instances: usize,
    pub events: usize,
    pub max_deviation: f64,
    pub max_normalization_error: f64,
}

/// Random internal state: Gaussian delay, arbitrary polarisation and a random
/// two-dimensional auxiliary label.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R) -> InternalState {
    let pol = PolarizationState::from_angles(
        rng.gen_range(0.0..std::f64::consts::PI),
        rng.gen_range(0.0..std::f64::consts::TAU),
    );
    let a = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
    let aux = vec![
        C64::new(a.cos(), 0.0),
        C64::from_polar(a.sin(), rng.gen_range(0.0..std::f64::consts::TAU)),
    ];
    let temporal = TemporalMode::gaussian(rng.gen_range(-2.0..2.0), 1.0).expect("valid width");
    InternalState::with_aux(temporal, pol, aux).expect("unit aux vector")
}

/// Compares `event_probability` with the oracle on every output occupation of
/// `instances` random three-mode problems with up to `max_photons` photons.
pub fn oracle_equivalence(instances: usize, max_photons: usize, seed: u64) -> Result<ValidationReport> {
    let per: Vec<(usize, f64, f64)> = (0..instances)
        .into_par_iter()
        .map(|i| -> Result<(usize, f64, f64)> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let net = Network::haar_random(3, &mut rng);
            let n = rng.gen_range(1..=max_photons);
            let mut inputs: Vec<usize> = (0..n).map(|_| rng.gen_range(0..3)).collect();
            inputs.sort_unstable();
            // photons sharing an input are identical half of the time
            let mut states: Vec<InternalState> = Vec::with_capacity(n);
            for a in 0..n {
                if a > 0 && inputs[a] == inputs[a - 1] && rng.gen_bool(0.5) {
                    states.push(states[a - 1].clone());
                } else {
                    states.push(random_state(&mut rng));
                }
            }
            let g = gram_matrix(&states)?;
            let dist = evolve_and_measure(&expand_inputs(&states, &inputs, 3)?, &net)?;
            let mut dev: f64 = 0.0;
            for (occ, p) in &dist {
                let spec = EventSpec::new(inputs.clone(), occ.0.clone())?;
                dev = dev.max((event_probability(&net, &spec, &g)? - p).abs());
            }
            let norm = (dist.values().sum::<f64>() - 1.0).abs();
            Ok((dist.len(), dev, norm))
        })
        .collect::<Result<_>>()?;
    Ok(ValidationReport {
        instances,
        events: per.iter().map(|x| x.0).sum(),
        max_deviation: per.iter().map(|x| x.1).fold(0.0, f64::max),
        max_normalization_error: per.iter().map(|x| x.2).fold(0.0, f64::max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interference::{balanced_beamsplitter, balanced_tritter};
    use crate::mixedstate::{build_densities, PurityModel};

    fn occ(v: &[usize]) -> Occupation {
        Occupation(v.to_vec())
    }

    fn h_state(delay: f64) -> InternalState {
        InternalState::gaussian(delay, 1.0, PolarizationState::horizontal()).unwrap()
    }

    #[test]
    fn single_photon_is_one_creation_operator() {
        let f = expand_inputs(&[h_state(0.0)], &[1], 3).unwrap();
        assert_eq!(f.amplitudes().len(), 1);
        assert_eq!(f.amplitude(&[0, 1, 0]), C64::new(1.0, 0.0));
    }

    #[test]
    fn bosonic_normalisation_for_repeated_input() {
        let s = h_state(0.0);
        let f = expand_inputs(&[s.clone(), s], &[0, 0], 2).unwrap();
        assert_eq!(f.amplitudes().len(), 1);
        assert!((f.amplitude(&[2, 0]) - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn static_pi_support_matches_rank() {
        let s3 = 3f64.sqrt() / 2.0;
        let p = |h: f64, v: f64| PolarizationState::new(C64::new(h, 0.0), C64::new(v, 0.0)).unwrap();
        let states = vec![
            InternalState::gaussian(0.0, 1.0, p(1.0, 0.0)).unwrap(),
            InternalState::gaussian(0.0, 1.0, p(0.5, s3)).unwrap(),
            InternalState::gaussian(0.0, 1.0, p(0.5, -s3)).unwrap(),
        ];
        let f = expand_inputs(&states, &[0, 1, 2], 3).unwrap();
        assert_eq!(f.internal_dim(), 2);
        assert!((f.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tritter_identical_and_distinguishable() {
        let t = balanced_tritter();
        let same: Vec<_> = (0..3).map(|_| h_state(0.0)).collect();
        let d = evolve_and_measure(&expand_inputs(&same, &[0, 1, 2], 3).unwrap(), &t).unwrap();
        assert!((d[&occ(&[1, 1, 1])] - 1.0 / 3.0).abs() < 1e-14);
        for o in [[3, 0, 0], [0, 3, 0], [0, 0, 3]] {
            assert!((d[&occ(&o)] - 2.0 / 9.0).abs() < 1e-14);
        }
        for o in [[2, 1, 0], [1, 2, 0], [0, 2, 1], [0, 1, 2], [2, 0, 1], [1, 0, 2]] {
            assert!(d[&occ(&o)].abs() < 1e-14);
        }
        let apart: Vec<_> = (0..3).map(|i| h_state(100.0 * i as f64)).collect();
        let d = evolve_and_measure(&expand_inputs(&apart, &[0, 1, 2], 3).unwrap(), &t).unwrap();
        assert!((d[&occ(&[1, 1, 1])] - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn beamsplitter_hom() {
        let bs = balanced_beamsplitter();
        for r in [0.0, 0.5, 1.0] {
            // two Gaussians with overlap r: exp(-dt^2 / 4) = r
            let dt = if r == 0.0 { 100.0 } else { (-4.0 * f64::ln(r)).sqrt() };
            let states = [h_state(0.0), h_state(dt)];
            let d = evolve_and_measure(&expand_inputs(&states, &[0, 1], 2).unwrap(), &bs).unwrap();
            assert!((d[&occ(&[1, 1])] - (1.0 - r * r) / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_matches_event_probability() {
        let r = oracle_equivalence(60, 4, 7).unwrap();
        assert!(r.max_deviation < 1e-9, "{r:?}");
        assert!(r.max_normalization_error < 1e-10, "{r:?}");
    }

    #[test]
    fn polarized_path_reduces_to_plain() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let net = Network::haar_random(3, &mut rng);
        let states: Vec<_> = (0..3).map(|_| random_state(&mut rng)).collect();
        let plain = evolve_and_measure(&expand_inputs(&states, &[0, 1, 2], 3).unwrap(), &net).unwrap();
        let (f, v) = expand_inputs_polarized(&states, &[0, 1, 2], 3).unwrap();
        let pol = evolve_and_measure_polarized(&f, &v, &net, &net).unwrap();
        for (o, p) in &plain {
            assert!((p - pol[o]).abs() < 1e-12);
        }
    }

    #[test]
    fn polarized_path_splits_networks() {
        // H photon sees the identity, V photon sees a swap
        let id = Network::new(crate::CMatrix::identity(2, 2)).unwrap();
        let one = C64::new(1.0, 0.0);
        let zero = C64::default();
        let swap = Network::new(crate::CMatrix::from_row_slice(2, 2, &[zero, one, one, zero])).unwrap();
        let v = InternalState::gaussian(0.0, 1.0, PolarizationState::vertical()).unwrap();
        let (f, flags) = expand_inputs_polarized(&[v], &[0], 2).unwrap();
        let d = evolve_and_measure_polarized(&f, &flags, &id, &swap).unwrap();
        assert_eq!(d[&occ(&[0, 1])], 1.0);
    }

    #[test]
    fn mixed_distribution_matches_trace_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let net = Network::haar_random(3, &mut rng);
        let states: Vec<_> = (0..3)
            .map(|_| {
                let pol = PolarizationState::from_angles(rng.gen_range(0.0..3.0), rng.gen_range(0.0..6.0));
                InternalState::gaussian(rng.gen_range(-1.0..1.0), 1.0, pol).unwrap()
            })
            .collect();
        let rho = build_densities(&states, 0.8, PurityModel::StatePurity).unwrap();
        let d = mixed_distribution(&[&rho[0], &rho[1], &rho[2]], &[0, 1, 2], &net).unwrap();
        let p = crate::mixedstate::p111_mixed(&net, [&rho[0], &rho[1], &rho[2]]).unwrap();
        assert!((d[&occ(&[1, 1, 1])] - p).abs() < 1e-10);
        assert!((d.values().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn too_many_photons_rejected() {
        let s: Vec<_> = (0..7).map(|_| h_state(0.0)).collect();
        assert!(expand_inputs(&s, &[0; 7], 3).is_err());
    }
}
