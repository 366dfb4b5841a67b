use itertools::Itertools;

use super::network::{EventSpec, Network, Occupation};
use super::permanent::permanent;
use crate::error::{Error, Result};
use crate::modes::{triad_product, GramMatrix};
use crate::tolerance;
use crate::{CMatrix, C64};

/// Photon-number cap for the direct double sum, `(6!)^2 = 518400` terms.
pub const DEFAULT_MAX_PHOTONS: usize = 6;

/// Probability of `spec` for photons with Gram matrix `g` through `net`.
pub fn event_probability(net: &Network, spec: &EventSpec, g: &GramMatrix) -> Result<f64> {
    event_probability_with_limit(net, spec, g, DEFAULT_MAX_PHOTONS)
}

/// As [`event_probability`] with an explicit photon-number cap.
pub fn event_probability_with_limit(
    net: &Network,
    spec: &EventSpec,
    g: &GramMatrix,
    max_photons: usize,
) -> Result<f64> {
    let n = check(net, spec, g)?;
    if n > max_photons {
        return Err(Error::SizeLimit { what: "photon count", value: n, limit: max_photons });
    }
    if n == 0 {
        return Ok(1.0);
    }
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let m = transfer_matrix(net, spec);
    let s = g.entries();

    // amplitude products prod_k M[sigma(k)][k]; the rho factor is its conjugate
    let amp: Vec<C64> = perms
        .iter()
        .map(|p| p.iter().enumerate().map(|(k, &a)| m[(a, k)]).product())
        .collect();

    let mut raw = C64::new(0.0, 0.0);
    for (sigma, &a_sigma) in perms.iter().zip(&amp) {
        if a_sigma == C64::new(0.0, 0.0) {
            continue;
        }
        let mut inner = C64::new(0.0, 0.0);
        for (rho, &a_rho) in perms.iter().zip(&amp) {
            if a_rho == C64::new(0.0, 0.0) {
                continue;
            }
            let overlap: C64 = (0..n).map(|k| s[(rho[k], sigma[k])]).product();
            inner += a_rho.conj() * overlap;
        }
        raw += a_sigma * inner;
    }

    let norm = input_norm(spec, g, &perms);
    finish(raw / (norm * spec.output().factorial_product()), spec)
}

/// Three-photon probability from the Hadamard-product expansion
///
/// ```text
/// perm(M.*conj M) + |S12|^2 perm(M.*conj M_213) + |S31|^2 perm(M.*conj M_321)
///   + |S23|^2 perm(M.*conj M_132) + 2 Re{ S21 S32 S13 perm(M.*conj M_231) }
/// ```
///
/// where `M_xyz` has its rows (photons) reordered so that row 1 is old row
/// `x`, and the result is divided by `prod s_j!`. Restricted to three photons
/// in distinct inputs; used as an independent check of the double sum.
pub fn event_probability_hadamard(net: &Network, spec: &EventSpec, g: &GramMatrix) -> Result<f64> {
    let n = check(net, spec, g)?;
    if n != 3 {
        return Err(Error::domain(format!("hadamard expansion needs 3 photons, got {n}")));
    }
    if spec.has_repeated_inputs() {
        return Err(Error::domain("hadamard expansion needs distinct inputs"));
    }
    let m = transfer_matrix(net, spec);
    let term = |rows: [usize; 3]| -> Result<C64> {
        let h = CMatrix::from_fn(3, 3, |a, k| m[(a, k)] * m[(rows[a], k)].conj());
        permanent(&h)
    };
    let r2 = |j: usize, k: usize| g.get(j, k).norm_sqr();
    let raw = term([0, 1, 2])?
        + term([1, 0, 2])? * r2(0, 1)
        + term([2, 1, 0])? * r2(2, 0)
        + term([0, 2, 1])? * r2(1, 2)
        + C64::new(2.0 * (triad_product(g) * term([1, 2, 0])?).re, 0.0);
    finish(raw / spec.output().factorial_product(), spec)
}

/// Probability of every output occupation for photons entering `inputs`.
pub fn output_distribution(
    net: &Network,
    inputs: &[usize],
    g: &GramMatrix,
) -> Result<Vec<(Occupation, f64)>> {
    Occupation::all(inputs.len(), net.dim())
        .into_iter()
        .map(|occ| {
            let spec = EventSpec::new(inputs.to_vec(), occ.0.clone())?;
            Ok((occ, event_probability(net, &spec, g)?))
        })
        .collect()
}

fn check(net: &Network, spec: &EventSpec, g: &GramMatrix) -> Result<usize> {
    spec.check_against(net)?;
    let n = spec.photons();
    if n > 0 && g.n() != n {
        return Err(Error::domain(format!("gram matrix is {}x{} for {n} photons", g.n(), g.n())));
    }
    Ok(n)
}

/// `M[a][k] = U[o_k][i_a]`.
fn transfer_matrix(net: &Network, spec: &EventSpec) -> CMatrix {
    let outs = spec.output().mode_list();
    let ins = spec.input_modes();
    CMatrix::from_fn(ins.len(), outs.len(), |a, k| net.amplitude(outs[k], ins[a]))
}

/// Squared norm of the unnormalised input state: sum over permutations that
/// only exchange photons sharing an input of `prod_a S[a][pi(a)]`.
fn input_norm(spec: &EventSpec, g: &GramMatrix, perms: &[Vec<usize>]) -> f64 {
    if !spec.has_repeated_inputs() {
        return 1.0;
    }
    let ins = spec.input_modes();
    let s = g.entries();
    let norm: C64 = perms
        .iter()
        .filter(|p| p.iter().enumerate().all(|(a, &b)| ins[a] == ins[b]))
        .map(|p| p.iter().enumerate().map(|(a, &b)| s[(a, b)]).product::<C64>())
        .sum();
    norm.re
}

fn finish(raw: C64, spec: &EventSpec) -> Result<f64> {
    if !raw.re.is_finite() || !raw.im.is_finite() {
        return Err(Error::NumericalInconsistency(format!(
            "non-finite probability for occupation {}",
            spec.output()
        )));
    }
    if raw.im.abs() >= tolerance::IMAG_FATAL {
        return Err(Error::NumericalInconsistency(format!(
            "probability of {} has imaginary part {:e}",
            spec.output(),
            raw.im
        )));
    }
    let p = raw.re;
    if p < -tolerance::PROBABILITY_SLACK || p > 1.0 + tolerance::PROBABILITY_SLACK {
        return Err(Error::NumericalInconsistency(format!(
            "probability of {} is {p}, outside [0, 1]",
            spec.output()
        )));
    }
    Ok(p.clamp(0.0, 1.0))
}
