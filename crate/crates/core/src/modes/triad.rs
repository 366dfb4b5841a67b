use std::f64::consts::TAU;

use super::gram::GramMatrix;
use super::temporal::{spectral_overlap, SampledSpectrum};
use crate::error::{Error, Result};
use crate::tolerance;
use crate::C64;

/// Reduces an angle to `[0, 2 pi)`.
pub fn normalize_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Distance between two angles on the circle, in `[0, pi]`.
pub fn angle_distance(a: f64, b: f64) -> f64 {
    let d = normalize_angle(a - b);
    d.min(TAU - d)
}

/// Cyclic overlap product `S21 S32 S13 = conj(S12 S23 S31)` of a
/// three-photon Gram matrix.
///
/// This orientation makes the tritter event probabilities read
/// `P120 = [1 - 2 r12 r23 r31 cos(phi + pi/3)] / 9` with `phi` the argument
/// of this product, and makes the polarisation-rotation preparation yield
/// `phi = 2 arg(sqrt(3) cos 2theta + i sin 2theta)`.
pub fn triad_product(g: &GramMatrix) -> C64 {
    assert_eq!(g.n(), 3, "triad product needs a 3x3 Gram matrix");
    g.get(1, 0) * g.get(2, 1) * g.get(0, 2)
}

/// Triad phase in `[0, 2 pi)` with the default undefined-phase tolerance.
pub fn triad_phase(g: &GramMatrix) -> Result<f64> {
    triad_phase_with_tolerance(g, tolerance::TRIAD_MODULUS)
}

pub fn triad_phase_with_tolerance(g: &GramMatrix, min_modulus: f64) -> Result<f64> {
    if g.n() != 3 {
        return Err(Error::domain(format!("triad phase needs 3 photons, got {}", g.n())));
    }
    let z = triad_product(g);
    if z.norm() <= min_modulus {
        return Err(Error::TriadPhaseUndefined { modulus: z.norm(), tolerance: min_modulus });
    }
    Ok(normalize_angle(z.arg()))
}

/// Triad phases compatible with three states confined to a two-dimensional
/// internal space.
#[derive(Debug, Clone, PartialEq)]
pub enum QubitTriadPhase {
    /// One or two admissible phases in `[0, 2 pi)`, ascending.
    Phases(Vec<f64>),
    /// The moduli admit no qubit realisation; `cos_gamma` is the value that
    /// would have been needed.
    Infeasible { cos_gamma: f64 },
}

impl QubitTriadPhase {
    pub fn phases(&self) -> &[f64] {
        match self {
            QubitTriadPhase::Phases(p) => p,
            QubitTriadPhase::Infeasible { .. } => &[],
        }
    }

    /// Whether `phi` lies within `tol` of an admissible phase.
    pub fn admits(&self, phi: f64, tol: f64) -> bool {
        self.phases().iter().any(|&p| angle_distance(p, phi) <= tol)
    }
}

/// Triad phase fixed by the moduli alone when the three states live in a
/// qubit.
///
/// With `|phi1> = |0>`, `|phi2> = cos a |0> + sin a |1>`,
/// `|phi3> = cos b |0> + e^{i gamma} sin b |1>`, the moduli fix `cos a = r12`,
/// `cos b = r31` and `cos gamma`; both signs of `gamma` are returned.
pub fn qubit_triad_phase(r12: f64, r23: f64, r31: f64) -> Result<QubitTriadPhase> {
    for (name, r) in [("r12", r12), ("r31", r31)] {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::domain(format!("{name} = {r} must lie in (0, 1)")));
        }
    }
    // r23 = 1 is reachable (alpha = beta, gamma = 0)
    if !(r23 > 0.0 && r23 <= 1.0 + 1e-12) {
        return Err(Error::domain(format!("r23 = {r23} must lie in (0, 1]")));
    }
    let (ca, cb) = (r12, r31);
    let (sa, sb) = ((1.0 - ca * ca).sqrt(), (1.0 - cb * cb).sqrt());
    let c = ca * cb;
    let s = sa * sb;
    let cos_gamma = (r23 * r23 - c * c - s * s) / (2.0 * c * s);
    if cos_gamma.abs() > 1.0 + 1e-12 {
        return Ok(QubitTriadPhase::Infeasible { cos_gamma });
    }
    let gamma = if cos_gamma >= 1.0 - 1e-12 {
        0.0
    } else if cos_gamma <= -1.0 + 1e-12 {
        std::f64::consts::PI
    } else {
        cos_gamma.acos()
    };
    // arg of S21 S32 S13 = cos a cos b (c + e^{+-i gamma} s)
    let mut phases: Vec<f64> = [gamma, -gamma]
        .iter()
        .map(|&g| normalize_angle((C64::new(c, 0.0) + C64::from_polar(s, g)).arg()))
        .collect();
    phases.sort_by(f64::total_cmp);
    phases.dedup_by(|a, b| angle_distance(*a, *b) < 1e-12);
    Ok(QubitTriadPhase::Phases(phases))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DelayInvarianceReport {
    /// Triad phase of each delay triple.
    pub phases: Vec<f64>,
    /// Largest circular distance from the first triple's phase.
    pub max_phase_deviation: f64,
}

/// Triad phase of three photons sharing `spec` with delays `(t1, t2, t3)`,
/// evaluated for every triple.
pub fn delay_invariance_test(
    spec: &SampledSpectrum,
    delays: &[(f64, f64, f64)],
) -> Result<DelayInvarianceReport> {
    if delays.len() < 2 {
        return Err(Error::domain("need at least two delay triples"));
    }
    let phases = delays
        .iter()
        .map(|&(t1, t2, t3)| {
            // <t_j|t_k> = zeta(t_k - t_j)
            let s21 = spectral_overlap(spec, t1 - t2)?;
            let s32 = spectral_overlap(spec, t2 - t3)?;
            let s13 = spectral_overlap(spec, t3 - t1)?;
            let z = s21 * s32 * s13;
            if z.norm() <= tolerance::TRIAD_MODULUS {
                return Err(Error::TriadPhaseUndefined {
                    modulus: z.norm(),
                    tolerance: tolerance::TRIAD_MODULUS,
                });
            }
            Ok(normalize_angle(z.arg()))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_phase_deviation = phases
        .iter()
        .map(|&p| angle_distance(p, phases[0]))
        .fold(0.0, f64::max);
    Ok(DelayInvarianceReport { phases, max_phase_deviation })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_6, PI};

    use super::*;
    use crate::modes::{gram_matrix, InternalState, PolarizationState};

    fn pol(h: C64, v: C64) -> PolarizationState {
        PolarizationState::new(h, v).unwrap()
    }

    #[test]
    fn phase_reduced_to_half_open_interval() {
        assert_eq!(normalize_angle(TAU), 0.0);
        assert_eq!(normalize_angle(-1e-17), 0.0);
        assert!((normalize_angle(-PI / 2.0) - 1.5 * PI).abs() < 1e-15);
        assert!((angle_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn static_recipes() {
        let s3 = 3.0f64.sqrt();
        let h = PolarizationState::horizontal();
        let all_h: Vec<_> = [0.0, 0.4, 1.1]
            .iter()
            .map(|&t| InternalState::gaussian(t, 1.0, h).unwrap())
            .collect();
        assert_eq!(triad_phase(&gram_matrix(&all_h).unwrap()).unwrap(), 0.0);

        let pols = [
            h,
            pol(C64::new(0.5, 0.0), C64::new(s3 / 2.0, 0.0)),
            pol(C64::new(0.5, 0.0), C64::new(-s3 / 2.0, 0.0)),
        ];
        let states: Vec<_> =
            pols.iter().map(|&p| InternalState::gaussian(0.0, 1.0, p).unwrap()).collect();
        let g = gram_matrix(&states).unwrap();
        assert!((triad_phase(&g).unwrap() - PI).abs() < 1e-12);
        let (a, b, c) = g.moduli();
        assert!((a - 0.5).abs() < 1e-15 && (b - 0.5).abs() < 1e-15 && (c - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rotated_polarization_gives_pi_over_three() {
        let theta = PI / 8.0;
        let s3 = 3.0f64.sqrt();
        let pols = [
            pol(C64::new((2.0 * theta).cos(), 0.0), C64::new(0.0, (2.0 * theta).sin())),
            pol(C64::new(s3 / 2.0, 0.0), C64::new(0.5, 0.0)),
            pol(C64::new(s3 / 2.0, 0.0), C64::new(-0.5, 0.0)),
        ];
        let states: Vec<_> =
            pols.iter().map(|&p| InternalState::gaussian(0.0, 1.0, p).unwrap()).collect();
        let phi = triad_phase(&gram_matrix(&states).unwrap()).unwrap();
        assert!((phi - FRAC_PI_3).abs() < 1e-12, "phi = {phi}");
    }

    #[test]
    fn undefined_for_orthogonal_photons() {
        let err = triad_phase(&GramMatrix::identity(3)).unwrap_err();
        assert!(matches!(err, Error::TriadPhaseUndefined { .. }));
        assert!(triad_phase(&GramMatrix::identity(2)).is_err());
    }

    #[test]
    fn qubit_examples() {
        assert_eq!(
            qubit_triad_phase(0.5, 0.5, 0.5).unwrap(),
            QubitTriadPhase::Phases(vec![PI])
        );
        let a = FRAC_PI_6;
        let r23 = a.cos() * a.cos() + a.sin() * a.sin();
        let r = qubit_triad_phase(a.cos(), r23, a.cos()).unwrap();
        assert_eq!(r.phases().len(), 1);
        assert!(angle_distance(r.phases()[0], 0.0) < 1e-6);
        assert!(matches!(
            qubit_triad_phase(0.9, 0.05, 0.9).unwrap(),
            QubitTriadPhase::Infeasible { cos_gamma } if cos_gamma < -1.0
        ));
        assert!(qubit_triad_phase(1.0, 0.5, 0.5).is_err());
        assert!(qubit_triad_phase(0.5, 0.0, 0.5).is_err());
        assert!(qubit_triad_phase(0.5, 1.1, 0.5).is_err());
    }

    #[test]
    fn qubit_generic_case_has_two_branches() {
        let r = qubit_triad_phase(0.7, 0.5, 0.6).unwrap();
        let p = r.phases();
        assert_eq!(p.len(), 2);
        assert!((normalize_angle(p[0] + p[1])).min(TAU - normalize_angle(p[0] + p[1])) < 1e-12);
    }

    #[test]
    fn symmetric_spectrum_delay_invariant() {
        let spec = SampledSpectrum::gaussian(1.0, 0.0, 2001, 12.0).unwrap();
        let delays = [(0.0, 0.3, -0.2), (0.5, -0.4, 0.1), (1.0, 0.0, 0.7)];
        let r = delay_invariance_test(&spec, &delays).unwrap();
        assert!(r.max_phase_deviation < 1e-6);
        assert!(angle_distance(r.phases[0], 0.0) < 1e-9);
    }

    #[test]
    fn needs_two_triples() {
        let spec = SampledSpectrum::gaussian(1.0, 0.0, 101, 8.0).unwrap();
        assert!(delay_invariance_test(&spec, &[(0.0, 0.0, 0.0)]).is_err());
    }

    #[test]
    fn asymmetric_spectrum_depends_on_delay() {
        let spec = SampledSpectrum::from_fn(-8.0, 8.0, 4001, |w| {
            (-(w - 1.5).powi(2)).exp() + 0.3 * (-(w + 1.0).powi(2) / 0.2).exp()
        })
        .unwrap();
        let r = delay_invariance_test(&spec, &[(0.0, 0.3, 0.9), (0.0, 1.1, -0.7), (0.2, -0.9, 1.3)]).unwrap();
        assert!(r.max_phase_deviation > 0.01, "{r:?}");
    }

    // A symmetric spectrum whose overlap changes sign keeps the cyclic product
    // real but not nonnegative: the phase flips between 0 and pi with delay.
    #[test]
    fn symmetric_two_peak_spectrum_flips_sign() {
        let spec = SampledSpectrum::from_fn(-8.0, 8.0, 4001, |w| {
            (-(w - 1.5).powi(2)).exp() + (-(w + 1.5).powi(2)).exp()
        })
        .unwrap();
        let r = delay_invariance_test(&spec, &[(0.0, 0.2, 0.4), (0.0, 1.2, 2.4)]).unwrap();
        for p in &r.phases {
            assert!(angle_distance(*p, 0.0) < 1e-9 || angle_distance(*p, PI) < 1e-9);
        }
        assert!((r.max_phase_deviation - PI).abs() < 1e-9, "{r:?}");
    }
}
