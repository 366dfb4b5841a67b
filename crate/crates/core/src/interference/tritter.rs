//! Closed forms for the balanced tritter and beamsplitter.

use std::f64::consts::FRAC_PI_3;

use super::network::{balanced_tritter, EventSpec};
use super::probability::event_probability;
use crate::error::{Error, Result};
use crate::modes::GramMatrix;

fn check_moduli(r: &[f64]) -> Result<()> {
    match r.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        Some(bad) => Err(Error::domain(format!("overlap modulus {bad} outside [0, 1]"))),
        None => Ok(()),
    }
}

/// `P111 = [2 + 4 r12 r23 r31 cos(phi) - r12^2 - r23^2 - r31^2] / 9`.
pub fn tritter_p111(r12: f64, r23: f64, r31: f64, phi: f64) -> Result<f64> {
    check_moduli(&[r12, r23, r31])?;
    let triple = r12 * r23 * r31;
    Ok((2.0 + 4.0 * triple * phi.cos() - r12 * r12 - r23 * r23 - r31 * r31) / 9.0)
}

/// Bunched-event probabilities of the balanced tritter, one representative
/// per symmetry class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TritterBunched {
    /// `P300 = P030 = P003`
    pub p300: f64,
    /// `P120 = P012 = P201`
    pub p120: f64,
    /// `P021 = P210 = P102`
    pub p021: f64,
}

pub fn tritter_bunched(r12: f64, r23: f64, r31: f64, phi: f64) -> Result<TritterBunched> {
    check_moduli(&[r12, r23, r31])?;
    let triple = r12 * r23 * r31;
    let squares = r12 * r12 + r23 * r23 + r31 * r31;
    Ok(TritterBunched {
        p300: (1.0 + squares + 2.0 * triple * phi.cos()) / 27.0,
        p120: (1.0 - 2.0 * triple * (phi + FRAC_PI_3).cos()) / 9.0,
        p021: (1.0 - 2.0 * triple * (phi - FRAC_PI_3).cos()) / 9.0,
    })
}

/// Coincidences of two photons sent into two tritter inputs, the third
/// input empty. `p110` uses photons 1 and 2 in inputs 1 and 2 and counts one
/// photon in each of outputs 1 and 2; likewise for the others.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPhotonMarginals {
    pub p011: f64,
    pub p101: f64,
    pub p110: f64,
}

/// Evaluated with the general permanent; equals `(2 - r_ij^2) / 9`.
pub fn two_photon_marginals_tritter(g: &GramMatrix) -> Result<TwoPhotonMarginals> {
    if g.n() != 3 {
        return Err(Error::domain(format!("need a 3x3 Gram matrix, got {}", g.n())));
    }
    let tritter = balanced_tritter();
    let pair = |i: usize, j: usize| -> Result<f64> {
        let mut out = vec![0; 3];
        out[i] = 1;
        out[j] = 1;
        let spec = EventSpec::new(vec![i, j], out)?;
        event_probability(&tritter, &spec, &g.submatrix(&[i, j]))
    };
    Ok(TwoPhotonMarginals { p011: pair(1, 2)?, p101: pair(0, 2)?, p110: pair(0, 1)? })
}

/// Hong–Ou–Mandel coincidence of a balanced beamsplitter, `(1 - r^2) / 2`.
pub fn beamsplitter_p11(r: f64) -> Result<f64> {
    check_moduli(&[r])?;
    Ok(0.5 * (1.0 - r * r))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn p111_examples() {
        assert!((tritter_p111(1.0, 1.0, 1.0, 0.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert!((tritter_p111(0.0, 0.0, 0.0, 1.3).unwrap() - 2.0 / 9.0).abs() < 1e-15);
        assert!((tritter_p111(0.5, 0.5, 0.5, PI).unwrap() - 1.0 / 12.0).abs() < 1e-15);
        assert!(tritter_p111(1.1, 0.5, 0.5, 0.0).is_err());
        assert!(tritter_p111(0.5, -0.1, 0.5, 0.0).is_err());
    }

    #[test]
    fn bunched_examples() {
        let b = tritter_bunched(1.0, 1.0, 1.0, 0.0).unwrap();
        assert!((b.p300 - 2.0 / 9.0).abs() < 1e-15);
        assert!(b.p120.abs() < 1e-15 && b.p021.abs() < 1e-15);
        let b = tritter_bunched(0.0, 0.0, 0.0, 0.0).unwrap();
        assert!((b.p300 - 1.0 / 27.0).abs() < 1e-15);
        assert!((b.p120 - 1.0 / 9.0).abs() < 1e-15 && (b.p021 - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn ten_events_sum_to_one() {
        for &(r12, r23, r31, phi) in &[(0.3, 0.7, 0.2, 1.0), (0.9, 0.9, 0.95, 5.5), (1.0, 0.0, 0.4, 2.0)] {
            let p = tritter_p111(r12, r23, r31, phi).unwrap();
            let b = tritter_bunched(r12, r23, r31, phi).unwrap();
            assert!((p + 3.0 * (b.p300 + b.p120 + b.p021) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn marginals() {
        let m = two_photon_marginals_tritter(&GramMatrix::all_ones(3)).unwrap();
        assert!((m.p011 - 1.0 / 9.0).abs() < 1e-15 && (m.p110 - 1.0 / 9.0).abs() < 1e-15);
        let m = two_photon_marginals_tritter(&GramMatrix::identity(3)).unwrap();
        assert!((m.p101 - 2.0 / 9.0).abs() < 1e-15);
        let g = GramMatrix::from_moduli_and_phase(0.5, 0.5, 0.5, 1.0).unwrap();
        let m = two_photon_marginals_tritter(&g).unwrap();
        for p in [m.p011, m.p101, m.p110] {
            assert!((p - 7.0 / 36.0).abs() < 1e-15);
        }
    }

    #[test]
    fn beamsplitter_closed_form() {
        assert_eq!(beamsplitter_p11(0.0).unwrap(), 0.5);
        assert_eq!(beamsplitter_p11(1.0).unwrap(), 0.0);
        assert!(beamsplitter_p11(2.0).is_err());
    }
}
