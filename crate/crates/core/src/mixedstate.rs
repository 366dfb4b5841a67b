//! Three-photon coincidences for mixed internal states.
//!
//! Each photon's internal state is `rho_i = |psi_i><psi_i| (x) rho_mixed,i`,
//! where the pure factor lives in a shared temporal (x) polarisation basis and
//! the mixed factor lives in an extra space spanned by one mode `|c>` common
//! to all photons and one private mode `|d_i>` per photon:
//! `rho_mixed,i = p |c><c| + (1 - p) |d_i><d_i|`.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interference::{permanent, Network};
use crate::modes::{orthonormal_coefficients, GramMatrix, InternalState};
use crate::tolerance;
use crate::{CMatrix, C64};

/// Density matrix of one photon's internal state in a declared orthonormal
/// basis shared by all photons it is compared with.
#[derive(Debug, Clone, PartialEq)]
pub struct InternalDensity {
    matrix: CMatrix,
}

impl InternalDensity {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let d = matrix.nrows();
        if d == 0 || matrix.ncols() != d {
            return Err(Error::domain("density matrix must be square and nonempty"));
        }
        if (&matrix - matrix.adjoint()).camax() > tolerance::DENSITY {
            return Err(Error::domain("density matrix is not Hermitian"));
        }
        let trace = matrix.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > tolerance::DENSITY {
            return Err(Error::domain(format!("density matrix has trace {trace}")));
        }
        let min_eig = matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -tolerance::DENSITY {
            return Err(Error::domain(format!("density matrix has eigenvalue {min_eig:e}")));
        }
        Ok(InternalDensity { matrix })
    }

    /// Projector onto a unit vector.
    pub fn pure(state: &DVector<C64>) -> Result<Self> {
        InternalDensity::new(state * state.adjoint())
    }

    pub fn basis_dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `Tr(rho^2)`
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// Expansion of three temporal modes over orthonormal modes `tau_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalBasis {
    /// `overlaps[i][j] = <t_i|t_j>`
    pub overlaps: CMatrix,
    /// Row `i` holds `<tau_k|t_i>`; lower-triangular, with columns dropped
    /// when a mode is linearly dependent on the earlier ones.
    pub coefficients: CMatrix,
}

impl TemporalBasis {
    pub fn rank(&self) -> usize {
        self.coefficients.ncols()
    }
}

/// Gram–Schmidt basis in photon order:
///
/// ```text
/// |t1> = |tau1>
/// |t2> = <t1|t2> |tau1> + sqrt(1 - |<t1|t2>|^2) |tau2>
/// |t3> = <t1|t3> |tau1> + alpha |tau2> + sqrt(1 - |alpha|^2 - |<t1|t3>|^2) |tau3>
/// alpha = (<t2|t3> - <t2|t1><t1|t3>) / sqrt(1 - |<t1|t2>|^2)
/// ```
pub fn gram_schmidt_temporal(t_overlaps: &CMatrix) -> Result<TemporalBasis> {
    if t_overlaps.shape() != (3, 3) {
        return Err(Error::domain("temporal overlaps must be 3x3"));
    }
    let g = GramMatrix::new(t_overlaps.clone())?;
    Ok(TemporalBasis {
        overlaps: t_overlaps.clone(),
        coefficients: orthonormal_coefficients(g.entries())?,
    })
}

/// Vectors of `states` in the product basis (temporal Gram–Schmidt modes) (x)
/// `{H, V}` (x) aux.
pub fn pure_coefficients(states: &[InternalState]) -> Result<Vec<DVector<C64>>> {
    let n = states.len();
    let mut t = CMatrix::identity(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let z = states[i].temporal().overlap(states[j].temporal())?;
            t[(i, j)] = z;
            t[(j, i)] = z.conj();
        }
    }
    let temporal = orthonormal_coefficients(GramMatrix::new(t)?.entries())?;
    let aux_dim = states.first().map_or(0, |s| s.aux().len());
    if states.iter().any(|s| s.aux().len() != aux_dim) {
        return Err(Error::UnsupportedModePair("aux dimensions differ".into()));
    }
    let one = [C64::new(1.0, 0.0)];
    Ok(states
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let pol = [s.polarization().h(), s.polarization().v()];
            let aux: &[C64] = if aux_dim == 0 { &one } else { s.aux() };
            let mut v = Vec::with_capacity(temporal.ncols() * 2 * aux.len());
            for k in 0..temporal.ncols() {
                for p in pol {
                    for a in aux {
                        v.push(temporal[(i, k)] * p * a);
                    }
                }
            }
            DVector::from_vec(v)
        })
        .collect())
}

/// How a purity figure maps onto the common-mode weight `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PurityModel {
    /// The figure is `Tr(rho^2)`; `p` solves `p^2 + (1 - p)^2 = purity`.
    #[default]
    StatePurity,
    /// The figure is the common-mode weight `p` itself.
    CommonModeWeight,
}

/// Weight `p` of the common mode for a given purity figure.
pub fn common_mode_weight(purity: f64, model: PurityModel) -> Result<f64> {
    if !(purity > 0.0 && purity <= 1.0) {
        return Err(Error::domain(format!("purity {purity} outside (0, 1]")));
    }
    match model {
        PurityModel::StatePurity => {
            if purity < 0.5 {
                return Err(Error::domain(format!(
                    "purity {purity} below 1/2 is not reachable with a two-mode mixture"
                )));
            }
            Ok(0.5 * (1.0 + (2.0 * purity - 1.0).sqrt()))
        }
        PurityModel::CommonModeWeight => Ok(purity),
    }
}

/// `|psi><psi| (x) (p |c><c| + (1 - p) |d_photon><d_photon|)` with the mixed
/// factor on `1 + photons` modes ordered `c, d_0, d_1, ...`.
pub fn build_density(
    pure: &DVector<C64>,
    photon: usize,
    photons: usize,
    purity: f64,
    model: PurityModel,
) -> Result<InternalDensity> {
    if photon >= photons {
        return Err(Error::domain(format!("photon index {photon} out of {photons}")));
    }
    let p = common_mode_weight(purity, model)?;
    let mut mixed = CMatrix::zeros(photons + 1, photons + 1);
    mixed[(0, 0)] = C64::new(p, 0.0);
    mixed[(photon + 1, photon + 1)] += C64::new(1.0 - p, 0.0);
    let projector = pure * pure.adjoint();
    InternalDensity::new(projector.kronecker(&mixed))
}

/// Densities for every photon in `states`, sharing one basis.
pub fn build_densities(
    states: &[InternalState],
    purity: f64,
    model: PurityModel,
) -> Result<Vec<InternalDensity>> {
    let pure = pure_coefficients(states)?;
    pure.iter()
        .enumerate()
        .map(|(i, v)| build_density(v, i, states.len(), purity, model))
        .collect()
}

/// `P111` for three mixed photons entering inputs 1, 2, 3 of `net`:
///
/// ```text
/// perm(M.*conj M) + Tr(r1 r2) perm(M.*conj M_213) + Tr(r1 r3) perm(M.*conj M_321)
///   + Tr(r2 r3) perm(M.*conj M_132)
///   + 2 Re Tr(r1 r2 r3) Re perm(M.*conj M_231) - 2 Im Tr(r1 r2 r3) Im perm(M.*conj M_231)
/// ```
pub fn p111_mixed(net: &Network, rho: [&InternalDensity; 3]) -> Result<f64> {
    if net.dim() != 3 {
        return Err(Error::domain(format!("network has {} modes, expected 3", net.dim())));
    }
    let d = rho[0].basis_dim();
    if rho.iter().any(|r| r.basis_dim() != d) {
        return Err(Error::domain("density matrices use different bases"));
    }
    let u = net.matrix();
    // photon a enters input a, output slot k is mode k
    let m = CMatrix::from_fn(3, 3, |a, k| u[(k, a)]);
    let h = |rows: [usize; 3]| -> Result<C64> {
        permanent(&CMatrix::from_fn(3, 3, |a, k| m[(a, k)] * m[(rows[a], k)].conj()))
    };
    let (r1, r2, r3) = (rho[0].matrix(), rho[1].matrix(), rho[2].matrix());
    let tr2 = |a: &CMatrix, b: &CMatrix| (a * b).trace().re;
    let tr3 = (r1 * r2 * r3).trace();
    let cyc = h([1, 2, 0])?;
    let raw = h([0, 1, 2])?.re
        + tr2(r1, r2) * h([1, 0, 2])?.re
        + tr2(r1, r3) * h([2, 1, 0])?.re
        + tr2(r2, r3) * h([0, 2, 1])?.re
        + 2.0 * tr3.re * cyc.re
        - 2.0 * tr3.im * cyc.im;
    if !(-tolerance::PROBABILITY_SLACK..=1.0 + tolerance::PROBABILITY_SLACK).contains(&raw) {
        return Err(Error::NumericalInconsistency(format!("P111 = {raw} outside [0, 1]")));
    }
    Ok(raw.clamp(0.0, 1.0))
}
