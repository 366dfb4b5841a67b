use serde::{Deserialize, Serialize};

use super::state::{overlap, InternalState};
use crate::error::{Error, Result};
use crate::tolerance;
use crate::{CMatrix, C64};

/// Matrix of pairwise overlaps `S[j][k] = <phi_j|phi_k>`.
///
/// Always Hermitian and positive semi-definite with unit diagonal; the
/// constructors check this.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CMatrix", into = "CMatrix")]
pub struct GramMatrix {
    entries: CMatrix,
}

impl TryFrom<CMatrix> for GramMatrix {
    type Error = Error;
    fn try_from(m: CMatrix) -> Result<Self> {
        GramMatrix::new(m)
    }
}

impl From<GramMatrix> for CMatrix {
    fn from(g: GramMatrix) -> Self {
        g.entries
    }
}

impl GramMatrix {
    pub fn new(entries: CMatrix) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(Error::domain(format!(
                "gram matrix must be square and nonempty, got {}x{}",
                n,
                entries.ncols()
            )));
        }
        for j in 0..n {
            if (entries[(j, j)] - C64::new(1.0, 0.0)).norm() > tolerance::NORM {
                return Err(Error::domain(format!(
                    "gram diagonal entry {j} is {}, expected 1",
                    entries[(j, j)]
                )));
            }
            for k in 0..j {
                if (entries[(j, k)] - entries[(k, j)].conj()).norm() > tolerance::NORM {
                    return Err(Error::domain(format!("gram matrix not Hermitian at ({j}, {k})")));
                }
            }
        }
        let min_eig = entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < tolerance::PSD_EIGENVALUE {
            return Err(Error::domain(format!(
                "gram matrix not positive semi-definite (eigenvalue {min_eig:e})"
            )));
        }
        Ok(GramMatrix { entries })
    }

    pub fn identity(n: usize) -> Self {
        GramMatrix { entries: CMatrix::identity(n, n) }
    }

    pub fn all_ones(n: usize) -> Self {
        GramMatrix { entries: CMatrix::from_element(n, n, C64::new(1.0, 0.0)) }
    }

    /// Three-photon Gram matrix with moduli `r12, r23, r31` whose triad phase
    /// (see [`super::triad_phase`]) equals `phi`. Fails if the combination is
    /// not positive semi-definite.
    pub fn from_moduli_and_phase(r12: f64, r23: f64, r31: f64, phi: f64) -> Result<Self> {
        let one = C64::new(1.0, 0.0);
        let s12 = C64::new(r12, 0.0);
        let s23 = C64::new(r23, 0.0);
        // the phase sits on S13 so that arg(S21 S32 S13) = phi
        let s13 = C64::from_polar(r31, phi);
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[one, s12, s13, s12.conj(), one, s23, s13.conj(), s23.conj(), one],
        );
        GramMatrix::new(m)
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, j: usize, k: usize) -> C64 {
        self.entries[(j, k)]
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// `|S12|, |S23|, |S31|` of a three-photon matrix.
    pub fn moduli(&self) -> (f64, f64, f64) {
        (self.get(0, 1).norm(), self.get(1, 2).norm(), self.get(2, 0).norm())
    }

    /// Gram matrix of the photons selected by `indices`, in that order.
    pub fn submatrix(&self, indices: &[usize]) -> GramMatrix {
        let k = indices.len();
        GramMatrix {
            entries: CMatrix::from_fn(k, k, |a, b| self.entries[(indices[a], indices[b])]),
        }
    }

    /// `D S D^dagger` with `D = diag(exp(i chi_j))`, i.e. a global phase on each photon.
    pub fn rephased(&self, chi: &[f64]) -> GramMatrix {
        let n = self.n();
        assert_eq!(chi.len(), n, "one phase per photon");
        GramMatrix {
            entries: CMatrix::from_fn(n, n, |j, k| {
                self.entries[(j, k)] * C64::from_polar(1.0, chi[k] - chi[j])
            }),
        }
    }

    /// Block-diagonal combination: photons of `self` and `other` are mutually
    /// orthogonal.
    pub fn direct_sum(&self, other: &GramMatrix) -> GramMatrix {
        let (a, b) = (self.n(), other.n());
        let mut m = CMatrix::zeros(a + b, a + b);
        m.view_mut((0, 0), (a, a)).copy_from(&self.entries);
        m.view_mut((a, a), (b, b)).copy_from(&other.entries);
        GramMatrix { entries: m }
    }
}

/// Gram matrix of `states`.
pub fn gram_matrix(states: &[InternalState]) -> Result<GramMatrix> {
    let n = states.len();
    if n == 0 {
        return Err(Error::domain("need at least one state"));
    }
    let mut m = CMatrix::identity(n, n);
    for j in 0..n {
        for k in (j + 1)..n {
            let z = overlap(&states[j], &states[k])?;
            m[(j, k)] = z;
            m[(k, j)] = z.conj();
        }
        // exact unit diagonal even for sampled spectra
        m[(j, j)] = C64::new(1.0, 0.0);
    }
    GramMatrix::new(m)
}

/// Expansion coefficients of vectors over an orthonormal basis built by
/// Gram–Schmidt in order, from their Gram matrix alone.
///
/// Returns `c` (rows = vectors, columns = basis) with
/// `S[i][j] = sum_k conj(c[i][k]) c[j][k]`. Row `i` has support only on the
/// first few columns (lower-triangular up to dropped columns). Linearly
/// dependent vectors do not open a new basis direction.
pub fn orthonormal_coefficients(gram: &CMatrix) -> Result<CMatrix> {
    let n = gram.nrows();
    if gram.ncols() != n {
        return Err(Error::domain("gram matrix must be square"));
    }
    // Cholesky factor S = L L^dagger with dependent columns dropped; c = conj(L).
    let mut l = CMatrix::zeros(n, n);
    let mut pivots: Vec<usize> = Vec::new();
    for j in 0..n {
        for (k, &p) in pivots.iter().enumerate() {
            if p >= j {
                break;
            }
            let mut acc = gram[(j, p)];
            for q in 0..k {
                acc -= l[(j, q)] * l[(p, q)].conj();
            }
            l[(j, k)] = acc / l[(p, k)];
        }
        let used = pivots.len();
        let residual = gram[(j, j)].re - (0..used).map(|q| l[(j, q)].norm_sqr()).sum::<f64>();
        if residual > tolerance::GRAM_SCHMIDT_PIVOT {
            l[(j, used)] = C64::new(residual.sqrt(), 0.0);
            pivots.push(j);
        } else if residual < tolerance::PSD_EIGENVALUE {
            return Err(Error::domain(format!(
                "gram matrix is not positive semi-definite (pivot {residual:e} at row {j})"
            )));
        }
    }
    let rank = pivots.len();
    Ok(l.columns(0, rank).map(|z| z.conj()))
}
