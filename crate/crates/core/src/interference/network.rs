use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance;
use crate::{CMatrix, C64};

/// Passive linear network on `m` spatial modes. `matrix[(out, in)]` is the
/// amplitude for a photon entering `in` to leave through `out`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CMatrix", into = "CMatrix")]
pub struct Network {
    matrix: CMatrix,
}

impl TryFrom<CMatrix> for Network {
    type Error = Error;
    fn try_from(m: CMatrix) -> Result<Self> {
        Network::new(m)
    }
}

impl From<Network> for CMatrix {
    fn from(n: Network) -> Self {
        n.matrix
    }
}

impl Network {
    /// Checks squareness and unitarity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let m = matrix.nrows();
        if m == 0 || matrix.ncols() != m {
            return Err(Error::domain(format!(
                "network matrix must be square, got {}x{}",
                m,
                matrix.ncols()
            )));
        }
        let defect = (&matrix * matrix.adjoint() - CMatrix::identity(m, m)).camax();
        if defect > tolerance::UNITARY {
            return Err(Error::domain(format!("network matrix is not unitary (defect {defect:e})")));
        }
        Ok(Network { matrix })
    }

    /// Haar-random unitary via QR of a complex Ginibre matrix.
    pub fn haar_random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Network {
        let z = CMatrix::from_fn(m, m, |_, _| {
            C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)) / 2.0f64.sqrt()
        });
        let qr = z.qr();
        let (mut q, r) = (qr.q(), qr.r());
        for j in 0..m {
            let d = r[(j, j)];
            let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
            for i in 0..m {
                q[(i, j)] *= phase;
            }
        }
        Network { matrix: q }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn amplitude(&self, out: usize, input: usize) -> C64 {
        self.matrix[(out, input)]
    }
}

/// Balanced tritter `(1/sqrt 3) [[1,1,1],[1,z^2,z],[1,z,z^2]]`, `z = exp(2 pi i / 3)`.
pub fn balanced_tritter() -> Network {
    let z = C64::from_polar(1.0, 2.0 * PI / 3.0);
    let z2 = C64::from_polar(1.0, 4.0 * PI / 3.0);
    let one = C64::new(1.0, 0.0);
    let s = 1.0 / 3.0f64.sqrt();
    let m = CMatrix::from_row_slice(3, 3, &[one, one, one, one, z2, z, one, z, z2]) * C64::new(s, 0.0);
    Network { matrix: m }
}

/// 50:50 beamsplitter `(1/sqrt 2) [[1, 1], [1, -1]]`.
pub fn balanced_beamsplitter() -> Network {
    let s = C64::new(1.0 / 2.0f64.sqrt(), 0.0);
    Network { matrix: CMatrix::from_row_slice(2, 2, &[s, s, s, -s]) }
}

/// Photon count per output mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Occupation(pub Vec<usize>);

impl Occupation {
    pub fn photons(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    /// `prod_j s_j!`
    pub fn factorial_product(&self) -> f64 {
        self.0
            .iter()
            .map(|&s| (1..=s).map(|k| k as f64).product::<f64>())
            .product()
    }

    /// Output mode of each photon slot, mode `j` repeated `s_j` times.
    pub fn mode_list(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(j, &s)| std::iter::repeat(j).take(s))
            .collect()
    }

    /// Every way of placing `photons` in `modes`, in descending lexicographic
    /// order (`(n,0,..)` first).
    pub fn all(photons: usize, modes: usize) -> Vec<Occupation> {
        fn rec(left: usize, modes: usize, prefix: &mut Vec<usize>, out: &mut Vec<Occupation>) {
            if prefix.len() + 1 == modes {
                prefix.push(left);
                out.push(Occupation(prefix.clone()));
                prefix.pop();
                return;
            }
            for k in (0..=left).rev() {
                prefix.push(k);
                rec(left - k, modes, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if modes == 0 {
            if photons == 0 {
                out.push(Occupation(Vec::new()));
            }
            return out;
        }
        rec(photons, modes, &mut Vec::with_capacity(modes), &mut out);
        out
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// One photon per entry of `input_modes` (photon `a` carries internal state
/// `a` of the Gram matrix) and the output occupation whose probability is
/// wanted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventSpec {
    input_modes: Vec<usize>,
    output: Occupation,
}

impl EventSpec {
    /// Photon counts of inputs and outputs must agree. Repeated input modes
    /// are allowed.
    pub fn new(input_modes: Vec<usize>, output: Vec<usize>) -> Result<Self> {
        let output = Occupation(output);
        if output.photons() != input_modes.len() {
            return Err(Error::domain(format!(
                "{} input photons but output occupation {} holds {}",
                input_modes.len(),
                output,
                output.photons()
            )));
        }
        Ok(EventSpec { input_modes, output })
    }

    pub fn input_modes(&self) -> &[usize] {
        &self.input_modes
    }

    pub fn output(&self) -> &Occupation {
        &self.output
    }

    pub fn photons(&self) -> usize {
        self.input_modes.len()
    }

    pub fn has_repeated_inputs(&self) -> bool {
        let mut seen = self.input_modes.clone();
        seen.sort_unstable();
        seen.windows(2).any(|w| w[0] == w[1])
    }

    pub(crate) fn check_against(&self, net: &Network) -> Result<()> {
        let m = net.dim();
        if self.output.modes() != m {
            return Err(Error::domain(format!(
                "occupation {} has {} modes, network has {m}",
                self.output,
                self.output.modes()
            )));
        }
        if let Some(&bad) = self.input_modes.iter().find(|&&i| i >= m) {
            return Err(Error::domain(format!("input mode {bad} outside network of {m} modes")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn tritter_is_unitary_and_balanced() {
        let t = balanced_tritter();
        let defect = (t.matrix() * t.matrix().adjoint() - CMatrix::identity(3, 3)).camax();
        assert!(defect < 1e-14);
        for z in t.matrix().iter() {
            assert!((z.norm_sqr() - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn tritter_matches_explicit_phases() {
        let t = balanced_tritter();
        let e = |x: f64| C64::from_polar(1.0 / 3.0f64.sqrt(), x);
        let expect = [
            [e(0.0), e(0.0), e(0.0)],
            [e(0.0), e(4.0 * PI / 3.0), e(2.0 * PI / 3.0)],
            [e(0.0), e(2.0 * PI / 3.0), e(4.0 * PI / 3.0)],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!((t.amplitude(i, j) - expect[i][j]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn haar_random_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in 1..6 {
            let n = Network::haar_random(m, &mut rng);
            assert!(Network::new(n.matrix().clone()).is_ok());
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let m = CMatrix::from_element(2, 2, C64::new(1.0, 0.0));
        assert!(Network::new(m).is_err());
    }

    #[test]
    fn occupations_enumerated() {
        let all = Occupation::all(3, 3);
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], Occupation(vec![3, 0, 0]));
        assert_eq!(all.last().unwrap(), &Occupation(vec![0, 0, 3]));
        assert_eq!(Occupation(vec![1, 2, 0]).mode_list(), vec![0, 1, 1]);
        assert_eq!(Occupation(vec![2, 0, 3]).factorial_product(), 12.0);
        assert_eq!(Occupation(vec![1, 2, 0]).to_string(), "120");
    }

    #[test]
    fn event_spec_checks_photon_count() {
        assert!(EventSpec::new(vec![0, 1], vec![1, 1, 1]).is_err());
        let s = EventSpec::new(vec![0, 0], vec![1, 1]).unwrap();
        assert!(s.has_repeated_inputs());
    }
}
