//! Shared inputs for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use triad_core::oracle::random_state;
use triad_core::{CMatrix, GramMatrix, InternalState, Network, C64};

/// Seeded random complex matrix with entries in the unit square.
pub fn random_matrix(n: usize, seed: u64) -> CMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CMatrix::from_fn(n, n, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// Haar-random `m`-mode network plus the Gram matrix of `n` random photons.
pub fn random_problem(m: usize, n: usize, seed: u64) -> (Network, GramMatrix) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let net = Network::haar_random(m, &mut rng);
    let states: Vec<InternalState> = (0..n).map(|_| random_state(&mut rng)).collect();
    let g = triad_core::modes::gram_matrix(&states).expect("valid states");
    (net, g)
}
