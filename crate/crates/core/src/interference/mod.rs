//! Exact output statistics of partially distinguishable photons.
//!
//! The central quantity is the multidimensional permanent
//!
//! ```text
//! P(s) = N^-1 (prod_j s_j!)^-1 sum_{sigma, rho in S_n}
//!        prod_k M[sigma(k)][k] conj(M[rho(k)][k]) S[rho(k)][sigma(k)]
//! ```
//!
//! with `M[a][k] = U[o_k][i_a]` (photon `a` entering input `i_a`, output slot
//! `k` in mode `o_k`, modes repeated according to the occupation `s`) and `N`
//! the squared norm of the input state, which is 1 unless several photons
//! share an input.

mod network;
mod permanent;
mod probability;
mod tritter;

pub use network::{balanced_beamsplitter, balanced_tritter, EventSpec, Network, Occupation};
pub use permanent::{permanent, permanent_naive, permanent_ryser};
pub use probability::{
    event_probability, event_probability_hadamard, event_probability_with_limit,
    output_distribution, DEFAULT_MAX_PHOTONS,
};
pub use tritter::{
    beamsplitter_p11, tritter_bunched, tritter_p111, two_photon_marginals_tritter,
    TritterBunched, TwoPhotonMarginals,
};
