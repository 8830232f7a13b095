//! Shared inputs for the benchmarks in `benches/`.

use rfd_core::{
    derive_coding_capacities, generate, CodingNetwork, FeasibilityClass, GenParams, Network, Structure,
};

/// Ladder sizes used by the scaling benchmarks.
pub const SIZES: [usize; 4] = [1000, 2000, 4000, 8000];

/// A NETWORK_CODING ladder with `n` nodes, seeded by its size.
pub fn ladder(n: usize) -> Network {
    generate(&GenParams::new(
        Structure::Ladder,
        n,
        FeasibilityClass::NetworkCoding,
        n as u64,
    ))
    .expect("ladders exist for every size")
}

pub fn ladder_coding(n: usize) -> CodingNetwork {
    derive_coding_capacities(&ladder(n))
}
