//! Seeded deterministic generators.
//!
//! Every stochastic step in the crate (sampling, bootstrap, feature
//! subsampling, shuffles, permutation Shapley) draws from ChaCha8 seeded with
//! an explicit `u64`. Child seeds are derived with SplitMix64 so that
//! independent units of work never share a stream.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer applied to `seed ^ stream`-mixed input.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
