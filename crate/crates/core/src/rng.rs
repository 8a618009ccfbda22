//! Keyed random streams.
//!
//! Every random draw in the crate comes from a ChaCha8 stream selected by
//! `(seed, key)`, where the key is usually an edge index. Draws for one edge
//! never depend on how many draws another edge consumed, so results are
//! independent of evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The stream for `(seed, key)`.
pub fn keyed(seed: u64, key: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(key);
    rng
}

/// Derives an independent seed for repetition `index` of an experiment.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer over the pair
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
