//! Seed derivation.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] built from a
//! named `u64` seed. Child seeds are derived from `(parent, index)` with a
//! SplitMix64 finalizer, so the seed of member `i` never depends on how many
//! draws other members made or on the order in which they ran.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// Stream tags separating the uses of one seed.
pub mod stream {
    pub const BOOTSTRAP: u64 = 1;
    pub const INIT: u64 = 2;
    pub const HOLDOUT: u64 = 3;
    pub const SELECT: u64 = 4;
    pub const SPLIT: u64 = 5;
    pub const DRAW: u64 = 6;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives the seed of child `index` from `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ splitmix64(index.wrapping_add(0x632b_e59b_d9b4_e019)))
}

/// A generator for `seed`, on the independent ChaCha stream `stream`.
pub fn rng(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
