//! Seed derivation for independent, order-free random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The RNG used everywhere in the crate.
pub type Rng = ChaCha8Rng;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a stream seed from a master seed and a path of indices
/// (e.g. trial index, probe index). Distinct paths give statistically
/// independent seeds and the result does not depend on evaluation order.
pub fn mix64(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(master), |acc, &k| splitmix64(acc ^ splitmix64(k.wrapping_add(GOLDEN))))
}

pub fn rng(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Salts separating the sub-streams of one trial.
pub mod salt {
    pub const GRAPH: u64 = 1;
    pub const PALETTE: u64 = 2;
    pub const LISTS: u64 = 3;
    pub const TENTATIVE: u64 = 4;
    pub const COMPLETION: u64 = 5;
    pub const DENSE: u64 = 6;
    pub const SOLVER: u64 = 7;
}
