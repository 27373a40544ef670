//! Seed handling. Every stochastic routine owns a ChaCha8 stream seeded from a
//! `u64`; batch runs derive their seeds statelessly from `(base, batch, run)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a path of indices into a child seed. Pure function of its inputs.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix(base), |acc, &p| mix(acc ^ mix(p ^ 0xD1B5_4A32_D192_ED03)))
}

/// Seed of run `run` inside batch `batch`.
pub fn run_seed(base: u64, batch: usize, run: usize) -> u64 {
    derive_seed(base, &[batch as u64, run as u64])
}
