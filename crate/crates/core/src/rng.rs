//! Deterministic seeding helpers.
//!
//! All Monte Carlo entry points take a single `u64` seed. Independent
//! per-trial streams are derived as `splitmix64(seed ^ trial)` and fed to
//! ChaCha8, so trials can run in any order (or in parallel) and still
//! reproduce bit-for-bit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer. Bijective on `u64`, so distinct inputs map to
/// distinct stream seeds.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the RNG stream of one trial of one experiment.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    splitmix64(seed ^ trial)
}

/// ChaCha8 stream for a raw seed.
pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// ChaCha8 stream for trial `trial` of an experiment seeded with `seed`.
pub fn trial_stream(seed: u64, trial: u64) -> ChaCha8Rng {
    stream(trial_seed(seed, trial))
}
