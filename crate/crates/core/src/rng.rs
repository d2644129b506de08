//! Seeded random streams.
//!
//! Every stochastic routine takes an explicit `u64` seed. Independent
//! consumers of the same seed draw from distinct ChaCha streams so that, for
//! example, payment endpoints and max-flow terminals never share draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub const STREAM_PAYMENTS: u64 = 1;
pub const STREAM_FLOW_PAIRS: u64 = 2;
pub const STREAM_STRATEGY: u64 = 3;
pub const STREAM_GENERATOR: u64 = 4;
pub const STREAM_FAILURES: u64 = 5;
pub const STREAM_DISTANCES: u64 = 6;
pub const STREAM_BOOTSTRAP: u64 = 7;

/// Generator for `(seed, stream)`.
pub fn stream(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives the seed of the `index`-th replicate of an experiment.
pub fn replicate_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
