//! Seeded random streams.
//!
//! Every stochastic routine takes an explicit `u64` seed. Streams are ChaCha8
//! keyed by `seed_from_u64(seed)`; independent sub-streams (bootstrap
//! replicates, replicate experiments) select ChaCha's 64-bit stream id. The
//! keystream is a pure function of `(seed, stream, word counter)`, so output is
//! identical across platforms and thread counts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Generator for sub-stream `stream` of `seed`.
pub fn stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Generator for the main stream of `seed`.
pub fn seeded(seed: u64) -> StreamRng {
    stream(seed, 0)
}
