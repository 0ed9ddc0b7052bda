//! Deterministic random source used by every sampler.
//!
//! The generator is ChaCha8 keyed by a 64-bit seed. Parallel work is split
//! by giving shard `i` the same seed on stream `i` (ChaCha streams are
//! independent), so results are reproducible regardless of scheduling.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Name recorded in output manifests so runs can be reproduced.
pub const RNG_ALGORITHM: &str = "chacha8/64-bit-seed/stream-per-shard";

/// A seeded deterministic generator.
#[derive(Clone, Debug)]
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// The generator for a given parallel shard.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        SeededRng(rng)
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }
}
