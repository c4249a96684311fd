//! Seeded, replayable random number streams.
//!
//! A stream is identified by `(seed, stream_id)`; two streams with the same
//! pair produce the same sequence. Independent chains each own a stream.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Well-known stream ids used when one seed is expanded into named streams.
pub mod streams {
    pub const CHAIN: u64 = 1;
    pub const COUPLING: u64 = 2;
    pub const PRIOR: u64 = 3;
    pub const PARTICLES: u64 = 4;
    pub const DIRICHLET_DSM: u64 = 5;
    pub const SHUFFLE: u64 = 6;
    pub const PROBES: u64 = 7;
}

#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    inner: ChaCha12Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha12Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Self {
            seed,
            stream,
            inner,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream
    }

    /// A fresh stream with the same seed and a different id.
    pub fn sibling(&self, stream: u64) -> Self {
        Self::new(self.seed, stream)
    }

    /// Draws a child seed from this stream; used to hand each replicate or
    /// particle its own stream in a way that does not depend on scheduling.
    pub fn child(&mut self, stream: u64) -> Self {
        let seed = self.inner.next_u64();
        Self::new(seed, stream)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
