//! Deterministic random streams. Every consumer gets its own ChaCha8 stream
//! keyed by (master seed, purpose, index), so results never depend on the
//! order in which replicas are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Purpose tags. Each occupies the top 16 bits of the stream id.
pub mod purpose {
    pub const INITIAL: u64 = 1;
    pub const EVENTS: u64 = 2;
    pub const REFERENCE: u64 = 3;
    pub const SAMPLE: u64 = 5;
    pub const TARGET_SAMPLE: u64 = 6;
    pub const QUADRUPLES: u64 = 7;
    pub const CALIBRATION: u64 = 8;
    pub const EXACT_SAMPLE: u64 = 9;
}

pub fn stream(master: u64, purpose: u64, index: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream((purpose << 48) | (index & ((1 << 48) - 1)));
    rng
}
