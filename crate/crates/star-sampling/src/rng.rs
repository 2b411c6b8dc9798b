//! Seed derivation for reproducible, parallel-safe experiment streams.
//!
//! Every trial draws from its own ChaCha stream keyed by
//! `(master_seed, stream_index)`, so results are independent of worker
//! count and scheduling order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream index reserved for a shared graph generated once per experiment.
pub(crate) const SHARED_GRAPH_STREAM: u64 = u64::MAX;
/// Stream index reserved for a target reused across trials.
pub(crate) const SHARED_TARGET_STREAM: u64 = u64::MAX - 1;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `(master, stream)` into a single 64-bit seed.
pub fn derive_stream_seed(master: u64, stream: u64) -> u64 {
    splitmix64(splitmix64(master) ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// RNG for one stream of an experiment keyed by `master`.
///
/// The generator is platform-independent, so a given `(master, stream)`
/// pair reproduces the same draws everywhere.
pub fn stream_rng(master: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_stream_seed(master, stream))
}
