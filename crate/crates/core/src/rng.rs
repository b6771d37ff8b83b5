//! Deterministic derived random streams.
//!
//! Every simulation draws from a ChaCha8 generator keyed by the user seed and
//! one stream id per logical purpose (replicate index, density index, ...).
//! Streams are independent of the thread that consumes them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream labels used across the crate.
pub mod label {
    pub const RBN: u64 = 0x5242_4e00;
    pub const COUPLED: u64 = 0x4350_4c00;
    pub const ECA: u64 = 0x4543_4100;
    pub const TRAFFIC: u64 = 0x5452_4600;
    pub const OCCUPANCY: u64 = 0x4f43_4300;
    pub const SYNTH: u64 = 0x5359_4e00;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hashes a sequence of labels into one stream id.
pub fn stream_id(labels: &[u64]) -> u64 {
    labels.iter().fold(0x6a09_e667_f3bc_c908, |acc, &l| {
        splitmix64(acc ^ splitmix64(l))
    })
}

/// Generator for `seed` on the stream identified by `labels`.
pub fn derived(seed: u64, labels: &[u64]) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(labels));
    rng
}
