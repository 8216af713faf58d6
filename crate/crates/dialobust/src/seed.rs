//! Seed derivation for per-dialogue random streams.
//!
//! Every pipeline walks dialogues in parallel, so handing one shared RNG down
//! the corpus would make output depend on scheduling. Instead each dialogue
//! gets its own ChaCha8 stream keyed by `(corpus seed, dialogue index)`. The
//! two values are combined with the SplitMix64 finalizer, which mixes the
//! weak structure of small consecutive indices into well-spread keys.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Mix a corpus seed and a stream index into a single well-spread key
/// (SplitMix64 finalizer).
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The random stream for one dialogue: deterministic in `(seed, index)` and
/// independent of every other dialogue's stream.
pub fn dialogue_rng(seed: u64, dialogue_index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, dialogue_index as u64))
}
