//! Counter-based per-sample random streams.
//!
//! Every Monte Carlo sample owns an independent ChaCha stream keyed by
//! `(seed, index)`, so the draw for sample `i` is the same no matter how
//! work is split across threads or in what order samples are computed.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The stream for sample `index` of the run keyed by `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut state = seed;
    let s0 = splitmix64(&mut state);
    state ^= index.wrapping_mul(GAMMA).wrapping_add(1);
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&s0.to_le_bytes());
    for chunk in key[8..].chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}

/// Deterministic 64-bit fingerprint used for provenance tokens.
pub fn fingerprint(words: &[u64]) -> u64 {
    let mut state = 0x243F_6A88_85A3_08D3;
    let mut acc = 0u64;
    for &w in words {
        state ^= w;
        acc = acc.rotate_left(7) ^ splitmix64(&mut state);
    }
    acc
}
