//! Deterministic RNG stream derivation.
//!
//! Every random draw in a trial comes from a stream derived from the trial's
//! master seed, a domain tag, and an index. Streams never share state, so
//! trials (and drones within a trial) can be evaluated in any order or in
//! parallel without changing results.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer; good avalanche, cheap.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a sub-seed from `(master, domain, index)`.
pub fn derive_seed(master: u64, domain: &str, index: u64) -> u64 {
    // FNV-1a over the domain tag, then fold in master and index.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in domain.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    mix(mix(master ^ h).wrapping_add(index))
}

/// A fresh, independent stream for `(master, domain, index)`.
pub fn stream(master: u64, domain: &str, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, domain, index))
}
