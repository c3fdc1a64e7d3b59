//! Deterministic seed derivation.
//!
//! Every randomized component (optimizer restarts, sampling campaigns, sweep
//! workers) derives an independent stream seed from the global seed and its
//! own index, so results are identical regardless of scheduling or worker
//! count.

/// Derive a child seed from a global seed, a stream salt and an index
/// (splitmix64 finalizer).
pub fn derive_seed(global: u64, salt: u64, index: u64) -> u64 {
    let mut z = global
        ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
