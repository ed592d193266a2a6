//! Deterministic seed derivation for independent random streams.

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hashes an ordered tuple of integers into a single seed.
///
/// Distinct tuples give statistically unrelated seeds, so a trial's stream
/// depends only on its coordinates and not on scheduling order.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts.iter().fold(0x6A09_E667_F3BC_C908, |acc, &p| {
        splitmix64(acc ^ splitmix64(p))
    })
}
