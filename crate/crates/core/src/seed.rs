/// SplitMix64 finaliser: a cheap, well-mixed bijection on `u64`.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for stream `n` of `seed`, so per-item randomness does not
/// depend on iteration order.
pub fn derive_seed(seed: u64, n: u64) -> u64 {
    mix64(seed ^ mix64(n))
}
