//! Small deterministic helpers shared across modules.

/// FNV-1a over a byte slice. Stable across platforms and releases, unlike
/// `std::collections::hash_map::DefaultHasher`.
pub(crate) fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// SplitMix64 finalizer, used to spread derived seeds.
pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derives an independent child seed from a master seed, a role tag and an
/// index. Scheduling-independent: the result depends only on the arguments.
pub(crate) fn derive_seed(master: u64, tag: &str, idx: u64) -> u64 {
    splitmix64(master ^ fnv1a64(tag.as_bytes()) ^ idx.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Incremental FNV-1a accumulator for fingerprinting fitted models.
#[derive(Debug, Clone)]
pub(crate) struct Fingerprint(u64);

impl Fingerprint {
    pub(crate) fn new() -> Self {
        Fingerprint(0xcbf2_9ce4_8422_2325)
    }

    pub(crate) fn push_u64(&mut self, v: u64) {
        for b in v.to_le_bytes() {
            self.0 ^= u64::from(b);
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    pub(crate) fn push_f64(&mut self, v: f64) {
        self.push_u64(v.to_bits());
    }

    pub(crate) fn push_f64s<'a, I: IntoIterator<Item = &'a f64>>(&mut self, vs: I) {
        for v in vs {
            self.push_f64(*v);
        }
    }

    pub(crate) fn finish(&self) -> u64 {
        self.0
    }
}

/// Arithmetic mean; 0 for an empty slice.
pub(crate) fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population standard deviation (divide by N).
pub(crate) fn population_std(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64).sqrt()
}
