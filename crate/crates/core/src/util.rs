//! Small shared numerics: compensated summation, deterministic hashing and
//! RNG derivation, angle bookkeeping, and the fixed float formatting used by
//! every report writer.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Neumaier compensated accumulator. Summation order is fixed by the caller,
/// so results are bit-stable across thread counts.
#[derive(Debug, Clone, Copy, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Sums in slice order with compensation.
pub fn ksum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut k = Kahan::new();
    for x in xs {
        k.add(x);
    }
    k.total()
}

/// FNV-1a over bytes; used for config hashes and per-index RNG derivation.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x1_0000_0000_01b3);
    }
    h
}

/// Deterministic per-index RNG stream: independent of sharding, so parallel
/// and serial sampling agree byte-for-byte.
pub fn rng_for_index(seed: u64, index: u64) -> ChaCha8Rng {
    let mut bytes = [0u8; 16];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::seed_from_u64(fnv1a(&bytes))
}

/// Difference a − b wrapped into (−pi, pi].
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = a - b;
    d.sin().atan2(d.cos())
}

/// 17 significant digits: enough to round-trip any f64, and deterministic,
/// so identical runs emit identical bytes.
pub fn fmt_g17(x: f64) -> String {
    if x == 0.0 {
        // avoid "-0" noise in reports
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kahan_recovers_small_terms() {
        let mut k = Kahan::new();
        k.add(1e16);
        for _ in 0..1000 {
            k.add(1.0);
        }
        k.add(-1e16);
        assert_eq!(k.total(), 1000.0);
    }

    #[test]
    fn fmt_g17_round_trips() {
        for &x in &[std::f64::consts::PI, 2.0 / 3.0, 1e-300, 6.02e23] {
            let s = fmt_g17(x);
            let y: f64 = s.parse().unwrap();
            assert_eq!(x, y, "{s}");
        }
    }

    #[test]
    fn angle_diff_wraps() {
        assert!((angle_diff(3.0, -3.0) - (6.0 - 2.0 * std::f64::consts::PI)).abs() < 1e-12);
        assert!((angle_diff(0.25, 0.125) - 0.125).abs() < 1e-15);
    }
}
