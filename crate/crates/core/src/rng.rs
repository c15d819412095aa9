//! Counter-based 64-bit generator with derivable parallel streams.
//!
//! Output word `i` of stream `(seed, stream)` is
//! `mix64(key + (i + 1) · γ)` with `key = mix64(seed ^ mix64(stream + γ))`,
//! `γ = 0x9E3779B97F4A7C15` and `mix64` the SplitMix64 finaliser. Any word of any
//! stream can be computed without touching the others, so trial `t` of a run with
//! master seed `s` always sees the same numbers regardless of scheduling.
//!
//! Derived values:
//! - uniform `f64` in `[0, 1)`: top 53 bits of a word times `2^-53`;
//! - standard normal: Box–Muller on two consecutive uniforms, both outputs used;
//! - fair bits: consecutive words consumed LSB first.

use rand_core::RngCore;

/// Identifier written into reports so runs can be reproduced elsewhere.
pub const ALGORITHM_ID: &str = "splitmix64-ctr/v1";

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
    counter: u64,
    spare_normal: Option<u64>,
}

impl CounterRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self {
            key: mix64(seed ^ mix64(stream.wrapping_add(GAMMA))),
            counter: 0,
            spare_normal: None,
        }
    }

    /// Stream for trial `index` of a run seeded with `master`.
    pub fn for_trial(master: u64, index: u64) -> Self {
        Self::new(master, index)
    }

    /// Random access to word `i` of this stream.
    pub fn word_at(&self, i: u64) -> u64 {
        mix64(self.key.wrapping_add(i.wrapping_add(1).wrapping_mul(GAMMA)))
    }

    pub fn position(&self) -> u64 {
        self.counter
    }
}

impl RngCore for CounterRng {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        let out = self.word_at(self.counter);
        self.counter = self.counter.wrapping_add(1);
        out
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}

/// Uniform in `[0, 1)`.
#[inline]
pub fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Fair coin.
#[inline]
pub fn coin<R: RngCore + ?Sized>(rng: &mut R) -> bool {
    rng.next_u64() >> 63 == 1
}

/// Fills `out` with independent fair ±1 values, 64 per word, LSB first.
pub fn fill_signs<R: RngCore + ?Sized>(rng: &mut R, out: &mut [i8]) {
    for chunk in out.chunks_mut(64) {
        let word = rng.next_u64();
        for (k, v) in chunk.iter_mut().enumerate() {
            *v = if (word >> k) & 1 == 0 { 1 } else { -1 };
        }
    }
}

/// Fills `out` with independent standard normals (Box–Muller, pairs).
pub fn fill_normals<R: RngCore + ?Sized>(rng: &mut R, out: &mut [f64]) {
    for chunk in out.chunks_mut(2) {
        // 1 - u keeps the logarithm finite.
        let u1 = 1.0 - unit_f64(rng);
        let u2 = unit_f64(rng);
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        chunk[0] = r * theta.cos();
        if chunk.len() > 1 {
            chunk[1] = r * theta.sin();
        }
    }
}
