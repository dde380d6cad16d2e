//! Seeded random stream with a pinned, documented consumption contract.
//!
//! Reproducibility across runs, platforms and implementations is part of the
//! library contract, so nothing here delegates to distribution code that is
//! free to change its draw count between versions. The primitives are:
//!
//! * the raw stream is ChaCha8 keyed from a 64-bit seed,
//! * one `u64` from the stream yields one uniform: the top 53 bits scaled
//!   by 2^-53, giving `u in [0, 1)`,
//! * an index draw over `0..bound` consumes exactly **one** uniform:
//!   `floor(u * bound)`, clamped to `bound - 1`,
//! * a standard Gaussian consumes exactly **two** uniforms via the
//!   Box-Muller map `z = sqrt(-2 ln u1) * cos(2 pi u2)` with `u1 in (0, 1]`
//!   (the sine branch is discarded so the per-variate cost stays fixed).
//!
//! Independent trial streams come from [`derive_seed`], a SplitMix64 step
//! over `(seed, index)`, so trial `i` of a run is reproducible without
//! generating trials `0..i`.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::{RngCore, SeedableRng};

const TWO_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

/// The seeded uniform stream behind cluster generation.
#[derive(Debug, Clone)]
pub struct SeedStream {
    rng: ChaCha8Rng,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    /// Next uniform in `[0, 1)`. Consumes one `u64` of the stream.
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * TWO_NEG_53
    }

    /// Uniform index in `0..bound`. Consumes exactly one uniform, including
    /// the degenerate `bound == 1` case.
    #[inline]
    pub fn next_index(&mut self, bound: usize) -> usize {
        debug_assert!(bound >= 1);
        let u = self.next_unit();
        ((u * bound as f64) as usize).min(bound - 1)
    }

    /// Standard normal variate. Consumes exactly two uniforms.
    #[inline]
    pub fn next_standard_gaussian(&mut self) -> f64 {
        // u1 shifted into (0, 1] so the log is always finite.
        let u1 = ((self.rng.next_u64() >> 11) + 1) as f64 * TWO_NEG_53;
        let u2 = self.next_unit();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Derives the stream seed for an indexed sub-run (trial, row, ...).
///
/// SplitMix64 finalizer over `seed + (index + 1) * GOLDEN_GAMMA`. Stateless, so
/// concurrent trials can be seeded independently and in any order.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
