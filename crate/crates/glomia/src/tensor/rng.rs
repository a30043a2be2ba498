//! Seeded, reproducible random streams.
//!
//! One fixed generator (ChaCha8) drives every random choice in the crate.
//! Independent streams are derived, not split: `derive_seed(parent, tag, i)`
//! hashes the parent seed with a purpose tag and an index, so any graph copy
//! or repetition can be regenerated in isolation.
//!
//! Stream semantics, which golden tests pin down:
//! - `next_u64` is the raw ChaCha8 64-bit output for the stored seed
//!   (`seed_from_u64`).
//! - `next_f64` takes the top 53 bits of `next_u64`, giving a uniform value
//!   in [0, 1).
//! - `uniform(lo, hi, ..)` maps each `next_f64` to `lo + u * (hi - lo)`,
//!   filling matrices in row-major order.
//! - `bernoulli_int` is the low bit of `next_u64`.

use crate::error::{Error, Result};
use crate::tensor::Matrix;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Derive a child seed from a parent seed, a purpose tag, and an index.
///
/// FNV-1a over the tag bytes mixed with parent and index through the
/// SplitMix64 finalizer. Deterministic across platforms.
pub fn derive_seed(parent: u64, tag: &str, index: u64) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = parent
        ^ h.rotate_left(32)
        ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seeded pseudorandom generator (ChaCha8). Identical seed gives an
/// identical stream on every platform.
#[derive(Debug, Clone)]
pub struct Rng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// The seed this stream was created from (not the current state).
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Fresh stream for a derived purpose; independent of this stream's
    /// position.
    pub fn child(&self, tag: &str, index: u64) -> Rng {
        Rng::new(derive_seed(self.seed, tag, index))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in [0, 1), 53-bit resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 * SCALE
    }

    /// One uniform draw from [lo, hi).
    ///
    /// The upper bound is exclusive: a rounding collision at `hi` is nudged
    /// down to the largest representable value below it.
    #[inline]
    pub fn uniform_scalar(&mut self, lo: f64, hi: f64) -> f64 {
        let v = lo + self.next_f64() * (hi - lo);
        if v >= hi {
            hi.next_down()
        } else {
            v
        }
    }

    /// Matrix of i.i.d. draws from [lo, hi), filled row-major.
    pub fn uniform(&mut self, lo: f64, hi: f64, rows: usize, cols: usize) -> Result<Matrix> {
        if !(lo < hi) {
            return Err(Error::Range { lo, hi });
        }
        let data = (0..rows * cols).map(|_| self.uniform_scalar(lo, hi)).collect();
        Matrix::from_vec(rows, cols, data)
    }

    /// Uniform integer from {0, 1}.
    #[inline]
    pub fn bernoulli_int(&mut self) -> u8 {
        (self.next_u64() & 1) as u8
    }

    /// Uniform index in [0, n). n must be positive.
    #[inline]
    pub fn next_index(&mut self, n: usize) -> usize {
        // Widening multiply maps the 64-bit stream onto [0, n) with bias
        // below 2^-53 for the n used here.
        ((u128::from(self.next_u64()) * n as u128) >> 64) as usize
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, slice: &mut [T]) {
        for i in (1..slice.len()).rev() {
            let j = self.next_index(i + 1);
            slice.swap(i, j);
        }
    }
}
