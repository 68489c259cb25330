//! Seeded word generation.
//!
//! The generator is ChaCha8 (`rand_chacha`) seeded through
//! `SeedableRng::seed_from_u64`. ChaCha output is fixed by its definition, so
//! a seed yields the same word sequence on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::symbol::{Alphabet, Word};

/// Seed used when the caller does not pick one.
pub const DEFAULT_SEED: u64 = 42;
/// Longest random word drawn by default.
pub const DEFAULT_MAX_LEN: usize = 20;

/// A seed plus its current stream position.
#[derive(Clone, Debug)]
pub struct RngState {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        RngState {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of 32-bit words consumed from the stream so far.
    pub fn position(&self) -> u128 {
        self.rng.get_word_pos()
    }

    /// Uniform draw from `0..=max`.
    pub fn below_inclusive(&mut self, max: usize) -> usize {
        self.rng.gen_range(0..=max)
    }

    /// Uniform draw from `0..n`; `n` must be positive.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}

impl Default for RngState {
    fn default() -> Self {
        RngState::new(DEFAULT_SEED)
    }
}

/// Draws a length uniformly from `[0, max_len]`, then each symbol uniformly from `sigma`.
pub fn random_word(sigma: &Alphabet, rng: &mut RngState, max_len: usize) -> Word {
    let len = rng.below_inclusive(max_len);
    let syms = sigma.symbols();
    Word::from(
        (0..len)
            .map(|_| syms[rng.index(syms.len())].clone())
            .collect::<Vec<_>>(),
    )
}
