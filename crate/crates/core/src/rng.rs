//! Random sources.
//!
//! Every random decision in the crate goes through [`Draws`], which exposes
//! exactly the two primitives the algorithms need. Any [`rand::RngCore`]
//! implements it; tests can substitute a scripted source to walk specific
//! branches.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Default deterministic generator used by the harness and generators.
pub type EsdRng = ChaCha8Rng;

/// The random primitives consumed by the estimators and generators.
pub trait Draws {
    /// Uniform real in `[0, 1)`.
    fn unit(&mut self) -> f64;

    /// Uniform index in `0..len`. `len` must be positive.
    fn index(&mut self, len: usize) -> usize;

    /// Bernoulli trial that succeeds with probability `p`.
    ///
    /// `p >= 1` always succeeds and `p <= 0` never does.
    fn coin(&mut self, p: f64) -> bool {
        self.unit() < p
    }
}

impl<R: RngCore + ?Sized> Draws for R {
    fn unit(&mut self) -> f64 {
        self.gen::<f64>()
    }

    fn index(&mut self, len: usize) -> usize {
        debug_assert!(len > 0);
        self.gen_range(0..len)
    }
}

/// Mixes `(base, stream, index)` into an independent 64-bit seed.
///
/// Used to give each replication and each estimator its own generator while
/// keeping the whole run a function of one base seed.
pub fn derive_seed(base: u64, stream: u64, index: u64) -> u64 {
    let mut x = splitmix64(base ^ 0x6a09_e667_f3bc_c908);
    x = splitmix64(x ^ stream.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    splitmix64(x ^ index.wrapping_mul(0xbf58_476d_1ce4_e5b9))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A [`EsdRng`] seeded from a 64-bit value.
pub fn seeded_rng(seed: u64) -> EsdRng {
    EsdRng::seed_from_u64(seed)
}
