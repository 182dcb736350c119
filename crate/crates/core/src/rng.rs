//! Deterministic random streams keyed by (seed, sample, channel, draw kind).
//!
//! Each logical draw gets its own ChaCha8 stream, so a sample's content does
//! not depend on how many other samples were generated before it or on the
//! order in which worker threads ran.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// What a stream is used for. Part of the stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum DrawKind {
    /// Coloured-noise input ε̂.
    Coloured = 1,
    /// White innovation ε added before mixing.
    Innovation = 2,
    /// Structural graph A_s.
    Structure = 3,
    /// Node permutations for baselines.
    Permutation = 4,
    /// Random-graph baselines.
    RandomGraph = 5,
    /// Any other auxiliary draw.
    Auxiliary = 6,
}

/// Builds a generator for one logical stream.
///
/// The 64-bit stream id packs `sample` (40 bits), `channel` (16 bits) and the
/// draw kind (8 bits).
pub fn stream(seed: u64, sample: u64, channel: u32, kind: DrawKind) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let id = ((sample & 0xFF_FFFF_FFFF) << 24) | (u64::from(channel & 0xFFFF) << 8) | kind as u64;
    rng.set_stream(id);
    rng
}

/// `n` independent standard normal draws.
pub fn normals<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniform draw in `[lo, hi)`.
pub fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

/// Uniformly random permutation of `0..n`.
pub fn permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
