//! Deterministic derivation of independent RNG streams from one master seed.
//!
//! Every random draw in the workbench comes from a [`ChaCha8Rng`] whose seed
//! is a hash of the master seed and a short path of labels (stream tag,
//! generation, individual id, ...). Streams never depend on scheduling, so
//! results are identical regardless of how many workers evaluate a population.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Labels for the independent stream families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    InitialGenome = 1,
    Selection = 2,
    Mutation = 3,
    Noise = 4,
    Replicate = 5,
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `master` with every element of `path` into a single 64-bit seed.
pub fn derive(master: u64, stream: Stream, path: &[u64]) -> u64 {
    let mut h = splitmix64(master ^ splitmix64(stream as u64));
    for &p in path {
        h = splitmix64(h ^ splitmix64(p.wrapping_add(0xA076_1D64_78BD_642F)));
    }
    h
}

/// An RNG for the stream identified by `(master, stream, path)`.
pub fn rng(master: u64, stream: Stream, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(master, stream, path))
}
