//! Deterministic random streams for sampling-based checks.
//!
//! Every randomized task derives its own generator from the campaign seed,
//! a task label and the width, by hashing the three together into a ChaCha
//! key. Two consequences matter for reproducibility:
//!
//! * the stream for a task depends only on `(seed, label, width)`, never on
//!   which worker thread runs it or in which order tasks complete, and
//! * distinct tasks get statistically independent streams even for adjacent
//!   seeds, since the hash mixes the inputs thoroughly.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use sha2::{Digest, Sha256};

use crate::bitvec::BitVec;

/// The generator for the task identified by `(seed, label, width)`.
pub fn stream(seed: u64, label: &str, width: u32) -> ChaCha12Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    // Length-prefix the label so distinct (label, width) pairs can never
    // collide by sliding bytes between the fields.
    hasher.update((label.len() as u64).to_le_bytes());
    hasher.update(label.as_bytes());
    hasher.update(width.to_le_bytes());
    ChaCha12Rng::from_seed(hasher.finalize().into())
}

/// A uniformly random bit-vector of the given width.
pub fn bitvec(rng: &mut impl RngCore, width: u32) -> BitVec {
    let words = (0..width.div_ceil(64)).map(|_| rng.next_u64()).collect();
    BitVec::from_raw_words(words, width)
}
