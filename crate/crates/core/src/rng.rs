//! Seeding.
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`), a counter-based
//! stream cipher generator whose output is fully specified and identical on
//! every platform. A run owns one root seed; each purpose draws from its own
//! stream of that seed, selected with `ChaCha8Rng::set_stream`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Purpose-specific stream of a root seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Substream {
    /// Initial positions, jitter and connected-start resampling.
    InitialConditions,
    /// Agent orderings drawn for the relaxed behind graph.
    Permutations,
    /// Per-realization seeds of a Monte Carlo batch.
    Realizations,
}

impl Substream {
    pub const ALL: [Substream; 3] = [
        Substream::InitialConditions,
        Substream::Permutations,
        Substream::Realizations,
    ];

    pub fn id(self) -> u64 {
        match self {
            Substream::InitialConditions => 1,
            Substream::Permutations => 2,
            Substream::Realizations => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Substream::InitialConditions => "initial-conditions",
            Substream::Permutations => "permutations",
            Substream::Realizations => "realizations",
        }
    }
}

pub fn substream(seed: u64, stream: Substream) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.id());
    rng
}

/// Seeds of realizations `0..count` under `root`. Realization `k` always gets
/// the same seed regardless of `count`.
pub fn realization_seeds(root: u64, count: usize) -> Vec<u64> {
    let mut rng = substream(root, Substream::Realizations);
    (0..count).map(|_| rng.next_u64()).collect()
}
