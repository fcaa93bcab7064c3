//! Named random sub-streams derived from a single user seed.
//!
//! Every consumer of randomness gets its own ChaCha stream selected by a domain tag and
//! an index (point, round, class), so results do not depend on evaluation order or on
//! how work is split across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    /// Per-point subsets of the iterated sampled nearest neighbor detector.
    PointSample = 1,
    /// Per-round shared subsets of the sampled nearest neighbor detectors.
    RoundSample = 2,
    /// Per-class shuffles for stratified folds.
    FoldShuffle = 3,
}

pub fn substream(seed: u64, domain: Domain, index: u64) -> ChaCha8Rng {
    debug_assert!(index < 1 << 56);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((domain as u64) << 56) | index);
    rng
}
