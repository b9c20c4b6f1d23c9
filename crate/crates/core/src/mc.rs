//! Seeded, order-deterministic Monte Carlo tallies.
//!
//! Replicates are split into a fixed number of chunks. Chunk `k` draws from
//! ChaCha8 stream `k` of the run seed, and chunk results are merged in chunk
//! order, so a tally depends only on `(reps, seed)` and never on the thread
//! count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::verdict::Outcome;

const CHUNKS: u64 = 64;

/// Independent generator for worker `stream` of run `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finaliser over `seed + index`; used to give each grid point of
/// a curve its own seed.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Outcome counts indexed as `[ConfirmNull, ConfirmAlt, Indecisive, RefutedAll]`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Tally {
    pub counts: [u64; 4],
}

impl Tally {
    fn slot(o: Outcome) -> usize {
        match o {
            Outcome::ConfirmNull => 0,
            Outcome::ConfirmAlt => 1,
            Outcome::Indecisive => 2,
            Outcome::RefutedAll => 3,
        }
    }

    pub fn get(&self, o: Outcome) -> u64 {
        self.counts[Self::slot(o)]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self
    }
}

pub fn tally<F>(reps: u64, seed: u64, trial: F) -> Result<Tally>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Outcome> + Sync,
{
    let chunks = CHUNKS.min(reps.max(1));
    let parts: Vec<Result<Tally>> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let size = reps / chunks + u64::from(k < reps % chunks);
            let mut rng = stream_rng(seed, k);
            let mut t = Tally::default();
            for _ in 0..size {
                t.counts[Tally::slot(trial(&mut rng)?)] += 1;
            }
            Ok(t)
        })
        .collect();
    parts
        .into_iter()
        .try_fold(Tally::default(), |acc, t| Ok(acc.merge(t?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn tally_is_reproducible_and_complete() {
        let run = |seed| {
            tally(10_001, seed, |rng| {
                Ok(if rng.random::<f64>() < 0.3 {
                    Outcome::ConfirmNull
                } else {
                    Outcome::Indecisive
                })
            })
            .unwrap()
        };
        let a = run(7);
        assert_eq!(a, run(7));
        assert_ne!(a, run(8));
        assert_eq!(a.total(), 10_001);
    }

    #[test]
    fn derived_seeds_differ() {
        let s: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        assert_eq!(s.len(), 1000);
    }
}
