//! Counter-based seed derivation.
//!
//! Every random draw in a trial comes from a ChaCha8 generator keyed by the
//! trial seed, with the ChaCha stream id set to the gate counter. A gate's
//! randomness therefore depends only on `(master_seed, trial_index, gate_counter)`
//! and never on the order in which gates or trials are generated.
//!
//! The mixing functions below are part of the on-disk reproducibility contract
//! and must not change.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Stream id reserved for outcome sampling within a trial.
pub const SAMPLING_STREAM: u64 = u64::MAX;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function (Steele, Lea, Flood). A bijection on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of trial `trial_index` under `master_seed`.
///
/// `mix64(master + mix64(trial_index + γ))`. For a fixed master seed this is a
/// bijection of the trial index, so distinct trials never share a seed.
pub fn derive_trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    mix64(master_seed.wrapping_add(mix64(trial_index.wrapping_add(GOLDEN_GAMMA))))
}

/// Where one trial draws its randomness from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedPlan {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl SeedPlan {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        Self {
            master_seed,
            trial_index,
        }
    }

    pub fn trial_seed(&self) -> u64 {
        derive_trial_seed(self.master_seed, self.trial_index)
    }

    /// Independent generator for gate number `gate_counter` of this trial.
    pub fn gate_stream(&self, gate_counter: u64) -> ChaCha8Rng {
        debug_assert_ne!(gate_counter, SAMPLING_STREAM);
        self.stream(gate_counter)
    }

    /// Generator for drawing measurement outcomes.
    pub fn sampling_stream(&self) -> ChaCha8Rng {
        self.stream(SAMPLING_STREAM)
    }

    fn stream(&self, id: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.trial_seed());
        rng.set_stream(id);
        rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use std::collections::HashSet;

    #[test]
    fn stable_values() {
        // Frozen: changing these breaks reproducibility of stored reports.
        assert_eq!(mix64(0), 0);
        assert_eq!(derive_trial_seed(0, 0), derive_trial_seed(0, 0));
        let a = derive_trial_seed(42, 7);
        assert_eq!(a, derive_trial_seed(42, 7));
        assert_ne!(a, derive_trial_seed(42, 8));
        assert_ne!(a, derive_trial_seed(43, 7));
    }

    #[test]
    fn no_collisions_over_a_million_trials() {
        let mut seen = HashSet::with_capacity(1 << 20);
        for i in 0..1_000_000u64 {
            assert!(seen.insert(derive_trial_seed(0xdead_beef, i)), "collision at {i}");
        }
    }

    #[test]
    fn streams_differ_and_repeat() {
        let plan = SeedPlan::new(1, 2);
        let a: u64 = plan.gate_stream(0).random();
        let b: u64 = plan.gate_stream(1).random();
        let s: u64 = plan.sampling_stream().random();
        assert_ne!(a, b);
        assert_ne!(a, s);
        assert_eq!(a, plan.gate_stream(0).random::<u64>());
    }
}
