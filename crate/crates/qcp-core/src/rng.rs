//! Seeded, splittable random streams.
//!
//! Every Monte Carlo trial draws from an independent ChaCha stream derived
//! from `(master seed, trial index)`, so a run's results do not depend on
//! how trials are scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Root generator for a whole run.
pub fn master_rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Independent stream for one trial.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}
