//! Trial-parallel Monte Carlo harness.
//!
//! `run_trials` maps a closure over trial indices, each with its own RNG
//! stream, and returns results in trial order. With the `parallel` feature
//! the map fans out on rayon; the sequential variant is always available so
//! the two can be benchmarked against each other. Output is byte-identical
//! either way.

use rand_chacha::ChaCha12Rng;

use crate::rng::trial_rng;

/// Run `trials` independent trials, in parallel when the `parallel`
/// feature is enabled. Results come back indexed by trial.
pub fn run_trials<T, F>(seed: u64, trials: u64, trial_fn: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &mut ChaCha12Rng) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(seed, t);
                trial_fn(t, &mut rng)
            })
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_trials_seq(seed, trials, trial_fn)
    }
}

/// Sequential twin of [`run_trials`]; same trial streams, same output.
pub fn run_trials_seq<T, F>(seed: u64, trials: u64, trial_fn: F) -> Vec<T>
where
    F: Fn(u64, &mut ChaCha12Rng) -> T,
{
    (0..trials)
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            trial_fn(t, &mut rng)
        })
        .collect()
}

/// Count trials on which `event` fires.
pub fn count_events<F>(seed: u64, trials: u64, event: F) -> u64
where
    F: Fn(&mut ChaCha12Rng) -> bool + Sync,
{
    run_trials(seed, trials, |_, rng| event(rng))
        .into_iter()
        .filter(|&hit| hit)
        .count() as u64
}

/// Standard error of an empirical proportion.
pub fn binomial_stderr(successes: u64, trials: u64) -> f64 {
    if trials == 0 {
        return f64::NAN;
    }
    let p = successes as f64 / trials as f64;
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// Half-width of the 3σ binomial band around probability `p`.
pub fn three_sigma(p: f64, trials: u64) -> f64 {
    3.0 * (p * (1.0 - p) / trials as f64).sqrt()
}
