//! Monte Carlo estimates of the probabilities computed analytically in
//! [`crate::outage`] and [`crate::network`].
//!
//! Trials run in fixed-size blocks. Block `b` draws from the ChaCha8 stream
//! `b` of the run seed, so the estimate does not depend on how blocks are
//! scheduled across threads. Simulation is carried out in `f64` whatever
//! scalar the configuration uses.

pub mod network;
pub mod pair;
pub mod sampling;

pub use network::{
    simulate_interference_laplace, simulate_network_outage, Interference, MainFading, NetworkSim, Serving,
};
pub use pair::simulate_pair_outage;
pub use sampling::{sample_fading_los, sample_fading_nlos, sample_ppp_disk};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::LinkState;
use crate::error::{invalid, Result};

/// Trials per RNG substream.
pub const BLOCK: u64 = 4096;

/// Whether receiver noise enters the outage test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    Sinr,
    Sir,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimSpec {
    pub trials: u64,
    pub seed: u64,
    pub mode: SimMode,
    /// Conditions a single-interferer run on `(main, interferer)` states.
    pub forced_env: Option<(LinkState, LinkState)>,
}

impl SimSpec {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            mode: SimMode::Sinr,
            forced_env: None,
        }
    }

    pub fn sir(self) -> Self {
        Self {
            mode: SimMode::Sir,
            ..self
        }
    }

    pub fn forced(self, main: LinkState, interferer: LinkState) -> Self {
        Self {
            forced_env: Some((main, interferer)),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        Ok(())
    }
}

/// Estimated probability with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult {
    pub estimate: f64,
    pub std_error: f64,
    pub trials_used: u64,
}

impl SimResult {
    pub fn from_counts(hits: u64, trials: u64) -> Self {
        let p = hits as f64 / trials as f64;
        Self {
            estimate: p,
            std_error: (p * (1.0 - p) / trials as f64).sqrt(),
            trials_used: trials,
        }
    }

    /// `|estimate − value| ≤ max(floor, k·SE)`.
    pub fn agrees_with(&self, value: f64, k: f64, floor: f64) -> bool {
        (self.estimate - value).abs() <= floor.max(k * self.std_error)
    }
}

pub(crate) fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn blocks(trials: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let n = trials.div_ceil(BLOCK) as usize;
    (0..n).into_par_iter().map(move |b| {
        let b = b as u64;
        (b, BLOCK.min(trials - b * BLOCK))
    })
}

/// Sums `f(rng, n)` over all blocks, `n` being the block's trial count.
pub(crate) fn count_blocks<F>(trials: u64, seed: u64, f: F) -> u64
where
    F: Fn(&mut ChaCha8Rng, u64) -> u64 + Sync,
{
    blocks(trials).map(|(b, n)| f(&mut block_rng(seed, b), n)).sum()
}

/// Per-block `(Σx, Σx²)`, reduced in block order so the floating-point sum
/// is reproducible.
pub(crate) fn moment_blocks<F>(trials: u64, seed: u64, f: F) -> (f64, f64)
where
    F: Fn(&mut ChaCha8Rng, u64) -> (f64, f64) + Sync,
{
    let parts: Vec<(f64, f64)> = blocks(trials).map(|(b, n)| f(&mut block_rng(seed, b), n)).collect();
    parts.into_iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn standard_error_formula() {
        let r = SimResult::from_counts(250, 1000);
        assert_eq!(r.estimate, 0.25);
        assert!((r.std_error - (0.25f64 * 0.75 / 1000.0).sqrt()).abs() < 1e-18);
    }

    #[test]
    fn block_counts_cover_every_trial() {
        for trials in [1, BLOCK - 1, BLOCK, BLOCK + 1, 5 * BLOCK + 17] {
            assert_eq!(count_blocks(trials, 3, |_, n| n), trials);
        }
    }

    #[test]
    fn result_independent_of_thread_count() {
        let f = |rng: &mut ChaCha8Rng, n: u64| (0..n).filter(|_| rng.random::<f64>() < 0.3).count() as u64;
        let a = count_blocks(100_000, 9, f);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| count_blocks(100_000, 9, f));
        assert_eq!(a, b);
    }

    #[test]
    fn substreams_differ() {
        let mut a = block_rng(1, 0);
        let mut b = block_rng(1, 1);
        assert_ne!(a.random::<u64>(), b.random::<u64>());
    }
}
