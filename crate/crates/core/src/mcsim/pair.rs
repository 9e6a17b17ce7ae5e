use rand::Rng;

use super::sampling::{sample_fading_los, sample_fading_nlos, sample_state};
use super::{count_blocks, SimMode, SimResult, SimSpec};
use crate::channel::LinkState;
use crate::error::Result;
use crate::outage::LinkPairConfig;
use crate::real::Real;

fn gain<R: Rng + ?Sized>(state: LinkState, k: f64, rng: &mut R) -> f64 {
    match state {
        LinkState::Los => sample_fading_los(k, rng),
        LinkState::Nlos => sample_fading_nlos(rng),
    }
}

/// Fraction of trials in which `β_m h_m < γ (β_I h_I + N_o)`; the noise term
/// is dropped in [`SimMode::Sir`].
pub fn simulate_pair_outage<T: Real>(cfg: &LinkPairConfig<T>, spec: &SimSpec) -> Result<SimResult> {
    spec.validate()?;
    cfg.validate()?;
    let mb = cfg.main_budget()?;
    let ib = cfg.interferer_budget()?;
    let (p_m, k_m, beta_m) = (mb.p_los.as_f64(), mb.k.as_f64(), mb.beta.as_f64());
    let (p_i, k_i, beta_i) = (ib.p_los.as_f64(), ib.k.as_f64(), ib.beta.as_f64());
    let gamma = cfg.radio.gamma_t.as_f64();
    let n_o = match spec.mode {
        SimMode::Sinr => cfg.radio.n_o.as_f64(),
        SimMode::Sir => 0.0,
    };
    let forced = spec.forced_env;
    let hits = count_blocks(spec.trials, spec.seed, |rng, n| {
        let mut hits = 0;
        for _ in 0..n {
            let (sm, si) = match forced {
                Some(s) => s,
                None => (sample_state(p_m, rng), sample_state(p_i, rng)),
            };
            let hm = gain(sm, k_m, rng);
            let hi = gain(si, k_i, rng);
            if beta_m * hm < gamma * (beta_i * hi + n_o) {
                hits += 1;
            }
        }
        hits
    });
    Ok(SimResult::from_counts(hits, spec.trials))
}
