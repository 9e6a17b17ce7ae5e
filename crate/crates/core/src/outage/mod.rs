//! Outage probability of a link with one interfering node.
//!
//! Each of the four propagation-state combinations has its own conditional
//! outage; the total mixes them with the LoS probabilities of the two
//! links.

pub mod crossover;
pub mod general;
pub mod sir;

pub use crossover::{crossover_along, crossover_ratio, GeometricCrossover};
pub use general::{
    outage_ll_general, outage_ln_general, outage_nl_general, outage_nn_general, outage_total_general,
    outage_total_general_with,
};
pub use sir::{outage_ll_sir, outage_ln_sir, outage_nl_sir, outage_nn_sir, outage_total_sir};

use crate::channel::{EnvironmentParams, LinkBudget, LinkGeometry, LinkState, RadioParams};
use crate::error::{invalid, Result};
use crate::Real;

/// Rician factors at or below this are handled with the Rayleigh formulas.
pub const DEGENERATE_K: f64 = 1e-12;

/// A main link and an interfering link that end at the same receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkPairConfig<T> {
    pub main: LinkGeometry<T>,
    pub interferer: LinkGeometry<T>,
    pub env: EnvironmentParams<T>,
    pub radio: RadioParams<T>,
}

impl<T: Real> LinkPairConfig<T> {
    pub fn new(
        main: LinkGeometry<T>,
        interferer: LinkGeometry<T>,
        env: EnvironmentParams<T>,
        radio: RadioParams<T>,
    ) -> Result<Self> {
        let cfg = Self {
            main,
            interferer,
            env,
            radio,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.env.validate()?;
        self.radio.validate()?;
        if self.main.rx != self.interferer.rx {
            return Err(invalid(
                "interferer",
                "main and interfering links must share the receiver position",
            ));
        }
        if self.main.length() <= T::zero() {
            return Err(invalid("main", "link length must be positive"));
        }
        if self.interferer.length() <= T::zero() {
            return Err(invalid("interferer", "link length must be positive"));
        }
        Ok(())
    }

    pub fn main_budget(&self) -> Result<LinkBudget<T>> {
        LinkBudget::evaluate(&self.main, &self.env, self.radio.p_m)
    }

    pub fn interferer_budget(&self) -> Result<LinkBudget<T>> {
        LinkBudget::evaluate(&self.interferer, &self.env, self.radio.p_i)
    }

    /// Per-link quantities that feed the closed forms.
    pub fn terms(&self) -> Result<PairTerms<T>> {
        let m = self.main_budget()?;
        let i = self.interferer_budget()?;
        Ok(PairTerms {
            beta_m: m.beta,
            beta_i: i.beta,
            k_m: m.k,
            k_i: i.k,
            gamma: self.radio.gamma_t,
            n_o: self.radio.n_o,
        })
    }

    /// Moves the interferer to horizontal distance `d_h` from the receiver,
    /// keeping its height and bearing (the −x axis if it sits overhead).
    pub fn with_interferer_horizontal(&self, d_h: T) -> Result<Self> {
        let rx = self.interferer.rx;
        let dx = self.interferer.tx[0] - rx[0];
        let dy = self.interferer.tx[1] - rx[1];
        let h = dx.hypot(dy);
        let (ux, uy) = if h > T::zero() {
            (dx / h, dy / h)
        } else {
            (-T::one(), T::zero())
        };
        let tx = [rx[0] + ux * d_h, rx[1] + uy * d_h, self.interferer.tx[2]];
        Self::new(self.main, LinkGeometry::new(tx, rx)?, self.env, self.radio)
    }
}

/// Mean received powers, Rician factors, threshold and noise of a pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairTerms<T> {
    pub beta_m: T,
    pub beta_i: T,
    pub k_m: T,
    pub k_i: T,
    pub gamma: T,
    pub n_o: T,
}

impl<T: Real> PairTerms<T> {
    /// Ratio `v = β_m / β_I` used by the interference-limited forms.
    pub fn ratio(&self) -> T {
        self.beta_m / self.beta_i
    }
}

pub(crate) fn degenerate<T: Real>(k: T) -> bool {
    k <= T::lit(DEGENERATE_K)
}

/// The four conditional outages, their mixture weights and the total.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageBreakdown<T> {
    pub p_ll: T,
    pub p_ln: T,
    pub p_nl: T,
    pub p_nn: T,
    pub w_ll: T,
    pub w_ln: T,
    pub w_nl: T,
    pub w_nn: T,
    pub total: T,
}

impl<T: Real> OutageBreakdown<T> {
    /// Mixes conditional outages `[ll, ln, nl, nn]` with weights from the
    /// LoS probabilities of the main and interfering links.
    pub fn mix(p_los_main: T, p_los_interferer: T, p: [T; 4]) -> Self {
        let (am, ai) = (p_los_main, p_los_interferer);
        let (bm, bi) = (T::one() - am, T::one() - ai);
        let w = [am * ai, am * bi, bm * ai, bm * bi];
        let total = w.iter().zip(&p).map(|(w, p)| *w * *p).sum::<T>();
        Self {
            p_ll: p[0],
            p_ln: p[1],
            p_nl: p[2],
            p_nn: p[3],
            w_ll: w[0],
            w_ln: w[1],
            w_nl: w[2],
            w_nn: w[3],
            total: total.max(T::zero()).min(T::one()),
        }
    }

    pub fn conditional(&self, main: LinkState, interferer: LinkState) -> T {
        use LinkState::*;
        match (main, interferer) {
            (Los, Los) => self.p_ll,
            (Los, Nlos) => self.p_ln,
            (Nlos, Los) => self.p_nl,
            (Nlos, Nlos) => self.p_nn,
        }
    }

    pub fn weights(&self) -> [T; 4] {
        [self.w_ll, self.w_ln, self.w_nl, self.w_nn]
    }

    pub fn conditionals(&self) -> [T; 4] {
        [self.p_ll, self.p_ln, self.p_nl, self.p_nn]
    }
}

pub(crate) fn clamp01<T: Real>(p: T) -> T {
    p.max(T::zero()).min(T::one())
}
