use rand::Rng;
use rand_distr::{Distribution, Gamma};

use super::sampling::{sample_fading_los, sample_fading_nlos, sample_state, RadialPpp};
use super::{count_blocks, moment_blocks, SimMode, SimResult, SimSpec};
use crate::channel::{
    path_loss_exponent_unchecked, rician_factor_unchecked, EnvironmentParams, LinkState, LosProfile, RadioParams,
};
use crate::error::{invalid, Result};
use crate::network::NetworkParams;
use crate::real::Real;

/// Where the serving node sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Serving {
    /// The nearest node of each realization serves; the rest interfere.
    Nearest,
    /// A node at this horizontal distance serves; interferers form a PPP on
    /// the annulus beyond it.
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interference {
    All,
    /// Only the closest interferer transmits.
    NearestOnly,
}

/// Fading applied to a LoS serving link.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MainFading {
    /// Unit-mean Gamma(m, 1/m) power gain with the network's shape `m`.
    Nakagami,
    /// The same noncentral χ² law as a LoS interferer.
    Rician,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkSim {
    pub serving: Serving,
    pub interference: Interference,
    pub main_fading: MainFading,
    pub forced_main: Option<LinkState>,
}

impl Default for NetworkSim {
    fn default() -> Self {
        Self {
            serving: Serving::Nearest,
            interference: Interference::All,
            main_fading: MainFading::Nakagami,
            forced_main: None,
        }
    }
}

/// Interferer and serving-link quantities as functions of horizontal
/// distance.
struct Scene {
    profile: LosProfile<f64>,
    env: EnvironmentParams<f64>,
    dz2: f64,
    p_m: f64,
    p_i: f64,
    gamma: f64,
    n_o: f64,
    lambda: f64,
    radius: f64,
}

impl Scene {
    fn new(net: &NetworkParams<f64>, env: &EnvironmentParams<f64>, radio: &RadioParams<f64>, mode: SimMode) -> Self {
        let dz = net.vertical();
        Self {
            profile: LosProfile::new(net.interferer_height, net.rx_height, env),
            env: *env,
            dz2: dz * dz,
            p_m: radio.p_m,
            p_i: radio.p_i,
            gamma: radio.gamma_t,
            n_o: if mode == SimMode::Sinr { radio.n_o } else { 0.0 },
            lambda: net.lambda_i,
            radius: net.deployment_radius,
        }
    }

    /// `(p_L, K, β)` for a node at horizontal distance `t` transmitting at
    /// `power`.
    fn at(&self, t: f64, power: f64) -> (f64, f64, f64) {
        let p = self.profile.probability(t);
        let alpha = path_loss_exponent_unchecked(p, &self.env);
        let beta = power * (t * t + self.dz2).powf(-0.5 * alpha);
        (p, rician_factor_unchecked(p, &self.env), beta)
    }

    fn interferer_power<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> f64 {
        let (p, k, beta) = self.at(t, self.p_i);
        let h = match sample_state(p, rng) {
            LinkState::Los => sample_fading_los(k, rng),
            LinkState::Nlos => sample_fading_nlos(rng),
        };
        beta * h
    }
}

/// Monte Carlo counterpart of the network outage probabilities: a PPP of
/// density `λ` on the disk of radius `R` around the receiver, sampled as
/// sorted distances.
pub fn simulate_network_outage<T: Real>(
    net: &NetworkParams<T>,
    env: &EnvironmentParams<T>,
    radio: &RadioParams<T>,
    sim: &NetworkSim,
    spec: &SimSpec,
) -> Result<SimResult> {
    spec.validate()?;
    net.validate()?;
    env.validate()?;
    radio.validate()?;
    if spec.forced_env.is_some() {
        return Err(invalid("forced_env", "applies to single-interferer runs only"));
    }
    let (net, env, radio) = (net.cast::<f64>(), env.cast::<f64>(), radio.cast::<f64>());
    if let Serving::Fixed(r) = sim.serving {
        if !(r.is_finite() && r >= 0.0 && r < net.deployment_radius) {
            return Err(invalid("serving distance", "must lie in [0, R)"));
        }
        if r == 0.0 && net.vertical() == 0.0 {
            return Err(invalid("serving distance", "serving link has zero length"));
        }
    }
    let scene = Scene::new(&net, &env, &radio, spec.mode);
    let nakagami = Gamma::new(net.nakagami_m as f64, 1.0 / net.nakagami_m as f64)
        .map_err(|e| invalid("nakagami_m", e.to_string()))?;
    let hits = count_blocks(spec.trials, spec.seed, |rng, n| {
        (0..n).filter(|_| trial(&scene, sim, &nakagami, rng)).count() as u64
    });
    Ok(SimResult::from_counts(hits, spec.trials))
}

fn trial<R: Rng + ?Sized>(scene: &Scene, sim: &NetworkSim, nakagami: &Gamma<f64>, rng: &mut R) -> bool {
    let (r, mut ppp) = match sim.serving {
        Serving::Fixed(r) => (r, RadialPpp::new(scene.lambda, r)),
        Serving::Nearest => loop {
            // An empty disk has no serving node; such realizations are
            // discarded.
            let mut ppp = RadialPpp::new(scene.lambda, 0.0);
            let r = ppp.next(rng);
            if r <= scene.radius {
                break (r, ppp);
            }
            log::debug!("empty realization resampled");
        },
    };
    let (p, k, beta) = scene.at(r, scene.p_m);
    let state = sim.forced_main.unwrap_or_else(|| sample_state(p, rng));
    let h = match (state, sim.main_fading) {
        (LinkState::Los, MainFading::Nakagami) => nakagami.sample(rng),
        (LinkState::Los, MainFading::Rician) => sample_fading_los(k, rng),
        (LinkState::Nlos, _) => sample_fading_nlos(rng),
    };
    // Outage once I exceeds this; interference only grows with each node.
    let limit = beta * h / scene.gamma - scene.n_o;
    if limit < 0.0 {
        return true;
    }
    let mut interference = 0.0;
    loop {
        let t = ppp.next(rng);
        if t > scene.radius {
            return false;
        }
        interference += scene.interferer_power(t, rng);
        if interference > limit {
            return true;
        }
        if sim.interference == Interference::NearestOnly {
            return false;
        }
    }
}

/// Monte Carlo estimate of `E[exp(−s I)]` for interferers on the annulus
/// `[guard, R]`, returned as `(mean, standard error)`.
pub fn simulate_interference_laplace<T: Real>(
    s: T,
    net: &NetworkParams<T>,
    env: &EnvironmentParams<T>,
    radio: &RadioParams<T>,
    guard: T,
    trials: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    SimSpec::new(trials, seed).validate()?;
    net.validate()?;
    let s = s.as_f64();
    let guard = guard.as_f64();
    if !(s.is_finite() && s >= 0.0) {
        return Err(invalid("s", "must be non-negative"));
    }
    if !(guard.is_finite() && guard >= 0.0) {
        return Err(invalid("guard", "must be non-negative"));
    }
    let net = net.cast::<f64>();
    let scene = Scene::new(&net, &env.cast(), &radio.cast(), SimMode::Sir);
    let (sum, sum2) = moment_blocks(trials, seed, |rng, n| {
        let mut acc = (0.0, 0.0);
        for _ in 0..n {
            let mut ppp = RadialPpp::new(scene.lambda, guard);
            let mut interference = 0.0;
            loop {
                let t = ppp.next(rng);
                if t > scene.radius {
                    break;
                }
                interference += scene.interferer_power(t, rng);
            }
            let x = (-s * interference).exp();
            acc.0 += x;
            acc.1 += x * x;
        }
        acc
    });
    let n = trials as f64;
    let mean = sum / n;
    let var = (sum2 / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    Ok((mean, (var / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{interference_laplace, outage_multi_conditional, outage_nearest, ServingLink};
    use crate::specfun::QuadratureSpec;

    fn setup(lambda: f64, z: f64, m: u32) -> (NetworkParams<f64>, EnvironmentParams<f64>, RadioParams<f64>) {
        (
            NetworkParams::new(lambda, z, m).unwrap(),
            EnvironmentParams::dense_urban(),
            RadioParams::default(),
        )
    }

    #[test]
    fn laplace_matches_quadrature() {
        let (net, env, radio) = setup(1e-5, 50.0, 1);
        for guard in [20.0, 100.0] {
            let main = ServingLink::new(guard, &net, &env, &radio).unwrap();
            let s = radio.gamma_t / main.beta;
            let want = interference_laplace(s, &net, &env, &radio, guard).unwrap();
            let (m, se) = simulate_interference_laplace(s, &net, &env, &radio, guard, 100_000, 3).unwrap();
            assert!(
                (m - want).abs() <= 4.0 * se + 1e-4,
                "guard {guard}: {m} ± {se} vs {want}"
            );
        }
    }

    #[test]
    fn fixed_serving_matches_conditional_analysis() {
        let (net, env, radio) = setup(1e-5, 40.0, 2);
        let q = QuadratureSpec::default();
        for state in LinkState::BOTH {
            let sim = NetworkSim {
                serving: Serving::Fixed(60.0),
                forced_main: Some(state),
                ..Default::default()
            };
            let want = outage_multi_conditional(state, 60.0, &net, &env, &radio, &q).unwrap();
            let r = simulate_network_outage(&net, &env, &radio, &sim, &SimSpec::new(100_000, 4).sir()).unwrap();
            assert!(
                r.agrees_with(want, 4.0, 0.0),
                "{state:?}: {} ± {} vs {want}",
                r.estimate,
                r.std_error
            );
        }
    }

    #[test]
    fn aerial_field_matches_bounded_analysis() {
        let (mut net, env, mut radio) = setup(1e-6, 200.0, 2);
        net.interferer_height = 200.0;
        net.bounded = true;
        radio.p_i = 0.3 * radio.p_m;
        let want = crate::network::outage_multi(80.0, &net, &env, &radio).unwrap();
        let sim = NetworkSim {
            serving: Serving::Fixed(80.0),
            ..Default::default()
        };
        let r = simulate_network_outage(&net, &env, &radio, &sim, &SimSpec::new(100_000, 8).sir()).unwrap();
        assert!(
            r.agrees_with(want, 4.0, 0.0),
            "{} ± {} vs {want}",
            r.estimate,
            r.std_error
        );
    }

    #[test]
    fn nearest_only_matches_analysis() {
        let (net, env, radio) = setup(1e-5, 30.0, 2);
        let want = outage_nearest(80.0, &net, &env, &radio).unwrap();
        let sim = NetworkSim {
            serving: Serving::Fixed(80.0),
            interference: Interference::NearestOnly,
            main_fading: MainFading::Rician,
            forced_main: None,
        };
        let r = simulate_network_outage(&net, &env, &radio, &sim, &SimSpec::new(100_000, 5).sir()).unwrap();
        assert!(
            r.agrees_with(want, 4.0, 0.0),
            "{} ± {} vs {want}",
            r.estimate,
            r.std_error
        );
    }

    #[test]
    fn nearest_only_never_exceeds_full_interference() {
        // Same seed, same realizations: dropping interferers can only remove
        // outages.
        let (net, env, radio) = setup(5e-5, 50.0, 2);
        let spec = SimSpec::new(50_000, 6);
        let full = simulate_network_outage(&net, &env, &radio, &NetworkSim::default(), &spec).unwrap();
        let near = NetworkSim {
            interference: Interference::NearestOnly,
            ..Default::default()
        };
        let near = simulate_network_outage(&net, &env, &radio, &near, &spec).unwrap();
        assert!(near.estimate <= full.estimate);
    }

    #[test]
    fn forced_env_rejected() {
        let (net, env, radio) = setup(1e-5, 50.0, 2);
        let spec = SimSpec::new(10, 1).forced(LinkState::Los, LinkState::Los);
        assert!(simulate_network_outage(&net, &env, &radio, &NetworkSim::default(), &spec).is_err());
    }

    #[test]
    fn serving_state_frequency_tracks_los_probability() {
        // The unforced run mixes the two conditionals with weight p_L.
        let (net, env, radio) = setup(1e-5, 60.0, 1);
        let q = QuadratureSpec::default();
        let r = 70.0;
        let main = ServingLink::new(r, &net, &env, &radio).unwrap();
        let los = outage_multi_conditional(LinkState::Los, r, &net, &env, &radio, &q).unwrap();
        let nlos = outage_multi_conditional(LinkState::Nlos, r, &net, &env, &radio, &q).unwrap();
        let want = main.p_los * los + (1.0 - main.p_los) * nlos;
        let sim = NetworkSim {
            serving: Serving::Fixed(r),
            ..Default::default()
        };
        let got = simulate_network_outage(&net, &env, &radio, &sim, &SimSpec::new(100_000, 7).sir()).unwrap();
        assert!(got.agrees_with(want, 4.0, 0.0));
    }
}
