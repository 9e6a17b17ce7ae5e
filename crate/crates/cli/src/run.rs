use rayon::prelude::*;

use linkscape::channel::{LinkBudget, LinkGeometry, RadioParams};
use linkscape::mcsim::{simulate_network_outage, simulate_pair_outage, NetworkSim, Serving, SimMode, SimSpec};
use linkscape::network::{
    network_outage_nearest, network_outage_with, outage_multi_conditional, outage_multi_with, outage_nearest_with,
    ServingLink,
};
use linkscape::optimize::minimize;
use linkscape::outage::{
    crossover_along, crossover_ratio, outage_total_general_with, outage_total_sir, sir, LinkPairConfig, OutageBreakdown,
};
use linkscape::specfun::QuadratureSpec;
use linkscape::{Error, LinkPairConfig64};

use crate::config::{Axis, Geometry, Mode, NetworkSection, Objective, ScenarioConfig};
use crate::csv::CsvCurve;
use crate::error::CliError;

/// Command-line adjustments applied on top of a scenario file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    /// Relative tolerance of every quadrature.
    pub tolerance: Option<f64>,
}

/// Scenario state at one sweep value.
#[derive(Debug, Clone, Copy)]
struct Point {
    geometry: Option<Geometry>,
    radio: RadioParams<f64>,
    network: Option<NetworkSection>,
}

fn place(p: [f64; 3], rx: [f64; 3], d: f64, fallback: [f64; 2]) -> [f64; 3] {
    let (dx, dy) = (p[0] - rx[0], p[1] - rx[1]);
    let n = dx.hypot(dy);
    let (ux, uy) = if n > 0.0 {
        (dx / n, dy / n)
    } else {
        (fallback[0], fallback[1])
    };
    [rx[0] + d * ux, rx[1] + d * uy, p[2]]
}

fn at(cfg: &ScenarioConfig, x: f64) -> Point {
    let mut p = Point {
        geometry: cfg.geometry,
        radio: cfg.radio,
        network: cfg.network,
    };
    if let Some(g) = p.geometry.as_mut() {
        match cfg.sweep.axis {
            Axis::Tx(i) => g.tx[i] = x,
            Axis::Rx(i) => g.rx[i] = x,
            Axis::Interferer(i) => g.interferer[i] = x,
            Axis::TxHorizontal => g.tx = place(g.tx, g.rx, x, [1.0, 0.0]),
            Axis::InterfererHorizontal => g.interferer = place(g.interferer, g.rx, x, [-1.0, 0.0]),
            _ => {}
        }
        if g.interferer_tracks_rx {
            g.interferer[2] = g.rx[2];
        }
    }
    if let Some(n) = p.network.as_mut() {
        match cfg.sweep.axis {
            Axis::Density => n.params.lambda_i = x,
            Axis::NetworkRxHeight => n.params.rx_height = x,
            Axis::NetworkInterfererHeight => n.params.interferer_height = x,
            Axis::ServingDistance => n.serving_distance = Some(x),
            _ => {}
        }
        if n.interferer_tracks_rx {
            n.params.interferer_height = n.params.rx_height;
        }
    }
    match cfg.sweep.axis {
        Axis::GammaT => p.radio.gamma_t = x,
        Axis::InterfererPower => p.radio.p_i = x,
        Axis::Noise => p.radio.n_o = x,
        _ => {}
    }
    p
}

fn pair(cfg: &ScenarioConfig, p: &Point) -> Result<LinkPairConfig64, Error> {
    let g = p.geometry.expect("geometry checked at parse time");
    LinkPairConfig::new(
        LinkGeometry::new(g.tx, g.rx)?,
        LinkGeometry::new(g.interferer, g.rx)?,
        cfg.env,
        p.radio,
    )
}

fn network(p: &Point) -> NetworkSection {
    p.network.expect("network checked at parse time")
}

fn breakdown_row(b: &OutageBreakdown<f64>) -> Vec<f64> {
    vec![b.total, b.p_ll, b.p_ln, b.p_nl, b.p_nn, b.w_ll, b.w_ln, b.w_nl, b.w_nn]
}

const BREAKDOWN: [&str; 9] = ["total", "p_ll", "p_ln", "p_nl", "p_nn", "w_ll", "w_ln", "w_nl", "w_nn"];

fn status(e: &Error) -> &'static str {
    match e {
        Error::Domain { .. } => "domain",
        Error::InvalidParameter { .. } => "invalid-parameter",
        Error::Convergence { .. } => "convergence",
        Error::Bracket { .. } => "bracket",
        Error::Configuration(_) => "configuration",
    }
}

struct Runner<'a> {
    cfg: &'a ScenarioConfig,
    quad: QuadratureSpec<f64>,
    trials: u64,
    seed: u64,
}

impl Runner<'_> {
    fn simulate_network(&self) -> bool {
        self.cfg.geometry.is_none()
    }

    fn columns(&self) -> Vec<&'static str> {
        let serving = self.cfg.network.is_some_and(|n| n.serving_distance.is_some());
        match self.cfg.mode {
            Mode::General | Mode::Sir => BREAKDOWN.to_vec(),
            Mode::Simulate if self.simulate_network() => vec!["outage", "mc_estimate", "mc_std_error"],
            Mode::Simulate => BREAKDOWN
                .iter()
                .copied()
                .chain(["mc_estimate", "mc_std_error"])
                .collect(),
            Mode::Network if serving => vec!["outage", "outage_los_main", "outage_nlos_main", "p_los_main"],
            Mode::Network => vec!["network_outage"],
            Mode::Nearest if serving => vec!["outage_nearest", "outage_multi"],
            Mode::Nearest => vec!["network_outage_nearest", "network_outage"],
            Mode::Crossover => vec![
                "ratio",
                "k_main",
                "k_interferer",
                "p_ll",
                "p_nn",
                "crossover_fixed_k",
                "crossover_parameter",
                "crossover_ratio",
            ],
            Mode::Channel => vec![
                "p_los_main",
                "k_main",
                "alpha_main",
                "beta_main",
                "p_los_interferer",
                "k_interferer",
                "alpha_interferer",
                "beta_interferer",
            ],
            Mode::OptimalHeight => vec!["outage", "multimodal"],
        }
    }

    fn multi(&self, n: &NetworkSection, radio: &RadioParams<f64>) -> Result<f64, Error> {
        match n.serving_distance {
            Some(r) => outage_multi_with(r, &n.params, &self.cfg.env, radio, &self.quad),
            None => network_outage_with(&n.params, &self.cfg.env, radio, &self.quad),
        }
    }

    fn nearest(&self, n: &NetworkSection, radio: &RadioParams<f64>) -> Result<f64, Error> {
        match n.serving_distance {
            Some(r) => outage_nearest_with(r, r, &n.params, &self.cfg.env, radio, &self.quad),
            None => network_outage_nearest(&n.params, &self.cfg.env, radio, &self.quad),
        }
    }

    fn objective(&self, p: &Point) -> Result<f64, Error> {
        match self.cfg.sweep.objective {
            Objective::General => Ok(outage_total_general_with(&pair(self.cfg, p)?, &self.quad)?.total),
            Objective::Sir => Ok(outage_total_sir(&pair(self.cfg, p)?)?.total),
            Objective::Network => self.multi(&network(p), &p.radio),
            Objective::Nearest => self.nearest(&network(p), &p.radio),
        }
    }

    fn row(&self, index: usize, x: f64, geometric: Option<(f64, f64)>) -> Result<Vec<f64>, Error> {
        let cfg = self.cfg;
        let p = at(cfg, x);
        let env = &cfg.env;
        Ok(match cfg.mode {
            Mode::General => breakdown_row(&outage_total_general_with(&pair(cfg, &p)?, &self.quad)?),
            Mode::Sir => breakdown_row(&outage_total_sir(&pair(cfg, &p)?)?),
            Mode::Simulate => {
                let spec = SimSpec {
                    mode: cfg.simulation.mode,
                    ..SimSpec::new(self.trials, self.seed.wrapping_add(index as u64))
                };
                if self.simulate_network() {
                    let n = network(&p);
                    let sim = NetworkSim {
                        serving: n.serving_distance.map_or(Serving::Nearest, Serving::Fixed),
                        ..Default::default()
                    };
                    let r = simulate_network_outage(&n.params, env, &p.radio, &sim, &spec)?;
                    vec![self.multi(&n, &p.radio)?, r.estimate, r.std_error]
                } else {
                    let pc = pair(cfg, &p)?;
                    let b = match spec.mode {
                        SimMode::Sinr => outage_total_general_with(&pc, &self.quad)?,
                        SimMode::Sir => outage_total_sir(&pc)?,
                    };
                    let r = simulate_pair_outage(&pc, &spec)?;
                    let mut v = breakdown_row(&b);
                    v.extend([r.estimate, r.std_error]);
                    v
                }
            }
            Mode::Network => {
                let n = network(&p);
                match n.serving_distance {
                    Some(r) => {
                        let los = outage_multi_conditional(
                            linkscape::channel::LinkState::Los,
                            r,
                            &n.params,
                            env,
                            &p.radio,
                            &self.quad,
                        )?;
                        let nlos = outage_multi_conditional(
                            linkscape::channel::LinkState::Nlos,
                            r,
                            &n.params,
                            env,
                            &p.radio,
                            &self.quad,
                        )?;
                        let main = ServingLink::new(r, &n.params, env, &p.radio)?;
                        let total = main.p_los * los + (1.0 - main.p_los) * nlos;
                        vec![total, los, nlos, main.p_los]
                    }
                    None => vec![self.multi(&n, &p.radio)?],
                }
            }
            Mode::Nearest => {
                let n = network(&p);
                vec![self.nearest(&n, &p.radio)?, self.multi(&n, &p.radio)?]
            }
            Mode::Crossover => {
                let t = pair(cfg, &p)?.terms()?;
                let v = t.ratio();
                let fixed = match crossover_ratio(t.k_m, t.k_i, t.gamma) {
                    Ok(c) => c,
                    Err(Error::Bracket { .. }) => f64::NAN,
                    Err(e) => return Err(e),
                };
                let (param, ratio) = geometric.unwrap_or((f64::NAN, f64::NAN));
                vec![
                    v,
                    t.k_m,
                    t.k_i,
                    sir::ll(v, t.k_m, t.k_i, t.gamma),
                    sir::nn(v, t.gamma),
                    fixed,
                    param,
                    ratio,
                ]
            }
            Mode::Channel => {
                let g = p.geometry.expect("geometry checked at parse time");
                let m = LinkBudget::evaluate(&LinkGeometry::new(g.tx, g.rx)?, env, p.radio.p_m)?;
                let i = LinkBudget::evaluate(&LinkGeometry::new(g.interferer, g.rx)?, env, p.radio.p_i)?;
                vec![m.p_los, m.k, m.alpha, m.beta, i.p_los, i.k, i.alpha, i.beta]
            }
            Mode::OptimalHeight => unreachable!("handled separately"),
        })
    }

    fn optimal_height(&self) -> (Vec<f64>, String) {
        let s = &self.cfg.sweep;
        let steps = s.steps.max(3);
        match minimize(|z| self.objective(&at(self.cfg, z)), s.min, s.max, steps, s.tolerance) {
            Ok(m) => (
                vec![m.argmin, m.value, if m.multimodal { 1.0 } else { 0.0 }],
                "ok".into(),
            ),
            Err(e) => {
                log::warn!("optimal height search failed: {e}");
                (vec![f64::NAN; 3], status(&e).into())
            }
        }
    }

    fn geometric_crossover(&self) -> Option<(f64, f64)> {
        let s = &self.cfg.sweep;
        let (lo, hi) = if s.min < s.max { (s.min, s.max) } else { (s.max, s.min) };
        match crossover_along(|x| pair(self.cfg, &at(self.cfg, x)), lo, hi) {
            Ok(c) => Some((c.parameter, c.ratio)),
            Err(e) => {
                log::warn!("no LoS/NLoS crossover along {} in [{lo}, {hi}]: {e}", s.axis);
                None
            }
        }
    }
}

/// Evaluates every sweep point. Rows that fail carry `nan` values and the
/// error kind in the status column.
pub fn evaluate(cfg: &ScenarioConfig, overrides: &Overrides) -> Result<CsvCurve, CliError> {
    let mut quad = QuadratureSpec::default();
    if let Some(t) = overrides.tolerance {
        if !(t.is_finite() && t > 0.0 && t < 1.0) {
            return Err(CliError::Option(format!("--tolerance must lie in (0, 1), got {t}")));
        }
        quad = quad.with_relative_tolerance(t);
    }
    let trials = overrides.trials.unwrap_or(cfg.simulation.trials);
    if trials == 0 {
        return Err(CliError::Option("--trials must be at least 1".into()));
    }
    let runner = Runner {
        cfg,
        quad,
        trials,
        seed: overrides.seed.unwrap_or(cfg.simulation.seed),
    };
    let axis = cfg.sweep.axis.to_string();
    let mut columns = vec![axis.as_str()];
    columns.extend(runner.columns());
    let mut curve = CsvCurve::new(&columns);

    if cfg.mode == Mode::OptimalHeight {
        curve.rows.push(runner.optimal_height());
        return Ok(curve);
    }
    let geometric = if cfg.mode == Mode::Crossover {
        runner.geometric_crossover()
    } else {
        None
    };
    let width = columns.len() - 1;
    curve.rows = cfg
        .sweep
        .values()
        .into_par_iter()
        .enumerate()
        .map(|(i, x)| match runner.row(i, x, geometric) {
            Ok(mut v) => {
                v.insert(0, x);
                (v, "ok".to_string())
            }
            Err(e) => {
                log::warn!("{} = {x}: {e}", cfg.sweep.axis);
                let mut v = vec![f64::NAN; width + 1];
                v[0] = x;
                (v, status(&e).to_string())
            }
        })
        .collect();
    Ok(curve)
}
