//! Scenario files: `key = value` lines grouped under `[section]` headers.
//!
//! ```text
//! mode = general
//!
//! [geometry]
//! tx = 180, 0, 0
//! rx = 0, 0, 75
//! interferer = 0, 50, 0
//!
//! [sweep]
//! variable = interferer.horizontal
//! min = 50
//! max = 500
//! steps = 10
//! ```
//!
//! Anything not stated takes the dense-urban defaults.

use std::collections::HashMap;
use std::fmt;

use linkscape::channel::{EnvironmentParams, RadioParams};
use linkscape::mcsim::SimMode;
use linkscape::network::{nakagami_m_integer, NetworkParams};
use linkscape::Error as CoreError;

use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    General,
    Sir,
    Network,
    Nearest,
    Simulate,
    Crossover,
    OptimalHeight,
    Channel,
}

impl Mode {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "general" => Self::General,
            "sir" => Self::Sir,
            "network" => Self::Network,
            "nearest" => Self::Nearest,
            "simulate" => Self::Simulate,
            "crossover" => Self::Crossover,
            "optimal-height" => Self::OptimalHeight,
            "channel" => Self::Channel,
            _ => return None,
        })
    }

    fn needs_geometry(self) -> bool {
        matches!(self, Self::General | Self::Sir | Self::Crossover | Self::Channel)
    }

    fn needs_network(self) -> bool {
        matches!(self, Self::Network | Self::Nearest)
    }
}

/// Quantity varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Tx(usize),
    Rx(usize),
    Interferer(usize),
    /// Horizontal distance from the receiver, keeping bearing and height.
    TxHorizontal,
    InterfererHorizontal,
    GammaT,
    InterfererPower,
    Noise,
    Density,
    NetworkRxHeight,
    NetworkInterfererHeight,
    ServingDistance,
}

impl Axis {
    fn parse(s: &str) -> Option<Self> {
        let coord = |c: &str| match c {
            "x" => Some(0),
            "y" => Some(1),
            "z" => Some(2),
            _ => None,
        };
        if let Some((node, c)) = s.split_once('.') {
            if let Some(i) = coord(c) {
                return match node {
                    "tx" => Some(Self::Tx(i)),
                    "rx" => Some(Self::Rx(i)),
                    "interferer" => Some(Self::Interferer(i)),
                    _ => None,
                };
            }
        }
        Some(match s {
            "tx.horizontal" => Self::TxHorizontal,
            "interferer.horizontal" => Self::InterfererHorizontal,
            "gamma_t" => Self::GammaT,
            "p_i" => Self::InterfererPower,
            "n_o" => Self::Noise,
            "lambda_i" => Self::Density,
            "rx_height" => Self::NetworkRxHeight,
            "interferer_height" => Self::NetworkInterfererHeight,
            "serving_distance" => Self::ServingDistance,
            _ => return None,
        })
    }

    pub fn is_height(self) -> bool {
        matches!(
            self,
            Self::Tx(2) | Self::Rx(2) | Self::Interferer(2) | Self::NetworkRxHeight | Self::NetworkInterfererHeight
        )
    }

    fn is_geometric(self) -> bool {
        matches!(
            self,
            Self::Tx(_) | Self::Rx(_) | Self::Interferer(_) | Self::TxHorizontal | Self::InterfererHorizontal
        )
    }

    fn is_network(self) -> bool {
        matches!(
            self,
            Self::Density | Self::NetworkRxHeight | Self::NetworkInterfererHeight | Self::ServingDistance
        )
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |i: &usize| ["x", "y", "z"][*i];
        match self {
            Self::Tx(i) => write!(f, "tx.{}", c(i)),
            Self::Rx(i) => write!(f, "rx.{}", c(i)),
            Self::Interferer(i) => write!(f, "interferer.{}", c(i)),
            Self::TxHorizontal => f.write_str("tx.horizontal"),
            Self::InterfererHorizontal => f.write_str("interferer.horizontal"),
            Self::GammaT => f.write_str("gamma_t"),
            Self::InterfererPower => f.write_str("p_i"),
            Self::Noise => f.write_str("n_o"),
            Self::Density => f.write_str("lambda_i"),
            Self::NetworkRxHeight => f.write_str("rx_height"),
            Self::NetworkInterfererHeight => f.write_str("interferer_height"),
            Self::ServingDistance => f.write_str("serving_distance"),
        }
    }
}

/// Outage minimised in `optimal-height` mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    General,
    Sir,
    Network,
    Nearest,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub tx: [f64; 3],
    pub rx: [f64; 3],
    pub interferer: [f64; 3],
    /// Keeps the interferer at the receiver's altitude, so its link length
    /// stays fixed while the receiver climbs.
    pub interferer_tracks_rx: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkSection {
    pub params: NetworkParams<f64>,
    /// Serving node at this horizontal distance; absent means nearest-node
    /// association averaged over the node process.
    pub serving_distance: Option<f64>,
    /// Interferers fly at the receiver's altitude.
    pub interferer_tracks_rx: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub axis: Axis,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub objective: Objective,
    pub tolerance: f64,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let n = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / n
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Simulation {
    pub trials: u64,
    pub seed: u64,
    pub mode: SimMode,
}

impl Default for Simulation {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 1,
            mode: SimMode::Sinr,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub mode: Mode,
    pub geometry: Option<Geometry>,
    pub env: EnvironmentParams<f64>,
    pub radio: RadioParams<f64>,
    pub network: Option<NetworkSection>,
    pub sweep: Sweep,
    pub simulation: Simulation,
}

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    line: usize,
}

type Section = HashMap<String, Entry>;

const SECTIONS: [(&str, &[&str]); 7] = [
    ("", &["mode"]),
    ("geometry", &["tx", "rx", "interferer", "interferer_tracks_rx"]),
    (
        "environment",
        &[
            "preset",
            "zeta",
            "nu",
            "mu",
            "alpha_los",
            "alpha_nlos",
            "k_los",
            "k_nlos",
        ],
    ),
    ("radio", &["p_m", "p_i", "n_o", "gamma_t", "rt_bps", "bandwidth_hz"]),
    (
        "network",
        &[
            "lambda_i",
            "rx_height",
            "nakagami_m",
            "k_main",
            "interferer_height",
            "deployment_radius",
            "serving_distance",
            "interferer_tracks_rx",
            "bounded",
        ],
    ),
    ("sweep", &["variable", "min", "max", "steps", "objective", "tolerance"]),
    ("simulation", &["trials", "seed", "mode"]),
];

/// Splits the text into sections, rejecting unknown sections and keys and
/// repeated keys.
fn tokenize(text: &str) -> Result<HashMap<&'static str, Section>, ConfigError> {
    let mut sections: HashMap<&'static str, Section> = HashMap::new();
    sections.insert("", Section::new());
    let mut seen_headers: HashMap<&'static str, usize> = HashMap::new();
    let mut current: &'static str = "";
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::at(line, "malformed section header"))?
                .trim();
            let (known, _) = SECTIONS
                .iter()
                .find(|(s, _)| !s.is_empty() && *s == name)
                .ok_or_else(|| ConfigError::at(line, format!("unknown section [{name}]")))?;
            if let Some(first) = seen_headers.insert(known, line) {
                return Err(ConfigError::at(
                    line,
                    format!("section [{name}] repeated (first on line {first})"),
                ));
            }
            sections.insert(known, Section::new());
            current = known;
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line, format!("expected `key = value`, found `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let allowed = SECTIONS
            .iter()
            .find(|(s, _)| *s == current)
            .map(|(_, k)| *k)
            .unwrap_or(&[]);
        if !allowed.contains(&key) {
            let place = if current.is_empty() {
                "top level".to_string()
            } else {
                format!("[{current}]")
            };
            return Err(ConfigError::key(line, key, format!("unknown key at {place}")));
        }
        if value.is_empty() {
            return Err(ConfigError::key(line, key, "missing value"));
        }
        let section = sections.get_mut(current).expect("section inserted on header");
        if let Some(prev) = section.get(key) {
            return Err(ConfigError::key(
                line,
                key,
                format!("duplicate key (first on line {})", prev.line),
            ));
        }
        section.insert(
            key.to_string(),
            Entry {
                value: value.to_string(),
                line,
            },
        );
    }
    Ok(sections)
}

struct Reader<'a> {
    section: Option<&'a Section>,
}

impl<'a> Reader<'a> {
    fn entry(&self, key: &str) -> Option<&'a Entry> {
        self.section.and_then(|s| s.get(key))
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.entry(key).map(|e| e.line)
    }

    fn str(&self, key: &str) -> Option<(&'a str, usize)> {
        self.entry(key).map(|e| (e.value.as_str(), e.line))
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.entry(key)
            .map(|e| {
                e.value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| ConfigError::key(e.line, key, format!("expected a number, found `{}`", e.value)))
            })
            .transpose()
    }

    fn f64_or(&self, key: &str, default: f64, what: &str) -> Result<f64, ConfigError> {
        Ok(match self.f64(key)? {
            Some(v) => v,
            None => {
                log::info!("{what}: {key} defaults to {default}");
                default
            }
        })
    }

    fn u64(&self, key: &str) -> Result<Option<u64>, ConfigError> {
        self.entry(key)
            .map(|e| {
                e.value.parse::<u64>().map_err(|_| {
                    ConfigError::key(
                        e.line,
                        key,
                        format!("expected a non-negative integer, found `{}`", e.value),
                    )
                })
            })
            .transpose()
    }

    fn point(&self, key: &str) -> Result<Option<[f64; 3]>, ConfigError> {
        self.entry(key)
            .map(|e| {
                let parts: Vec<f64> = e
                    .value
                    .split(',')
                    .map(|p| p.trim().parse::<f64>().ok().filter(|v| v.is_finite()))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| ConfigError::key(e.line, key, format!("expected `x, y, z`, found `{}`", e.value)))?;
                <[f64; 3]>::try_from(parts).map_err(|_| {
                    ConfigError::key(e.line, key, format!("expected three coordinates, found `{}`", e.value))
                })
            })
            .transpose()
    }

    fn bool(&self, key: &str) -> Result<Option<bool>, ConfigError> {
        self.entry(key)
            .map(|e| match e.value.as_str() {
                "true" => Ok(true),
                "false" => Ok(false),
                v => Err(ConfigError::key(
                    e.line,
                    key,
                    format!("expected true or false, found `{v}`"),
                )),
            })
            .transpose()
    }
}

/// Maps a parameter-validation failure onto the line of the offending key.
fn attach(err: CoreError, reader: &Reader<'_>, fallback: usize) -> ConfigError {
    match err {
        CoreError::InvalidParameter { name, detail } => {
            ConfigError::key(reader.line(name).unwrap_or(fallback), name, detail)
        }
        other => ConfigError::at(fallback, other.to_string()),
    }
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let sections = tokenize(text)?;
    let reader = |name: &str| Reader {
        section: sections.get(name),
    };
    let header_line = |name: &str| {
        text.lines()
            .position(|l| l.split('#').next().unwrap_or("").trim() == format!("[{name}]"))
            .map(|i| i + 1)
            .unwrap_or(0)
    };

    let top = reader("");
    let mode = match top.str("mode") {
        Some((v, line)) => {
            Mode::parse(v).ok_or_else(|| ConfigError::key(line, "mode", format!("unknown mode `{v}`")))?
        }
        None => {
            log::info!("mode defaults to general");
            Mode::General
        }
    };

    let env = parse_environment(&reader("environment"), header_line("environment"))?;
    let radio = parse_radio(&reader("radio"), header_line("radio"))?;

    let geometry = match sections.get("geometry") {
        Some(_) => Some(parse_geometry(&reader("geometry"), header_line("geometry"))?),
        None => None,
    };
    let network = match sections.get("network") {
        Some(_) => Some(parse_network(&reader("network"), header_line("network"))?),
        None => None,
    };
    let simulation = parse_simulation(&reader("simulation"))?;
    let sweep = match sections.get("sweep") {
        Some(_) => parse_sweep(&reader("sweep"), header_line("sweep"))?,
        None => return Err(ConfigError::at(0, "missing mandatory section [sweep]")),
    };

    if mode.needs_geometry() && geometry.is_none() {
        return Err(ConfigError::at(0, "missing mandatory section [geometry]"));
    }
    if mode.needs_network() && network.is_none() {
        return Err(ConfigError::at(0, "missing mandatory section [network]"));
    }
    if mode == Mode::Simulate && geometry.is_none() && network.is_none() {
        return Err(ConfigError::at(
            0,
            "simulate mode needs a [geometry] or [network] section",
        ));
    }
    if mode == Mode::OptimalHeight {
        let obj_network = matches!(sweep.objective, Objective::Network | Objective::Nearest);
        if obj_network && network.is_none() {
            return Err(ConfigError::at(
                0,
                "missing mandatory section [network] for this objective",
            ));
        }
        if !obj_network && geometry.is_none() {
            return Err(ConfigError::at(
                0,
                "missing mandatory section [geometry] for this objective",
            ));
        }
    }
    let sweep_reader = reader("sweep");
    let var_line = sweep_reader.line("variable").unwrap_or(0);
    let uses_network =
        network.is_some() && (mode.needs_network() || matches!(mode, Mode::Simulate | Mode::OptimalHeight));
    if sweep.axis.is_geometric() && geometry.is_none() {
        return Err(ConfigError::key(
            var_line,
            "variable",
            format!("`{}` needs a [geometry] section", sweep.axis),
        ));
    }
    if sweep.axis.is_network() && !uses_network {
        return Err(ConfigError::key(
            var_line,
            "variable",
            format!("`{}` needs a [network] section", sweep.axis),
        ));
    }
    if sweep.axis == Axis::NetworkInterfererHeight && network.is_some_and(|n| n.interferer_tracks_rx) {
        return Err(ConfigError::key(
            var_line,
            "variable",
            "interferer_height follows rx_height here",
        ));
    }
    if sweep.axis == Axis::ServingDistance && network.is_some_and(|n| n.serving_distance.is_none()) {
        return Err(ConfigError::key(
            var_line,
            "variable",
            "serving_distance sweep needs a serving_distance in [network]",
        ));
    }
    if mode == Mode::OptimalHeight && !sweep.axis.is_height() {
        return Err(ConfigError::key(
            var_line,
            "variable",
            format!("optimal-height needs a height axis, not `{}`", sweep.axis),
        ));
    }
    if mode == Mode::Crossover && sweep.steps < 2 {
        return Err(ConfigError::key(
            sweep_reader.line("steps").unwrap_or(var_line),
            "steps",
            "crossover needs at least two sweep points",
        ));
    }

    Ok(ScenarioConfig {
        mode,
        geometry,
        env,
        radio,
        network,
        sweep,
        simulation,
    })
}

fn parse_environment(r: &Reader<'_>, header: usize) -> Result<EnvironmentParams<f64>, ConfigError> {
    let mut env = match r.str("preset") {
        Some((name, line)) => EnvironmentParams::preset(name)
            .ok_or_else(|| ConfigError::key(line, "preset", format!("unknown preset `{name}`")))?,
        None => EnvironmentParams::dense_urban(),
    };
    let fields: [(&str, &mut f64); 7] = [
        ("zeta", &mut env.zeta),
        ("nu", &mut env.nu),
        ("mu", &mut env.mu),
        ("alpha_los", &mut env.alpha_los),
        ("alpha_nlos", &mut env.alpha_nlos),
        ("k_los", &mut env.k_los),
        ("k_nlos", &mut env.k_nlos),
    ];
    for (key, slot) in fields {
        if let Some(v) = r.f64(key)? {
            *slot = v;
        }
    }
    env.validate().map_err(|e| attach(e, r, header))?;
    Ok(env)
}

fn parse_radio(r: &Reader<'_>, header: usize) -> Result<RadioParams<f64>, ConfigError> {
    let d = RadioParams::<f64>::default();
    let p_m = r.f64_or("p_m", d.p_m, "radio")?;
    let p_i = r.f64_or("p_i", d.p_i, "radio")?;
    let n_o = r.f64_or("n_o", d.n_o, "radio")?;
    let gamma_t = match (r.f64("gamma_t")?, r.f64("rt_bps")?) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::key(
                r.line("rt_bps").unwrap_or(header),
                "rt_bps",
                "gamma_t and rt_bps both set; the threshold is ambiguous",
            ))
        }
        (Some(g), None) => g,
        (None, Some(rate)) => {
            let w = r.f64_or("bandwidth_hz", 1e4, "radio")?;
            RadioParams::threshold_from_rate(rate, w).map_err(|e| attach(e, r, header))?
        }
        (None, None) => {
            log::info!("radio: gamma_t defaults to {}", d.gamma_t);
            d.gamma_t
        }
    };
    let radio = RadioParams { p_m, p_i, n_o, gamma_t };
    radio.validate().map_err(|e| attach(e, r, header))?;
    Ok(radio)
}

fn parse_geometry(r: &Reader<'_>, header: usize) -> Result<Geometry, ConfigError> {
    let need = |key: &str| -> Result<[f64; 3], ConfigError> {
        r.point(key)?
            .ok_or_else(|| ConfigError::key(header, key, "missing in [geometry]"))
    };
    let g = Geometry {
        tx: need("tx")?,
        rx: need("rx")?,
        interferer: need("interferer")?,
        interferer_tracks_rx: r.bool("interferer_tracks_rx")?.unwrap_or(false),
    };
    for key in ["tx", "rx", "interferer"] {
        let p = match key {
            "tx" => g.tx,
            "rx" => g.rx,
            _ => g.interferer,
        };
        if p[2] < 0.0 {
            return Err(ConfigError::key(
                r.line(key).unwrap_or(header),
                key,
                "height must be non-negative",
            ));
        }
    }
    Ok(g)
}

fn parse_network(r: &Reader<'_>, header: usize) -> Result<NetworkSection, ConfigError> {
    let lambda_i = r
        .f64("lambda_i")?
        .ok_or_else(|| ConfigError::key(header, "lambda_i", "missing in [network]"))?;
    let rx_height = r.f64_or("rx_height", 0.0, "network")?;
    let m = match (r.u64("nakagami_m")?, r.f64("k_main")?) {
        (Some(_), Some(_)) => {
            return Err(ConfigError::key(
                r.line("k_main").unwrap_or(header),
                "k_main",
                "nakagami_m and k_main both set",
            ))
        }
        (Some(m), None) => u32::try_from(m).ok().filter(|&m| m >= 1).ok_or_else(|| {
            ConfigError::key(
                r.line("nakagami_m").unwrap_or(header),
                "nakagami_m",
                "must be a positive integer",
            )
        })?,
        (None, Some(k)) => nakagami_m_integer(k)
            .map_err(|e| ConfigError::key(r.line("k_main").unwrap_or(header), "k_main", e.to_string()))?,
        (None, None) => {
            log::info!("network: nakagami_m defaults to 2");
            2
        }
    };
    let mut params = NetworkParams::new(lambda_i, rx_height, m).map_err(|e| attach(e, r, header))?;
    let interferer_tracks_rx = r.bool("interferer_tracks_rx")?.unwrap_or(false);
    params.interferer_height = match (interferer_tracks_rx, r.f64("interferer_height")?) {
        (true, Some(_)) => {
            return Err(ConfigError::key(
                r.line("interferer_height").unwrap_or(header),
                "interferer_height",
                "conflicts with interferer_tracks_rx",
            ))
        }
        (true, None) => rx_height,
        (false, h) => h.unwrap_or(0.0),
    };
    params.deployment_radius = r.f64_or("deployment_radius", params.deployment_radius, "network")?;
    params.bounded = r.bool("bounded")?.unwrap_or(false);
    params.validate().map_err(|e| attach(e, r, header))?;
    let serving_distance = r.f64("serving_distance")?;
    if let Some(d) = serving_distance {
        if d < 0.0 || d >= params.deployment_radius {
            return Err(ConfigError::key(
                r.line("serving_distance").unwrap_or(header),
                "serving_distance",
                "must lie in [0, deployment_radius)",
            ));
        }
    }
    Ok(NetworkSection {
        params,
        serving_distance,
        interferer_tracks_rx,
    })
}

fn parse_sweep(r: &Reader<'_>, header: usize) -> Result<Sweep, ConfigError> {
    let (name, var_line) = r
        .str("variable")
        .ok_or_else(|| ConfigError::key(header, "variable", "missing in [sweep]"))?;
    let axis = Axis::parse(name)
        .ok_or_else(|| ConfigError::key(var_line, "variable", format!("unknown sweep variable `{name}`")))?;
    let min = r
        .f64("min")?
        .ok_or_else(|| ConfigError::key(header, "min", "missing in [sweep]"))?;
    let steps = r.u64("steps")?.unwrap_or(1);
    let steps_line = r.line("steps").unwrap_or(header);
    if steps == 0 || steps > 1_000_000 {
        return Err(ConfigError::key(steps_line, "steps", "must lie in [1, 1000000]"));
    }
    let max = match r.f64("max")? {
        Some(v) => v,
        None if steps == 1 => min,
        None => return Err(ConfigError::key(header, "max", "missing in [sweep]")),
    };
    if steps > 1 && max == min {
        return Err(ConfigError::key(
            r.line("max").unwrap_or(header),
            "max",
            "must differ from min when steps > 1",
        ));
    }
    let objective = match r.str("objective") {
        Some((v, line)) => match v {
            "general" => Objective::General,
            "sir" => Objective::Sir,
            "network" => Objective::Network,
            "nearest" => Objective::Nearest,
            _ => return Err(ConfigError::key(line, "objective", format!("unknown objective `{v}`"))),
        },
        None => Objective::Sir,
    };
    let tolerance = r.f64("tolerance")?.unwrap_or(0.5);
    if tolerance <= 0.0 {
        return Err(ConfigError::key(
            r.line("tolerance").unwrap_or(header),
            "tolerance",
            "must be positive",
        ));
    }
    Ok(Sweep {
        axis,
        min,
        max,
        steps: steps as usize,
        objective,
        tolerance,
    })
}

fn parse_simulation(r: &Reader<'_>) -> Result<Simulation, ConfigError> {
    let d = Simulation::default();
    let trials = r.u64("trials")?.unwrap_or(d.trials);
    if trials == 0 {
        return Err(ConfigError::key(
            r.line("trials").unwrap_or(0),
            "trials",
            "must be at least 1",
        ));
    }
    let mode = match r.str("mode") {
        Some(("sinr", _)) | None => SimMode::Sinr,
        Some(("sir", _)) => SimMode::Sir,
        Some((v, line)) => {
            return Err(ConfigError::key(
                line,
                "mode",
                format!("expected sinr or sir, found `{v}`"),
            ))
        }
    };
    Ok(Simulation {
        trials,
        seed: r.u64("seed")?.unwrap_or(d.seed),
        mode,
    })
}
