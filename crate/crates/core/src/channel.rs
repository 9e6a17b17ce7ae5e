//! Link geometry and the distance-dependent propagation model.

use crate::error::{domain, invalid, Result};
use crate::specfun::gaussian::q_unchecked;
use crate::Real;

/// Below this vertical separation the equal-height LoS expression is used.
pub const EQUAL_HEIGHT_EPS: f64 = 1e-9;

/// Propagation state of a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkState {
    Los,
    Nlos,
}

impl LinkState {
    pub const BOTH: [LinkState; 2] = [LinkState::Los, LinkState::Nlos];
}

/// Transmitter and receiver positions in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry<T> {
    pub tx: [T; 3],
    pub rx: [T; 3],
}

impl<T: Real> LinkGeometry<T> {
    pub fn new(tx: [T; 3], rx: [T; 3]) -> Result<Self> {
        for (name, p) in [("tx_position", tx), ("rx_position", rx)] {
            if p.iter().any(|c| !c.is_finite()) {
                return Err(invalid(name, "coordinates must be finite"));
            }
            if p[2] < T::zero() {
                return Err(invalid(name, format!("height must be non-negative, got {}", p[2])));
            }
        }
        Ok(Self { tx, rx })
    }

    /// Transmitter at horizontal offset `d_h` along x and height `tx_height`,
    /// receiver above the origin at `rx_height`.
    pub fn planar(d_h: T, tx_height: T, rx_height: T) -> Result<Self> {
        Self::new([d_h, T::zero(), tx_height], [T::zero(), T::zero(), rx_height])
    }

    pub fn horizontal(&self) -> T {
        (self.tx[0] - self.rx[0]).hypot(self.tx[1] - self.rx[1])
    }

    pub fn vertical(&self) -> T {
        (self.tx[2] - self.rx[2]).abs()
    }

    pub fn length(&self) -> T {
        let h = self.horizontal();
        let v = self.vertical();
        (h * h + v * v).sqrt()
    }

    /// Converts to another scalar type.
    pub fn cast<U: Real>(&self) -> LinkGeometry<U> {
        let c = |p: [T; 3]| p.map(|v| U::lit(v.as_f64()));
        LinkGeometry {
            tx: c(self.tx),
            rx: c(self.rx),
        }
    }

    pub fn tx_height(&self) -> T {
        self.tx[2]
    }

    pub fn rx_height(&self) -> T {
        self.rx[2]
    }
}

/// Building-environment and propagation constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvironmentParams<T> {
    /// Building height scale ζ in metres.
    pub zeta: T,
    /// Building density ν per square metre.
    pub nu: T,
    /// Fraction of built-up land μ.
    pub mu: T,
    pub alpha_los: T,
    pub alpha_nlos: T,
    pub k_los: T,
    pub k_nlos: T,
}

impl<T: Real> EnvironmentParams<T> {
    pub fn dense_urban() -> Self {
        Self {
            zeta: T::lit(20.0),
            nu: T::lit(3e-4),
            mu: T::lit(0.5),
            alpha_los: T::lit(2.0),
            alpha_nlos: T::lit(3.5),
            k_los: T::lit(15.0),
            k_nlos: T::lit(1.0),
        }
    }

    /// Looks up a named preset.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "dense-urban" => Some(Self::dense_urban()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: T| v.is_finite() && v > T::zero();
        if !pos(self.zeta) {
            return Err(invalid("zeta", "must be positive"));
        }
        if !pos(self.nu) {
            return Err(invalid("nu", "must be positive"));
        }
        if !(pos(self.mu) && self.mu <= T::one()) {
            return Err(invalid("mu", "must lie in (0, 1]"));
        }
        if !(self.alpha_los.is_finite() && self.alpha_los >= T::lit(2.0)) {
            return Err(invalid("alpha_los", "must be at least 2"));
        }
        if !(self.alpha_nlos.is_finite() && self.alpha_los <= self.alpha_nlos) {
            return Err(invalid(
                "alpha_los",
                format!("must not exceed alpha_nlos ({} > {})", self.alpha_los, self.alpha_nlos),
            ));
        }
        if !pos(self.k_nlos) {
            return Err(invalid("k_nlos", "must be positive"));
        }
        if !(self.k_los.is_finite() && self.k_nlos <= self.k_los) {
            return Err(invalid(
                "k_nlos",
                format!("must not exceed k_los ({} > {})", self.k_nlos, self.k_los),
            ));
        }
        Ok(())
    }

    pub fn cast<U: Real>(&self) -> EnvironmentParams<U> {
        let c = |v: T| U::lit(v.as_f64());
        EnvironmentParams {
            zeta: c(self.zeta),
            nu: c(self.nu),
            mu: c(self.mu),
            alpha_los: c(self.alpha_los),
            alpha_nlos: c(self.alpha_nlos),
            k_los: c(self.k_los),
            k_nlos: c(self.k_nlos),
        }
    }

    /// `√(νμ)`, the per-metre exponent of the LoS probability.
    pub fn building_rate(&self) -> T {
        (self.nu * self.mu).sqrt()
    }
}

impl<T: Real> Default for EnvironmentParams<T> {
    fn default() -> Self {
        Self::dense_urban()
    }
}

/// Transmit powers, noise power and SINR threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioParams<T> {
    pub p_m: T,
    pub p_i: T,
    pub n_o: T,
    pub gamma_t: T,
}

impl<T: Real> RadioParams<T> {
    pub fn new(p_m: T, p_i: T, n_o: T, gamma_t: T) -> Result<Self> {
        let r = Self { p_m, p_i, n_o, gamma_t };
        r.validate()?;
        Ok(r)
    }

    /// Threshold for a target rate over a bandwidth: `γ = 2^{R/W} − 1`.
    pub fn threshold_from_rate(rate_bps: T, bandwidth_hz: T) -> Result<T> {
        if !(rate_bps.is_finite() && rate_bps > T::zero()) {
            return Err(invalid("rt_bps", "must be positive"));
        }
        if !(bandwidth_hz.is_finite() && bandwidth_hz > T::zero()) {
            return Err(invalid("bandwidth_hz", "must be positive"));
        }
        Ok((rate_bps / bandwidth_hz).exp2() - T::one())
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: T| v.is_finite() && v > T::zero();
        if !pos(self.p_m) {
            return Err(invalid("p_m", "must be positive"));
        }
        if !pos(self.p_i) {
            return Err(invalid("p_i", "must be positive"));
        }
        if !(self.n_o.is_finite() && self.n_o >= T::zero()) {
            return Err(invalid("n_o", "must be non-negative"));
        }
        if !pos(self.gamma_t) {
            return Err(invalid("gamma_t", "must be positive"));
        }
        Ok(())
    }

    pub fn cast<U: Real>(&self) -> RadioParams<U> {
        let c = |v: T| U::lit(v.as_f64());
        RadioParams {
            p_m: c(self.p_m),
            p_i: c(self.p_i),
            n_o: c(self.n_o),
            gamma_t: c(self.gamma_t),
        }
    }

    pub fn with_noise(self, n_o: T) -> Self {
        Self { n_o, ..self }
    }

    pub fn with_threshold(self, gamma_t: T) -> Self {
        Self { gamma_t, ..self }
    }
}

impl<T: Real> Default for RadioParams<T> {
    fn default() -> Self {
        Self {
            p_m: T::lit(1e-8),
            p_i: T::lit(1e-8),
            n_o: T::lit(5e-17),
            gamma_t: T::lit(2.0),
        }
    }
}

/// LoS probability of a link.
pub fn los_probability<T: Real>(link: &LinkGeometry<T>, env: &EnvironmentParams<T>) -> T {
    let profile = LosProfile::new(link.tx_height(), link.rx_height(), env);
    if link.vertical() < T::lit(EQUAL_HEIGHT_EPS) {
        profile.probability(link.length())
    } else {
        profile.probability(link.horizontal())
    }
}

/// LoS probability as a function of horizontal distance for fixed endpoint
/// heights, `p_L(d_H) = base^{d_H √(νμ)}`.
///
/// For equal heights the exponent distance is the slant length, which then
/// coincides with `d_H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LosProfile<T> {
    base: T,
    rate: T,
}

impl<T: Real> LosProfile<T> {
    pub fn new(z_tx: T, z_rx: T, env: &EnvironmentParams<T>) -> Self {
        let d_v = (z_tx - z_rx).abs();
        let base = if d_v < T::lit(EQUAL_HEIGHT_EPS) {
            let s = z_tx / env.zeta;
            -(-(s * s) * T::lit(0.5)).exp_m1()
        } else {
            let diff = (q_unchecked(z_tx / env.zeta) - q_unchecked(z_rx / env.zeta)).abs();
            T::one() - (T::TAU()).sqrt() * env.zeta / d_v * diff
        };
        let base = base.max(T::zero()).min(T::one());
        Self {
            base,
            rate: env.building_rate() * base.ln(),
        }
    }

    pub fn probability(&self, d_h: T) -> T {
        if d_h == T::zero() {
            return T::one();
        }
        if self.base == T::zero() {
            return T::zero();
        }
        (self.rate * d_h).exp()
    }

    pub fn base(&self) -> T {
        self.base
    }
}

fn check_probability<T: Real>(function: &'static str, p: T) -> Result<()> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(domain(function, format!("probability must lie in [0, 1], got {p}")));
    }
    Ok(())
}

/// Path-loss exponent interpolated linearly in the LoS probability.
pub fn path_loss_exponent<T: Real>(p_los: T, env: &EnvironmentParams<T>) -> Result<T> {
    check_probability("path_loss_exponent", p_los)?;
    Ok(path_loss_exponent_unchecked(p_los, env))
}

pub(crate) fn path_loss_exponent_unchecked<T: Real>(p_los: T, env: &EnvironmentParams<T>) -> T {
    (env.alpha_los - env.alpha_nlos) * p_los + env.alpha_nlos
}

/// Rician factor interpolated log-quadratically in the LoS probability.
pub fn rician_factor<T: Real>(p_los: T, env: &EnvironmentParams<T>) -> Result<T> {
    check_probability("rician_factor", p_los)?;
    Ok(rician_factor_unchecked(p_los, env))
}

pub(crate) fn rician_factor_unchecked<T: Real>(p_los: T, env: &EnvironmentParams<T>) -> T {
    env.k_nlos * ((env.k_los / env.k_nlos).ln() * p_los * p_los).exp()
}

/// Mean received power `ℓ^{-α(ℓ)} · P`.
pub fn mean_received_power<T: Real>(link: &LinkGeometry<T>, env: &EnvironmentParams<T>, tx_power: T) -> Result<T> {
    let l = link.length();
    if l <= T::zero() {
        return Err(domain("mean_received_power", "link length is zero"));
    }
    let alpha = path_loss_exponent_unchecked(los_probability(link, env), env);
    Ok(received_power(l, alpha, tx_power))
}

pub(crate) fn received_power<T: Real>(length: T, alpha: T, tx_power: T) -> T {
    (-alpha * length.ln()).exp() * tx_power
}

/// Per-link quantities the outage formulas consume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget<T> {
    pub p_los: T,
    pub k: T,
    pub alpha: T,
    pub beta: T,
}

impl<T: Real> LinkBudget<T> {
    pub fn evaluate(link: &LinkGeometry<T>, env: &EnvironmentParams<T>, tx_power: T) -> Result<Self> {
        let p_los = los_probability(link, env);
        let alpha = path_loss_exponent_unchecked(p_los, env);
        let l = link.length();
        if l <= T::zero() {
            return Err(domain("mean_received_power", "link length is zero"));
        }
        Ok(Self {
            p_los,
            k: rician_factor_unchecked(p_los, env),
            alpha,
            beta: received_power(l, alpha, tx_power),
        })
    }

    pub fn weight(&self, state: LinkState) -> T {
        match state {
            LinkState::Los => self.p_los,
            LinkState::Nlos => T::one() - self.p_los,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn env() -> EnvironmentParams<f64> {
        EnvironmentParams::dense_urban()
    }

    #[test]
    fn coincident_endpoints_are_los() {
        let l = LinkGeometry::new([5.0, 5.0, 30.0], [5.0, 5.0, 30.0]).unwrap();
        assert_eq!(los_probability(&l, &env()), 1.0);
    }

    #[test]
    fn ground_level_link_is_nlos() {
        let l = LinkGeometry::planar(120.0, 0.0, 0.0).unwrap();
        assert_eq!(los_probability(&l, &env()), 0.0);
    }

    #[test]
    fn reference_value_ground_to_air() {
        let l = LinkGeometry::planar(150.0, 100.0, 0.0).unwrap();
        let got = los_probability(&l, &env());
        assert!((got - 0.588_528_650_892_642).abs() < 1e-12, "{got}");
    }

    #[test]
    fn branches_meet_at_equal_heights() {
        let e = env();
        let near = los_probability(&LinkGeometry::planar(100.0, 70.0001, 70.0).unwrap(), &e);
        let equal = los_probability(&LinkGeometry::planar(100.0, 70.0, 70.0).unwrap(), &e);
        assert!((near - equal).abs() < 1e-6, "{near} vs {equal}");
    }

    #[test]
    fn exponent_and_factor_at_endpoints() {
        let e = env();
        assert_eq!(path_loss_exponent(1.0, &e).unwrap(), 2.0);
        assert_eq!(path_loss_exponent(0.0, &e).unwrap(), 3.5);
        assert_eq!(path_loss_exponent(0.5, &e).unwrap(), 2.75);
        assert!((rician_factor(1.0, &e).unwrap() - 15.0).abs() < 1e-12);
        assert_eq!(rician_factor(0.0, &e).unwrap(), 1.0);
        let k = rician_factor(0.5, &e).unwrap();
        assert!((k - 1.967_989_671_265_430_3).abs() < 1e-14);
        assert!(path_loss_exponent(1.5, &e).is_err());
        assert!(rician_factor(-0.1, &e).is_err());
    }

    #[test]
    fn received_power_reference() {
        let e = env();
        let l = LinkGeometry::planar(180.0, 75.0, 0.0).unwrap();
        let got = mean_received_power(&l, &e, 1e-8).unwrap();
        assert!((got / 2.433_508_886_865_915_8e-15 - 1.0).abs() < 1e-12, "{got}");
        let doubled = mean_received_power(&l, &e, 2e-8).unwrap();
        assert!((doubled / got - 2.0).abs() < 1e-15);
    }

    #[test]
    fn unit_length_returns_tx_power() {
        let l = LinkGeometry::planar(0.6, 0.8, 0.0).unwrap();
        let got = mean_received_power(&l, &env(), 3e-7).unwrap();
        assert!((got - 3e-7).abs() < 1e-22);
        let zero = LinkGeometry::planar(0.0, 10.0, 10.0).unwrap();
        assert!(mean_received_power(&zero, &env(), 1.0).is_err());
    }

    #[test]
    fn threshold_from_rate() {
        let g = RadioParams::threshold_from_rate(1e4_f64, 1e4).unwrap();
        assert!((g - 1.0).abs() < 1e-15);
        let g = RadioParams::threshold_from_rate(1.584_962_500_721_156e4_f64, 1e4).unwrap();
        assert!((g - 2.0).abs() < 1e-12);
    }

    #[test]
    fn invariants_rejected() {
        let mut e = env();
        e.alpha_los = 4.0;
        e.alpha_nlos = 2.0;
        assert!(e.validate().is_err());
        let mut e = env();
        e.k_nlos = 20.0;
        assert!(e.validate().is_err());
        assert!(LinkGeometry::new([0.0, 0.0, -1.0], [0.0; 3]).is_err());
        assert!(RadioParams::new(1e-8, 1e-8, -1.0, 2.0).is_err());
    }

    #[test]
    fn single_precision_geometry() {
        let l = LinkGeometry::<f32>::planar(150.0, 100.0, 0.0).unwrap();
        let p = los_probability(&l, &EnvironmentParams::dense_urban());
        assert!((p as f64 - 0.588_528_650_892_642).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn slant_length_is_pythagorean(x in -500.0_f64..500.0, y in -500.0_f64..500.0,
                                       z1 in 0.0_f64..300.0, z2 in 0.0_f64..300.0) {
            let l = LinkGeometry::new([x, y, z1], [0.0, 0.0, z2]).unwrap();
            let (h, v, s) = (l.horizontal(), l.vertical(), l.length());
            prop_assert!((s * s - (h * h + v * v)).abs() <= 1e-9 * (1.0 + s * s));
        }

        #[test]
        fn los_probability_in_unit_interval(d in 0.0_f64..2000.0, z1 in 0.0_f64..400.0,
                                            z2 in 0.0_f64..400.0) {
            let p = los_probability(&LinkGeometry::planar(d, z1, z2).unwrap(), &env());
            prop_assert!((0.0..=1.0).contains(&p));
            prop_assert_eq!(p + (1.0 - p), 1.0);
        }

        #[test]
        fn los_probability_non_increasing_in_distance(d in 0.0_f64..1000.0, dd in 0.1_f64..100.0,
                                                      z1 in 0.0_f64..300.0, z2 in 0.0_f64..300.0) {
            let e = env();
            let near = los_probability(&LinkGeometry::planar(d, z1, z2).unwrap(), &e);
            let far = los_probability(&LinkGeometry::planar(d + dd, z1, z2).unwrap(), &e);
            prop_assert!(far <= near);
        }

        #[test]
        fn k_up_alpha_down_in_los(p in 0.0_f64..1.0, dp in 1e-4_f64..0.5) {
            let e = env();
            let q = (p + dp).min(1.0);
            prop_assert!(rician_factor(q, &e).unwrap() >= rician_factor(p, &e).unwrap());
            prop_assert!(path_loss_exponent(q, &e).unwrap() <= path_loss_exponent(p, &e).unwrap());
        }

        #[test]
        fn raising_the_uav_raises_los(d in 10.0_f64..800.0, z in 1.0_f64..300.0, dz in 0.5_f64..50.0) {
            // Ground receiver, UAV climbing: p_L, K up; alpha down.
            let e = env();
            let lo = LinkBudget::evaluate(&LinkGeometry::planar(d, z, 0.0).unwrap(), &e, 1.0).unwrap();
            let hi = LinkBudget::evaluate(&LinkGeometry::planar(d, z + dz, 0.0).unwrap(), &e, 1.0).unwrap();
            prop_assert!(hi.p_los >= lo.p_los);
            prop_assert!(hi.k >= lo.k);
            prop_assert!(hi.alpha <= lo.alpha);
        }
    }
}
