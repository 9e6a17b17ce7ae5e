//! Outage with interferers scattered as a Poisson point process.
//!
//! Transmitting nodes sit at a common height and the receiver hovers at
//! `rx_height`. The serving node is at horizontal distance `r`, and every
//! other node beyond `r` interferes. The interference Laplace transform
//! comes from the PGFL of the process and its `s`-derivatives from
//! differentiating under the integral sign.

use crate::channel::{
    path_loss_exponent_unchecked, received_power, rician_factor_unchecked, EnvironmentParams, LinkState, LosProfile,
    RadioParams,
};
use crate::error::{invalid, Error, Result};
use crate::outage::{clamp01, sir};
use crate::specfun::quadrature::{integrate, integrate_semi_infinite_scaled, QuadratureSpec};
use crate::Real;

/// How far `m` may sit from an integer before it is rejected.
pub const NAKAGAMI_INTEGER_TOLERANCE: f64 = 1e-6;

/// Density, geometry and main-link fading shape of the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkParams<T> {
    /// Node density λ per square metre.
    pub lambda_i: T,
    /// Radius of the simulated disk in metres.
    pub deployment_radius: T,
    pub rx_height: T,
    /// Nakagami shape of the main-link gain when the main link is LoS.
    pub nakagami_m: u32,
    /// Height of every transmitting node, 0 for ground nodes.
    pub interferer_height: T,
    /// Stop the analytical interference field at `deployment_radius` instead
    /// of integrating to infinity. Nodes at the receiver's altitude are
    /// almost surely LoS, and with a free-space exponent their unbounded
    /// interference diverges.
    pub bounded: bool,
}

impl<T: Real> NetworkParams<T> {
    pub fn new(lambda_i: T, rx_height: T, nakagami_m: u32) -> Result<Self> {
        let n = Self {
            lambda_i,
            deployment_radius: T::lit(5000.0),
            rx_height,
            nakagami_m,
            interferer_height: T::zero(),
            bounded: false,
        };
        n.validate()?;
        Ok(n)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_i.is_finite() && self.lambda_i > T::zero()) {
            return Err(invalid("lambda_i", "must be positive"));
        }
        if !(self.deployment_radius.is_finite() && self.deployment_radius > T::zero()) {
            return Err(invalid("deployment_radius", "must be positive"));
        }
        if !(self.rx_height.is_finite() && self.rx_height >= T::zero()) {
            return Err(invalid("rx_height", "must be non-negative"));
        }
        if !(self.interferer_height.is_finite() && self.interferer_height >= T::zero()) {
            return Err(invalid("interferer_height", "must be non-negative"));
        }
        if self.nakagami_m == 0 {
            return Err(invalid("nakagami_m", "must be at least 1"));
        }
        Ok(())
    }

    pub fn cast<U: Real>(&self) -> NetworkParams<U> {
        let c = |v: T| U::lit(v.as_f64());
        NetworkParams {
            lambda_i: c(self.lambda_i),
            deployment_radius: c(self.deployment_radius),
            rx_height: c(self.rx_height),
            nakagami_m: self.nakagami_m,
            interferer_height: c(self.interferer_height),
            bounded: self.bounded,
        }
    }

    pub fn with_rx_height(self, rx_height: T) -> Self {
        Self { rx_height, ..self }
    }

    pub fn with_density(self, lambda_i: T) -> Self {
        Self { lambda_i, ..self }
    }

    /// Vertical offset between the transmitting nodes and the receiver.
    pub fn vertical(&self) -> T {
        (self.interferer_height - self.rx_height).abs()
    }
}

/// Nakagami shape that matches a Rician factor: `(K+1)²/(2K+1)`.
pub fn nakagami_m_from_k<T: Real>(k: T) -> T {
    let one = T::one();
    (k + one) * (k + one) / (T::lit(2.0) * k + one)
}

/// The integer shape implied by `k`, or a configuration error when it is
/// not within [`NAKAGAMI_INTEGER_TOLERANCE`] of one.
pub fn nakagami_m_integer<T: Real>(k: T) -> Result<u32> {
    let m = nakagami_m_from_k(k).as_f64();
    let r = m.round();
    if (m - r).abs() > NAKAGAMI_INTEGER_TOLERANCE || r < 1.0 {
        return Err(Error::Configuration(format!(
            "Rician factor {k} maps to Nakagami shape {m}, which is not an integer; \
             the LoS main-link expression needs an integer shape"
        )));
    }
    Ok(r as u32)
}

/// Rician factor whose matching Nakagami shape is `m`: the positive root of
/// `K² + 2(1−m)K + 1 − m = 0`.
pub fn k_for_nakagami_m<T: Real>(m: u32) -> T {
    let m = T::lit(m as f64);
    let one = T::one();
    (m - one) + (m * m - m).sqrt()
}

/// Interferers at horizontal distances beyond a guard radius.
#[derive(Debug, Clone, Copy)]
struct Field<T> {
    profile: LosProfile<T>,
    dz2: T,
    env: EnvironmentParams<T>,
    p_i: T,
    lambda: T,
    guard: T,
    outer: Option<T>,
    scale: T,
}

impl<T: Real> Field<T> {
    fn new(net: &NetworkParams<T>, env: &EnvironmentParams<T>, radio: &RadioParams<T>, guard: T) -> Self {
        let dz = net.vertical();
        Self {
            profile: LosProfile::new(net.interferer_height, net.rx_height, env),
            dz2: dz * dz,
            env: *env,
            p_i: radio.p_i,
            lambda: net.lambda_i,
            guard,
            outer: net.bounded.then_some(net.deployment_radius),
            scale: guard.max(dz).max(T::lit(10.0)),
        }
    }

    /// `(p_L, K, β_I)` of an interferer at horizontal distance `t`.
    fn at(&self, t: T) -> (T, T, T) {
        let p = self.profile.probability(t);
        let alpha = path_loss_exponent_unchecked(p, &self.env);
        let l = (t * t + self.dz2).sqrt();
        (
            p,
            rician_factor_unchecked(p, &self.env),
            received_power(l, alpha, self.p_i),
        )
    }

    /// `σ^k η^{(k)}(s)` for `k = 0..=k_max`, where `η = ln L_I`.
    fn exponent_derivatives(&self, s: T, sigma: T, k_max: usize, quad: &QuadratureSpec<T>) -> Result<Vec<T>> {
        let two_pi_lambda = T::TAU() * self.lambda;
        let mut out = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            let integrand = |t: T| {
                let (p, kf, beta) = self.at(t);
                let x = s * beta;
                let y = sigma * beta;
                let (los, nlos) = fading_laplace_derivative(k, x, y, kf);
                (los * p + nlos * (T::one() - p)) * t
            };
            let v = match self.outer {
                Some(r) if r <= self.guard => T::zero(),
                Some(r) => integrate(integrand, self.guard, r, quad)?,
                None => integrate_semi_infinite_scaled(integrand, self.guard, self.scale, quad)?,
            };
            out.push(if k == 0 { -two_pi_lambda * v } else { two_pi_lambda * v });
        }
        Ok(out)
    }

    /// `σ^k L_I^{(k)}(s)` via the Faà di Bruno recursion for `exp ∘ η`.
    fn laplace_scaled(&self, s: T, sigma: T, k_max: usize, quad: &QuadratureSpec<T>) -> Result<Vec<T>> {
        let e = self.exponent_derivatives(s, sigma, k_max, quad)?;
        let mut l = vec![e[0].exp()];
        for n in 0..k_max {
            let mut acc = T::zero();
            let mut binom = T::one();
            for j in 0..=n {
                acc = acc + binom * e[j + 1] * l[n - j];
                binom = binom * T::lit((n - j) as f64) / T::lit((j + 1) as f64);
            }
            l.push(acc);
        }
        Ok(l)
    }
}

/// For `k = 0`: `1 − L_h(x)` for LoS and NLoS fading. For `k ≥ 1`:
/// `y^k L_h^{(k)}(x)`. The LoS gain is noncentral χ² with factor `kf`, whose
/// Laplace transform is `u e^{−K(1−u)}` with `u = 1/(1+2x)`; NLoS is unit
/// exponential with `1/(1+x)`.
fn fading_laplace_derivative<T: Real>(k: usize, x: T, y: T, kf: T) -> (T, T) {
    let one = T::one();
    let two = T::lit(2.0);
    let u = one / (one + two * x);
    let one_minus_u = two * x * u;
    if k == 0 {
        let los = -(u.ln() - kf * one_minus_u).exp_m1();
        let nlos = x / (one + x);
        return (los, nlos);
    }
    let mut kfact = one;
    let mut sum = T::zero();
    let mut binom = one;
    let mut pow = one;
    let mut ifact = one;
    for i in 0..=k {
        if i > 0 {
            binom = binom * T::lit((k - i + 1) as f64) / T::lit(i as f64);
            pow = pow * kf * u;
            ifact = ifact * T::lit(i as f64);
        }
        sum = sum + binom * pow / ifact;
    }
    for i in 2..=k {
        kfact = kfact * T::lit(i as f64);
    }
    let sign = if k.is_multiple_of(2) { one } else { -one };
    let kf_t = T::lit(k as f64);
    let los = sign * kfact * (two * y * u).powf(kf_t) * u * (-kf * one_minus_u).exp() * sum;
    let v = one / (one + x);
    let nlos = sign * kfact * (y * v).powf(kf_t) * v;
    (los, nlos)
}

fn check_s<T: Real>(s: T) -> Result<()> {
    if !(s.is_finite() && s >= T::zero()) {
        return Err(invalid("s", "must be non-negative and finite"));
    }
    Ok(())
}

fn check_guard<T: Real>(guard: T) -> Result<()> {
    if !(guard.is_finite() && guard >= T::zero()) {
        return Err(invalid("guard_radius", "must be non-negative and finite"));
    }
    Ok(())
}

/// Laplace transform `E[e^{−sI}]` of the aggregate interference from nodes
/// beyond horizontal distance `guard_radius`.
pub fn interference_laplace<T: Real>(
    s: T,
    net: &NetworkParams<T>,
    env: &EnvironmentParams<T>,
    radio: &RadioParams<T>,
    guard_radius: T,
) -> Result<T> {
    interference_laplace_with(s, net, env, radio, guard_radius, &QuadratureSpec::default())
}

pub fn interference_laplace_with<T: Real>(
    s: T,
    net: &NetworkParams<T>,
    env: &EnvironmentParams<T>,
    radio: &RadioParams<T>,
    guard_radius: T,
    quad: &QuadratureSpec<T>,
) -> Result<T> {
    net.validate()?;
    check_s(s)?;
    check_guard(guard_radius)?;
    if s == T::zero() {
        return Ok(T::one());
    }
    let f = Field::new(net, env, radio, guard_radius);
    Ok(f.laplace_scaled(s, s, 0, quad)?[0])
}

/// `L_I^{(k)}(s)` for `k = 0..=k_max`.
pub fn laplace_derivatives<T: Real>(
    s: T,
    k_max: usize,
    net: &NetworkParams<T>,
    env: &EnvironmentParams<T>,
    radio: &RadioParams<T>,
    guard_radius: T,
) -> Result<Vec<T>> {
    net.validate()?;
    check_s(s)?;
    check_guard(guard_radius)?;
    let f = Field::new(net, env, radio, guard_radius);
    // Scale by a typical interferer power so the integrands are O(1).
    let sigma = if s > T::zero() { s } else { f.at(f.scale).2.recip() };
    let scaled = f.laplace_scaled(s, sigma, k_max, &QuadratureSpec::default())?;
    let mut pow = T::one();
    Ok(scaled
        .into_iter()
        .map(|v| {
            let out = v / pow;
            pow = pow * sigma;
            out
        })
        .collect())
}

/// Per-link quantities of the serving link at horizontal distance `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServingLink<T> {
    pub horizontal: T,
    pub length: T,
    pub p_los: T,
    pub k: T,
    pub beta: T,
}

impl<T: Real> ServingLink<T> {
    pub fn new(r: T, net: &NetworkParams<T>, env: &EnvironmentParams<T>, radio: &RadioParams<T>) -> Result<Self> {
        if !(r.is_finite() && r >= T::zero()) {
            return Err(invalid("horizontal_r", "must be non-negative and finite"));
        }
        let dz = net.vertical();
        let length = (r * r + dz * dz).sqrt();
        if length <= T::zero() {
            return Err(invalid("horizontal_r", "serving link has zero length"));
        }
        let profile = LosProfile::new(net.interferer_height, net.rx_height, env);
        let p_los = profile.probability(r);
        let alpha = path_loss_exponent_unchecked(p_los, env);
        Ok(Self {
            horizontal: r,
            length,
            p_los,
            k: rician_factor_unchecked(p_los, env),
            beta: received_power(length, alpha, radio.p_m),
        })
    }
}

/// Outage given the main link's state, with the serving node at horizontal
/// distance `r` and all other nodes beyond `r`.
pub fn outage_multi_conditional<T: Real>(
    state: LinkState,
    r: T,
    net: &NetworkParams<T>,
    env: &EnvironmentParams<T>,
    radio: &RadioParams<T>,
    quad: &QuadratureSpec<T>,
) -> Result<T> {
    net.validate()?;
    let main = ServingLink::new(r, net, env, radio)?;
    let field = Field::new(net, env, radio, r);
    conditional(state, &main, &field, net.nakagami_m, radio.gamma_t, quad)
}

fn conditional<T: Real>(
    state: LinkState,
    main: &ServingLink<T>,
    field: &Field<T>,
    m: u32,
    gamma: T,
    quad: &QuadratureSpec<T>,
) -> Result<T> {
    match state {
        LinkState::Nlos => {
            let s = gamma / main.beta;
            Ok(clamp01(-field.laplace_scaled(s, s, 0, quad)?[0].ln().exp_m1()))
        }
        LinkState::Los => {
            // Gamma(m, 1/m) main gain: coverage is Σ_{k<m} (−s)^k L^{(k)}(s)/k!,
            // and every term is non-negative.
            let s = T::lit(m as f64) * gamma / main.beta;
            let l = field.laplace_scaled(s, s, m as usize - 1, quad)?;
            let mut fact = T::one();
            let mut coverage = T::zero();
            for (k, v) in l.iter().enumerate() {
                if k > 0 {
                    fact = fact * T::lit(k as f64);
                }
                let sign = if k % 2 == 0 { T::one() } else { -T::one() };
                coverage = coverage + sign * *v / fact;
            }
            Ok(clamp01(T::one() - coverage))
        }
    }
}

/// Outage with every node beyond the serving distance `r` interfering,
/// mixed over the serving link's LoS state.
pub fn outage_multi<T: Real>(
    r: T,
    net: &NetworkParams<T>,
    env: &EnvironmentParams<T>,
    radio: &RadioParams<T>,
) -> Result<T> {
    outage_multi_with(r, net, env, radio, &QuadratureSpec::default())
}

pub fn outage_multi_with<T: Real>(
    r: T,
    net: &NetworkParams<T>,
    env: &EnvironmentParams<T>,
    radio: &RadioParams<T>,
    quad: &QuadratureSpec<T>,
) -> Result<T> {
    net.validate()?;
    let main = ServingLink::new(r, net, env, radio)?;
    let field = Field::new(net, env, radio, r);
    let m = net.nakagami_m;
    let mut total = T::zero();
    if main.p_los > T::zero() {
        total = total + main.p_los * conditional(LinkState::Los, &main, &field, m, radio.gamma_t, quad)?;
    }
    if main.p_los < T::one() {
        total = total + (T::one() - main.p_los) * conditional(LinkState::Nlos, &main, &field, m, radio.gamma_t, quad)?;
    }
    Ok(clamp01(total))
}

/// Network outage: [`outage_multi`] averaged over the distance to the
/// nearest node, `f(r) = 2πλr e^{−πλr²}`.
pub fn network_outage<T: Real>(
    net: &NetworkParams<T>,
    env: &EnvironmentParams<T>,
    radio: &RadioParams<T>,
) -> Result<T> {
    network_outage_with(net, env, radio, &QuadratureSpec::default())
}

pub fn network_outage_with<T: Real>(
    net: &NetworkParams<T>,
    env: &EnvironmentParams<T>,
    radio: &RadioParams<T>,
    quad: &QuadratureSpec<T>,
) -> Result<T> {
    net.validate()?;
    let pl = T::PI() * net.lambda_i;
    let mut failure = None;
    // u = πλr² turns the distance density into e^{−u}.
    let integrand = |u: T| {
        let r = (u / pl).sqrt();
        match outage_multi_with(r, net, env, radio, quad) {
            Ok(p) => p * (-u).exp(),
            Err(e) => {
                failure.get_or_insert(e);
                T::nan()
            }
        }
    };
    let v = integrate_semi_infinite_scaled(integrand, T::zero(), T::one(), quad);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(clamp01(v?))
}

/// Outage with only the nearest interferer active, the serving node at
/// horizontal distance `r`, and the interferer conditioned to lie beyond
/// `r`.
pub fn outage_nearest<T: Real>(
    r: T,
    net: &NetworkParams<T>,
    env: &EnvironmentParams<T>,
    radio: &RadioParams<T>,
) -> Result<T> {
    outage_nearest_with(r, r, net, env, radio, &QuadratureSpec::default())
}

/// As [`outage_nearest`] with an explicit guard radius. A zero guard lets
/// the nearest interferer fall anywhere, closer than the serving node
/// included.
pub fn outage_nearest_with<T: Real>(
    r: T,
    guard: T,
    net: &NetworkParams<T>,
    env: &EnvironmentParams<T>,
    radio: &RadioParams<T>,
    quad: &QuadratureSpec<T>,
) -> Result<T> {
    net.validate()?;
    check_guard(guard)?;
    let main = ServingLink::new(r, net, env, radio)?;
    let field = Field::new(net, env, radio, guard);
    let g = radio.gamma_t;
    let pl = T::PI() * net.lambda_i;
    let g2 = guard * guard;
    let (am, bm) = (main.p_los, T::one() - main.p_los);
    // u = πλ(t² − guard²).
    let integrand = |u: T| {
        let t = (g2 + u / pl).sqrt();
        let (ai, ki, beta_i) = field.at(t);
        let bi = T::one() - ai;
        let v = main.beta / beta_i;
        let p = am * ai * sir::ll(v, main.k, ki, g)
            + am * bi * sir::ln(v, main.k, g)
            + bm * ai * sir::nl(v, ki, g)
            + bm * bi * sir::nn(v, g);
        p * (-u).exp()
    };
    let v = integrate_semi_infinite_scaled(integrand, T::zero(), T::one(), quad)?;
    Ok(clamp01(v))
}

/// [`outage_nearest`] averaged over the serving distance.
pub fn network_outage_nearest<T: Real>(
    net: &NetworkParams<T>,
    env: &EnvironmentParams<T>,
    radio: &RadioParams<T>,
    quad: &QuadratureSpec<T>,
) -> Result<T> {
    net.validate()?;
    let pl = T::PI() * net.lambda_i;
    let mut failure = None;
    let integrand = |u: T| {
        let r = (u / pl).sqrt();
        match outage_nearest_with(r, r, net, env, radio, quad) {
            Ok(p) => p * (-u).exp(),
            Err(e) => {
                failure.get_or_insert(e);
                T::nan()
            }
        }
    };
    let v = integrate_semi_infinite_scaled(integrand, T::zero(), T::one(), quad);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(clamp01(v?))
}
