//! Outage under noise and interference (SINR below threshold).

use super::{clamp01, degenerate, LinkPairConfig, OutageBreakdown, PairTerms};
use crate::error::Result;
use crate::specfun::bessel::i0e_unchecked;
use crate::specfun::marcum::{ln_unchecked, pair_unchecked};
use crate::specfun::quadrature::{integrate_semi_infinite_scaled, QuadratureSpec};
use crate::Real;

/// Both links LoS. No closed form: one gain's CDF is integrated against the
/// other's noncentral χ² density.
///
/// With `c = γβ_I/β_m`, outage is `h_m < c·g + γN_o/β_m`. For `c ≤ 1` the
/// main-link CDF varies slowly in `g`, so the integral runs over the
/// interferer gain. For `c > 1` the interferer CDF varies slowly in `h_m`
/// and the non-outage probability is integrated over the main gain instead;
/// either way no feature is narrower than the density being integrated.
pub fn ll<T: Real>(t: &PairTerms<T>, quad: &QuadratureSpec<T>) -> Result<T> {
    match (degenerate(t.k_m), degenerate(t.k_i)) {
        (true, true) => return Ok(nn(t)),
        (true, false) => return Ok(nl(t)),
        (false, true) => return Ok(ln(t)),
        _ => {}
    }
    let two = T::lit(2.0);
    let a_m = (two * t.k_m).sqrt();
    let a_i = (two * t.k_i).sqrt();
    let c = t.gamma * t.beta_i / t.beta_m;
    let offset = t.gamma * t.n_o / t.beta_m;
    if c <= T::one() {
        let integrand = |g: T| pair_unchecked(a_m, (c * g + offset).sqrt()).1 * los_density(g, a_i);
        let p = integrate_semi_infinite_scaled(integrand, T::zero(), two + two * t.k_i, quad)?;
        Ok(clamp01(p))
    } else {
        let integrand = |u: T| pair_unchecked(a_i, (u / c).sqrt()).1 * los_density(u + offset, a_m);
        let scale = (two + two * t.k_m).max(offset);
        let survive = integrate_semi_infinite_scaled(integrand, T::zero(), scale, quad)?;
        Ok(clamp01(T::one() - survive))
    }
}

/// Noncentral χ² density with two degrees of freedom and noncentrality
/// `a²`, in the overflow-free scaled form.
fn los_density<T: Real>(h: T, a: T) -> T {
    let sh = h.sqrt();
    let d = sh - a;
    T::lit(0.5) * (-T::lit(0.5) * d * d).exp() * i0e_unchecked(a * sh)
}

/// Main LoS, interferer NLoS.
pub fn ln<T: Real>(t: &PairTerms<T>) -> T {
    if degenerate(t.k_m) {
        return nn(t);
    }
    let two = T::lit(2.0);
    let r = t.beta_i / t.beta_m;
    let n = t.n_o / t.beta_m;
    let g = t.gamma;
    let s = two + g * r;
    let first = pair_unchecked((two * t.k_m).sqrt(), (g * n).sqrt()).1;
    let qa = (two * g * t.k_m * r / s).sqrt();
    let qb = (n * s / r).sqrt();
    // exp(N_o/β_I) can overflow on its own; the Marcum tail cancels it.
    let ln_second = (g * r / s).ln() + n / r - two * t.k_m / s + ln_unchecked(qa, qb);
    clamp01(first + ln_second.exp())
}

/// Main NLoS, interferer LoS.
pub fn nl<T: Real>(t: &PairTerms<T>) -> T {
    if degenerate(t.k_i) {
        return nn(t);
    }
    let two = T::lit(2.0);
    let x = two * t.gamma * t.beta_i / t.beta_m;
    let n = t.n_o / t.beta_m;
    let e = -x.ln_1p() - t.gamma * n - t.k_i * x / (T::one() + x);
    clamp01(-e.exp_m1())
}

/// Both links NLoS.
pub fn nn<T: Real>(t: &PairTerms<T>) -> T {
    let x = t.gamma * t.beta_i / t.beta_m;
    let n = t.n_o / t.beta_m;
    clamp01(-(-x.ln_1p() - t.gamma * n).exp_m1())
}

pub fn outage_ll_general<T: Real>(cfg: &LinkPairConfig<T>) -> Result<T> {
    ll(&cfg.terms()?, &QuadratureSpec::default())
}

pub fn outage_ln_general<T: Real>(cfg: &LinkPairConfig<T>) -> Result<T> {
    Ok(ln(&cfg.terms()?))
}

pub fn outage_nl_general<T: Real>(cfg: &LinkPairConfig<T>) -> Result<T> {
    Ok(nl(&cfg.terms()?))
}

pub fn outage_nn_general<T: Real>(cfg: &LinkPairConfig<T>) -> Result<T> {
    Ok(nn(&cfg.terms()?))
}

pub fn outage_total_general<T: Real>(cfg: &LinkPairConfig<T>) -> Result<OutageBreakdown<T>> {
    outage_total_general_with(cfg, &QuadratureSpec::default())
}

pub fn outage_total_general_with<T: Real>(
    cfg: &LinkPairConfig<T>,
    quad: &QuadratureSpec<T>,
) -> Result<OutageBreakdown<T>> {
    cfg.validate()?;
    let m = cfg.main_budget()?;
    let i = cfg.interferer_budget()?;
    let t = cfg.terms()?;
    let p = [ll(&t, quad)?, ln(&t), nl(&t), nn(&t)];
    Ok(OutageBreakdown::mix(m.p_los, i.p_los, p))
}
