//! Interference-limited outage (SIR below threshold), written in terms of
//! the power ratio `v = β_m / β_I`.

use super::{clamp01, degenerate, LinkPairConfig, OutageBreakdown};
use crate::error::Result;
use crate::specfun::bessel::i0e_unchecked;
use crate::specfun::marcum::pair_unchecked;
use crate::Real;

/// Both links LoS.
pub fn ll<T: Real>(v: T, k_m: T, k_i: T, gamma: T) -> T {
    match (degenerate(k_m), degenerate(k_i)) {
        (true, true) => return nn(v, gamma),
        (true, false) => return nl(v, k_i, gamma),
        (false, true) => return ln(v, k_m, gamma),
        _ => {}
    }
    let two = T::lit(2.0);
    let s = v + gamma;
    let a = (two * k_m * v / s).sqrt();
    let b = (two * gamma * k_i / s).sqrt();
    let d = a - b;
    let tail = pair_unchecked(a, b).1;
    clamp01(tail + gamma / s * (-T::lit(0.5) * d * d).exp() * i0e_unchecked(a * b))
}

/// Main LoS, interferer NLoS.
pub fn ln<T: Real>(v: T, k_m: T, gamma: T) -> T {
    if degenerate(k_m) {
        return nn(v, gamma);
    }
    let two = T::lit(2.0);
    let s = two * v + gamma;
    clamp01(gamma / s * (-two * k_m * v / s).exp())
}

/// Main NLoS, interferer LoS.
pub fn nl<T: Real>(v: T, k_i: T, gamma: T) -> T {
    if degenerate(k_i) {
        return nn(v, gamma);
    }
    let x = T::lit(2.0) * gamma / v;
    clamp01(-(-x.ln_1p() - k_i * x / (T::one() + x)).exp_m1())
}

/// Both links NLoS.
pub fn nn<T: Real>(v: T, gamma: T) -> T {
    clamp01(gamma / (v + gamma))
}

fn ratio_terms<T: Real>(cfg: &LinkPairConfig<T>) -> Result<(T, T, T, T)> {
    let t = cfg.terms()?;
    Ok((t.ratio(), t.k_m, t.k_i, t.gamma))
}

pub fn outage_ll_sir<T: Real>(cfg: &LinkPairConfig<T>) -> Result<T> {
    let (v, km, ki, g) = ratio_terms(cfg)?;
    Ok(ll(v, km, ki, g))
}

pub fn outage_ln_sir<T: Real>(cfg: &LinkPairConfig<T>) -> Result<T> {
    let (v, km, _, g) = ratio_terms(cfg)?;
    Ok(ln(v, km, g))
}

pub fn outage_nl_sir<T: Real>(cfg: &LinkPairConfig<T>) -> Result<T> {
    let (v, _, ki, g) = ratio_terms(cfg)?;
    Ok(nl(v, ki, g))
}

pub fn outage_nn_sir<T: Real>(cfg: &LinkPairConfig<T>) -> Result<T> {
    let (v, _, _, g) = ratio_terms(cfg)?;
    Ok(nn(v, g))
}

pub fn outage_total_sir<T: Real>(cfg: &LinkPairConfig<T>) -> Result<OutageBreakdown<T>> {
    cfg.validate()?;
    let m = cfg.main_budget()?;
    let i = cfg.interferer_budget()?;
    let (v, km, ki, g) = ratio_terms(cfg)?;
    let p = [ll(v, km, ki, g), ln(v, km, g), nl(v, ki, g), nn(v, g)];
    Ok(OutageBreakdown::mix(m.p_los, i.p_los, p))
}

#[cfg(test)]
mod tests {
    use super::super::general;
    use super::super::testing::random_config;
    use super::*;
    use crate::specfun::quadrature::QuadratureSpec;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn equal_powers_rayleigh() {
        assert!((nn(1.0_f64, 2.0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rayleigh_main_link_limit() {
        for v in [0.01, 0.5, 1.0, 3.0, 100.0_f64] {
            assert_eq!(ln(v, 0.0, 2.0), nn(v, 2.0));
        }
    }

    #[test]
    fn totals_match_general_without_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let mut cfg = random_config(&mut rng);
            cfg.radio.n_o = 0.0;
            let s = outage_total_sir(&cfg).unwrap();
            let g = general::outage_total_general_with(&cfg, &QuadratureSpec::default()).unwrap();
            for (a, b) in s.conditionals().iter().zip(g.conditionals()) {
                assert!((a - b).abs() < 1e-8, "{s:?} {g:?} {:?}", cfg.terms().unwrap());
            }
            assert_eq!(s.weights(), g.weights());
        }
    }

    #[test]
    fn limits_in_ratio() {
        for (km, ki) in [(1.0, 1.0), (15.0, 2.0), (3.0, 12.0)] {
            assert!(ll(1e-12_f64, km, ki, 2.0) > 1.0 - 1e-9);
            assert!(nn(1e-12_f64, 2.0) > 1.0 - 1e-9);
            assert!(ll(1e12_f64, km, ki, 2.0) < 1e-9);
            assert!(nn(1e12_f64, 2.0) < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn decreasing_in_ratio(lv in -3.0_f64..3.0, km in 0.5_f64..15.0, ki in 0.5_f64..15.0,
                               g in 0.5_f64..8.0) {
            let v = 10f64.powf(lv);
            let w = v * 1.05;
            prop_assert!(ll(w, km, ki, g) < ll(v, km, ki, g));
            prop_assert!(ln(w, km, g) < ln(v, km, g));
            prop_assert!(nl(w, ki, g) < nl(v, ki, g));
            prop_assert!(nn(w, g) < nn(v, g));
        }

        #[test]
        fn los_main_dominates(lv in -3.0_f64..3.0, k in 0.0_f64..15.0, g in 0.1_f64..10.0) {
            let v = 10f64.powf(lv);
            prop_assert!(ln(v, k, g) <= nl(v, k, g));
        }
    }
}
