//! Power ratio at which the all-LoS and all-NLoS outages coincide.

use super::{sir, LinkPairConfig};
use crate::error::{invalid, Error, Result};
use crate::Real;

const RELATIVE_TOLERANCE: f64 = 1e-10;

fn difference<T: Real>(v: T, k_m: T, k_i: T, gamma: T) -> T {
    sir::ll(v, k_m, k_i, gamma) - sir::nn(v, gamma)
}

/// The ratio `v′ = β_m/β_I` where the interference-limited all-LoS and
/// all-NLoS outages are equal, with both Rician factors held fixed.
///
/// Below `v′` the LoS pair is worse, above it better. Both outages depend
/// on `v` only through `v/γ` when `K_m = K_I`, in which case `v′ = γ`.
/// A crossing exists only while the two factors are comparable: a much
/// stronger main-link factor makes the LoS pair better at every ratio, a much
/// weaker one makes it worse, and both cases return [`Error::Bracket`].
pub fn crossover_ratio<T: Real>(k_m: T, k_i: T, gamma_t: T) -> Result<T> {
    let pos = |x: T| x.is_finite() && x > T::zero();
    if !pos(k_m) {
        return Err(invalid("k_m", "must be positive"));
    }
    if !pos(k_i) {
        return Err(invalid("k_i", "must be positive"));
    }
    if !pos(gamma_t) {
        return Err(invalid("gamma_t", "must be positive"));
    }
    let f = |lv: T| difference(lv.exp(), k_m, k_i, gamma_t);
    let ten = T::lit(10.0f64.ln());
    let (mut lo, mut hi) = (T::lit(-6.0) * ten, T::lit(6.0) * ten);
    let limit = T::lit(30.0) * ten;
    // Positive below the root, negative above.
    while f(lo) <= T::zero() || f(hi) >= T::zero() {
        if lo < -limit || hi > limit {
            return Err(Error::Bracket {
                lo: lo.exp().as_f64(),
                hi: hi.exp().as_f64(),
            });
        }
        if f(lo) <= T::zero() {
            lo = lo - ten;
        }
        if f(hi) >= T::zero() {
            hi = hi + ten;
        }
    }
    let lv = bisect(f, lo, hi, T::lit(RELATIVE_TOLERANCE).max(T::epsilon() * T::lit(4.0)));
    Ok(lv.exp())
}

/// Bisection for a root of `f` with `f(lo) > 0 > f(hi)`.
fn bisect<T: Real, F: Fn(T) -> T>(f: F, mut lo: T, mut hi: T, tol: T) -> T {
    let half = T::lit(0.5);
    for _ in 0..400 {
        let mid = half * (lo + hi);
        let fm = f(mid);
        if fm == T::zero() {
            return mid;
        }
        if fm > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() <= tol * (T::one() + mid.abs()) {
            break;
        }
    }
    half * (lo + hi)
}

/// Crossover located along a one-parameter family of geometries, so that
/// the Rician factors follow the link distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricCrossover<T> {
    /// Family parameter at the crossing.
    pub parameter: T,
    /// `β_m/β_I` at the crossing.
    pub ratio: T,
    pub k_m: T,
    pub k_i: T,
}

/// Finds the family parameter in `[lo, hi]` where the interference-limited
/// all-LoS and all-NLoS outages are equal, by bisection on their difference.
pub fn crossover_along<T, F>(family: F, lo: T, hi: T) -> Result<GeometricCrossover<T>>
where
    T: Real,
    F: Fn(T) -> Result<LinkPairConfig<T>>,
{
    let eval = |x: T| -> Result<(T, super::PairTerms<T>)> {
        let t = family(x)?.terms()?;
        Ok((difference(t.ratio(), t.k_m, t.k_i, t.gamma), t))
    };
    let (f_lo, _) = eval(lo)?;
    let (f_hi, _) = eval(hi)?;
    if f_lo == T::zero() || f_hi == T::zero() || (f_lo > T::zero()) == (f_hi > T::zero()) {
        if f_lo == T::zero() || f_hi == T::zero() {
            let x = if f_lo == T::zero() { lo } else { hi };
            let (_, t) = eval(x)?;
            return Ok(GeometricCrossover {
                parameter: x,
                ratio: t.ratio(),
                k_m: t.k_m,
                k_i: t.k_i,
            });
        }
        return Err(Error::Bracket {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    let (mut a, mut b) = (lo, hi);
    let positive_at_a = f_lo > T::zero();
    let tol = T::lit(RELATIVE_TOLERANCE).max(T::epsilon() * T::lit(4.0));
    for _ in 0..400 {
        let mid = T::lit(0.5) * (a + b);
        let (fm, _) = eval(mid)?;
        if (fm > T::zero()) == positive_at_a {
            a = mid;
        } else {
            b = mid;
        }
        if (b - a).abs() <= tol * (T::one() + mid.abs()) {
            break;
        }
    }
    let x = T::lit(0.5) * (a + b);
    let (_, t) = eval(x)?;
    Ok(GeometricCrossover {
        parameter: x,
        ratio: t.ratio(),
        k_m: t.k_m,
        k_i: t.k_i,
    })
}
