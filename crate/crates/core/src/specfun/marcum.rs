//! First-order Marcum Q-function.
//!
//! Both tails are written as Bessel-weighted sums so neither needs a
//! subtraction:
//!
//! ```text
//! Q₁(a,b)     = e^{-(b-a)²/2} Σ_{k≥0} (a/b)^k Ĩ_k(ab)    (b ≥ a)
//! 1 − Q₁(a,b) = e^{-(a-b)²/2} Σ_{k≥1} (b/a)^k Ĩ_k(ab)    (a > b)
//! ```
//!
//! with `Ĩ_k(x) = e^{-x} I_k(x)`. The scaled Bessel values come from the
//! ascending series for `ab ≤ 30` and from Miller's backward recurrence
//! above that.

use crate::error::{domain, Result};
use crate::Real;

/// Argument `ab` at which the evaluation switches from the ascending
/// series to backward recurrence.
pub const SERIES_LIMIT: f64 = 30.0;

/// `Σ_{k≥0} r^k Ĩ_k(x)` and `Σ_{k≥1} r^k Ĩ_k(x)` for `0 ≤ r ≤ 1`, `x > 0`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct WeightedSums<T> {
    pub from0: T,
    pub from1: T,
}

pub(crate) fn weighted_sums<T: Real>(x: T, r: T) -> WeightedSums<T> {
    if x <= T::lit(SERIES_LIMIT) {
        weighted_sums_series(x, r)
    } else {
        weighted_sums_recurrence(x, r)
    }
}

pub(crate) fn weighted_sums_series<T: Real>(x: T, r: T) -> WeightedSums<T> {
    let eps = T::epsilon();
    let half = x * T::lit(0.5);
    let q = half * half;
    let ln_half = half.ln();
    let mut from1 = T::zero();
    let mut i0 = T::zero();
    let mut rk = T::one();
    let mut ln_kfact = T::zero();
    for k in 0..10_000u32 {
        let kf = T::lit(k as f64);
        if k > 0 {
            ln_kfact = ln_kfact + kf.ln();
            rk = rk * r;
        }
        // e^{-x} (x/2)^k / k!
        let mut term = (kf * ln_half - ln_kfact - x).exp();
        let mut ik = term;
        let mut j = T::one();
        while term > eps * ik {
            term = term * q / (j * (j + kf));
            ik = ik + term;
            j = j + T::one();
        }
        if k == 0 {
            i0 = ik;
            continue;
        }
        let add = rk * ik;
        from1 = from1 + add;
        if add <= eps * (i0 + from1) {
            break;
        }
    }
    WeightedSums {
        from0: i0 + from1,
        from1,
    }
}

pub(crate) fn weighted_sums_recurrence<T: Real>(x: T, r: T) -> WeightedSums<T> {
    let xf = x.as_f64();
    let n = (100.0 * xf).sqrt().ceil() as usize + 40;
    let big = T::max_value().sqrt();
    let two_over_x = T::lit(2.0) / x;

    // y_{k-1} = (2k/x) y_k + y_{k+1}, started from y_{n+1} = 0, y_n = tiny.
    let mut y_next = T::zero();
    let mut y = T::min_positive_value().sqrt();
    let mut acc = T::zero(); // Horner: y_k + r·acc over k = n..1
    let mut norm = T::zero(); // Σ_{k≥1} y_k
    for k in (1..=n).rev() {
        acc = y + r * acc;
        norm = norm + y;
        let y_prev = two_over_x * T::lit(k as f64) * y + y_next;
        y_next = y;
        y = y_prev;
        if y > big {
            let s = big.recip();
            y = y * s;
            y_next = y_next * s;
            acc = acc * s;
            norm = norm * s;
        }
    }
    // y now holds y_0; e^x = I_0 + 2 Σ_{k≥1} I_k.
    let total = y + T::lit(2.0) * norm;
    let from1 = r * acc / total;
    WeightedSums {
        from0: y / total + from1,
        from1,
    }
}

fn check<T: Real>(a: T, b: T) -> Result<()> {
    let ok = |v: T| v.is_finite() && v >= T::zero();
    if !ok(a) || !ok(b) {
        return Err(domain(
            "marcum_q1",
            format!("arguments must be finite and non-negative, got ({a}, {b})"),
        ));
    }
    Ok(())
}

/// Both tails `(Q₁(a,b), 1 − Q₁(a,b))`, each computed without cancellation.
pub fn marcum_q1_pair<T: Real>(a: T, b: T) -> Result<(T, T)> {
    check(a, b)?;
    Ok(pair_unchecked(a, b))
}

pub(crate) fn pair_unchecked<T: Real>(a: T, b: T) -> (T, T) {
    let half = T::lit(0.5);
    if b == T::zero() {
        return (T::one(), T::zero());
    }
    if a == T::zero() {
        let e = -half * b * b;
        return (e.exp(), -e.exp_m1());
    }
    let d = b - a;
    let env = (-half * d * d).exp();
    if b >= a {
        let s = weighted_sums(a * b, a / b);
        let q = (env * s.from0).min(T::one());
        (q, T::one() - q)
    } else {
        let s = weighted_sums(a * b, b / a);
        let c = (env * s.from1).min(T::one());
        (T::one() - c, c)
    }
}

/// First-order Marcum Q-function `Q₁(a,b)`.
pub fn marcum_q1<T: Real>(a: T, b: T) -> Result<T> {
    marcum_q1_pair(a, b).map(|p| p.0)
}

/// `ln Q₁(a,b)`, accurate deep into the upper tail where `Q₁` underflows.
pub fn ln_marcum_q1<T: Real>(a: T, b: T) -> Result<T> {
    check(a, b)?;
    Ok(ln_unchecked(a, b))
}

pub(crate) fn ln_unchecked<T: Real>(a: T, b: T) -> T {
    let half = T::lit(0.5);
    if b == T::zero() {
        return T::zero();
    }
    if a == T::zero() {
        return -half * b * b;
    }
    if b >= a {
        let d = b - a;
        let s = weighted_sums(a * b, a / b);
        (-half * d * d + s.from0.ln()).min(T::zero())
    } else {
        (-pair_unchecked(a, b).1).ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel::bessel_i0e;
    use proptest::prelude::*;

    // Poisson mixture of central chi-square tails, 500 terms:
    // Q₁(a,b) = Σ_j Pois(j; a²/2) Σ_{i≤j} Pois(i; b²/2).
    fn chi2_series(a: f64, b: f64) -> f64 {
        let (la, lb) = (a * a / 2.0, b * b / 2.0);
        let mut pj = (-la).exp();
        let mut pi = (-lb).exp();
        let mut inner = pi;
        let mut sum = 0.0;
        for j in 0..500 {
            if j > 0 {
                pj *= la / j as f64;
                pi *= lb / j as f64;
                inner += pi;
            }
            sum += pj * inner;
        }
        sum
    }

    #[test]
    fn boundary_cases() {
        for a in [0.0, 0.5, 3.0, 40.0_f64] {
            assert_eq!(marcum_q1(a, 0.0).unwrap(), 1.0);
        }
        for b in [0.1, 1.0, 2.5, 6.0_f64] {
            let q = marcum_q1(0.0, b).unwrap();
            assert!((q - (-b * b / 2.0).exp()).abs() < 1e-16);
        }
    }

    #[test]
    fn series_oracle_at_one_one() {
        let got = marcum_q1(1.0_f64, 1.0).unwrap();
        assert!((got - chi2_series(1.0, 1.0)).abs() <= 1e-12);
    }

    #[test]
    fn series_oracle_grid() {
        for a in [0.2, 1.0, 2.0, 3.5, 5.477] {
            for b in [0.1, 0.9, 1.7, 3.0, 4.4, 6.5, 9.0] {
                let got = marcum_q1(a, b).unwrap();
                let want = chi2_series(a, b);
                assert!((got - want).abs() < 1e-12, "Q({a},{b}) = {got}, want {want}");
            }
        }
    }

    #[test]
    fn diagonal_identity() {
        // Q₁(a,a) = (1 + e^{-a²} I₀(a²)) / 2
        for a in [0.3, 1.0, 2.0, 5.0, 7.0, 12.0, 30.0_f64] {
            let want = 0.5 * (1.0 + bessel_i0e(a * a).unwrap());
            let got = marcum_q1(a, a).unwrap();
            assert!((got - want).abs() < 1e-12, "a={a}: {got} vs {want}");
        }
    }

    #[test]
    fn regimes_agree_at_switch() {
        let x = SERIES_LIMIT;
        for r in [0.0, 0.1, 0.5, 0.9, 0.99, 1.0_f64] {
            let s = weighted_sums_series(x, r);
            let m = weighted_sums_recurrence(x, r);
            assert!((s.from0 - m.from0).abs() < 1e-11, "r={r}");
            assert!((s.from1 - m.from1).abs() < 1e-11, "r={r}");
        }
    }

    #[test]
    fn recurrence_matches_scaled_i0() {
        for x in [31.0, 100.0, 1e3, 1e5_f64] {
            let s = weighted_sums_recurrence(x, 0.0);
            assert!((s.from0 / bessel_i0e(x).unwrap() - 1.0).abs() < 1e-13, "x={x}");
        }
    }

    #[test]
    fn large_rician_factor_tail() {
        // K = 15 places the mean of h at 32; Q should be tiny deep in the tail
        // and the log form should keep going after the value underflows.
        let a = 30.0_f64.sqrt();
        let q = marcum_q1(a, 20.0).unwrap();
        assert!(q > 0.0 && q < 1e-30);
        let lq = ln_marcum_q1(a, 60.0).unwrap();
        assert!(lq.is_finite() && lq < -1000.0);
        assert!((ln_marcum_q1(a, 20.0).unwrap() - q.ln()).abs() < 1e-9);
    }

    #[test]
    fn complement_is_accurate_near_zero() {
        let (q, c) = marcum_q1_pair(5.0_f64, 0.01).unwrap();
        assert!(c > 0.0 && c < 1e-6);
        assert!((q + c - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(marcum_q1(-1.0_f64, 1.0).is_err());
        assert!(marcum_q1(1.0_f64, f64::NAN).is_err());
        assert!(marcum_q1(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn single_precision_close_to_double() {
        for (a, b) in [(1.0, 1.0), (3.0, 2.0), (2.0, 4.0), (8.0, 9.0)] {
            let d = marcum_q1(a, b).unwrap();
            let s = marcum_q1(a as f32, b as f32).unwrap() as f64;
            assert!((d - s).abs() < 1e-5, "({a},{b})");
        }
    }

    proptest! {
        #[test]
        fn bounded(a in 0.0_f64..40.0, b in 0.0_f64..40.0) {
            let q = marcum_q1(a, b).unwrap();
            prop_assert!((0.0..=1.0).contains(&q));
        }

        #[test]
        fn increasing_in_a(a in 0.0_f64..20.0, b in 0.0_f64..20.0, da in 1e-3_f64..2.0) {
            prop_assert!(marcum_q1(a + da, b).unwrap() >= marcum_q1(a, b).unwrap() - 1e-15);
        }

        #[test]
        fn decreasing_in_b(a in 0.0_f64..20.0, b in 0.0_f64..20.0, db in 1e-3_f64..2.0) {
            prop_assert!(marcum_q1(a, b + db).unwrap() <= marcum_q1(a, b).unwrap() + 1e-15);
        }
    }
}
