use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson, StandardNormal};

use crate::channel::LinkState;
use crate::error::{invalid, Result};

/// LoS fading gain: noncentral χ² with two degrees of freedom and
/// noncentrality `2k`, mean `2 + 2k`.
pub fn sample_fading_los<R: Rng + ?Sized>(k: f64, rng: &mut R) -> f64 {
    let x1: f64 = StandardNormal.sample(rng);
    let x2: f64 = StandardNormal.sample(rng);
    let a = x1 + (2.0 * k).sqrt();
    a * a + x2 * x2
}

/// NLoS fading gain: unit-mean exponential.
pub fn sample_fading_nlos<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    Exp1.sample(rng)
}

pub(crate) fn sample_state<R: Rng + ?Sized>(p_los: f64, rng: &mut R) -> LinkState {
    if rng.random::<f64>() < p_los {
        LinkState::Los
    } else {
        LinkState::Nlos
    }
}

/// Poisson point process of density `lambda` on the disk of radius
/// `radius` centred at the origin.
pub fn sample_ppp_disk<R: Rng + ?Sized>(lambda: f64, radius: f64, rng: &mut R) -> Result<Vec<[f64; 2]>> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(invalid("lambda", "must be positive"));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(invalid("radius", "must be positive"));
    }
    let mean = lambda * std::f64::consts::PI * radius * radius;
    let n = if mean < 1e-300 {
        0
    } else {
        Poisson::new(mean)
            .map_err(|e| invalid("lambda", e.to_string()))?
            .sample(rng) as usize
    };
    Ok((0..n)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let th = std::f64::consts::TAU * rng.random::<f64>();
            [r * th.cos(), r * th.sin()]
        })
        .collect())
}

/// Distances of a planar PPP from the origin, in increasing order, starting
/// outside `inner`: `π λ (t_k² − inner²)` are the arrival times of a unit
/// rate Poisson process.
pub(crate) struct RadialPpp {
    t2: f64,
    inv_pl: f64,
}

impl RadialPpp {
    pub fn new(lambda: f64, inner: f64) -> Self {
        Self {
            t2: inner * inner,
            inv_pl: 1.0 / (std::f64::consts::PI * lambda),
        }
    }

    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        let e: f64 = Exp1.sample(rng);
        self.t2 += e * self.inv_pl;
        self.t2.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::bessel_i0e;
    use crate::specfun::quadrature::{integrate, QuadratureSpec};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mean_and_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, (v / n).sqrt())
    }

    #[test]
    fn los_mean_is_two_plus_two_k() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for k in [0.0, 15.0] {
            let xs: Vec<f64> = (0..1_000_000).map(|_| sample_fading_los(k, &mut rng)).collect();
            let (m, se) = mean_and_se(&xs);
            assert!((m - (2.0 + 2.0 * k)).abs() <= 3.0 * se, "k={k}: {m} ± {se}");
        }
    }

    #[test]
    fn nlos_moments() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let xs: Vec<f64> = (0..1_000_000).map(|_| sample_fading_nlos(&mut rng)).collect();
        let (m, se) = mean_and_se(&xs);
        assert!((m - 1.0).abs() <= 3.0 * se);
        let p = xs.iter().filter(|&&x| x > 1.0).count() as f64 / xs.len() as f64;
        let want = (-1.0f64).exp();
        assert!((p - want).abs() <= 3.0 * (want * (1.0 - want) / xs.len() as f64).sqrt());
    }

    #[test]
    fn los_at_zero_factor_is_not_rayleigh() {
        // Central χ² with two degrees of freedom has mean 2, twice the NLoS
        // mean.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 200_000;
        let los: f64 = (0..n).map(|_| sample_fading_los(0.0, &mut rng)).sum::<f64>() / n as f64;
        let nlos: f64 = (0..n).map(|_| sample_fading_nlos(&mut rng)).sum::<f64>() / n as f64;
        assert!((los / nlos - 2.0).abs() < 0.05);
    }

    #[test]
    fn los_matches_density_kolmogorov_smirnov() {
        let k = 2.5;
        let n = 100_000;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut xs: Vec<f64> = (0..n).map(|_| sample_fading_los(k, &mut rng)).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let e = (2.0 * k).sqrt();
        let pdf = |h: f64| {
            let d = h.sqrt() - e;
            0.5 * (-0.5 * d * d).exp() * bessel_i0e(e * h.sqrt()).unwrap()
        };
        let q = QuadratureSpec::default();
        // CDF on a grid by cumulative quadrature, then D over the sample.
        let grid: Vec<f64> = (0..=600).map(|i| i as f64 * 0.1).collect();
        let mut cdf = vec![0.0];
        for w in grid.windows(2) {
            let last = *cdf.last().unwrap();
            cdf.push(last + integrate(pdf, w[0], w[1], &q).unwrap());
        }
        let cdf_at = |x: f64| {
            let i = ((x / 0.1) as usize).min(grid.len() - 2);
            cdf[i] + integrate(pdf, grid[i], x.min(60.0), &q).unwrap()
        };
        let mut d: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate().step_by(37) {
            let f = cdf_at(x);
            d = d
                .max((f - i as f64 / n as f64).abs())
                .max((f - (i + 1) as f64 / n as f64).abs());
        }
        assert!(d < 1.63 / (n as f64).sqrt(), "D = {d}");
    }

    #[test]
    fn los_frequency_matches_probability() {
        use crate::channel::{los_probability, EnvironmentParams, LinkGeometry};
        let link = LinkGeometry::planar(150.0, 100.0, 0.0).unwrap();
        let p = los_probability(&link, &EnvironmentParams::dense_urban());
        let n = 1_000_000;
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let hits = (0..n).filter(|_| sample_state(p, &mut rng) == LinkState::Los).count();
        let f = hits as f64 / n as f64;
        assert!((f - p).abs() <= 4.0 * (p * (1.0 - p) / n as f64).sqrt());
    }

    #[test]
    fn ppp_count_has_poisson_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let counts: Vec<f64> = (0..10_000)
            .map(|_| sample_ppp_disk(1e-5, 5000.0, &mut rng).unwrap().len() as f64)
            .collect();
        let (m, se) = mean_and_se(&counts);
        let want = 1e-5 * std::f64::consts::PI * 25e6;
        assert!((m - want).abs() <= 3.0 * se, "{m} ± {se} vs {want}");
    }

    #[test]
    fn vanishing_density_is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let empty = (0..1000)
            .filter(|_| sample_ppp_disk(1e-15, 5000.0, &mut rng).unwrap().is_empty())
            .count();
        assert!(empty >= 999);
        assert!(sample_ppp_disk(0.0, 1.0, &mut rng).is_err());
    }

    // Ripley's K at small radii with border correction: only points at least
    // r from the boundary act as centres.
    fn ripley_k(points: &[[f64; 2]], radius: f64, r: f64, lambda: f64) -> f64 {
        let centres: Vec<&[f64; 2]> = points.iter().filter(|p| p[0].hypot(p[1]) <= radius - r).collect();
        if centres.is_empty() {
            return 0.0;
        }
        let mut pairs = 0usize;
        for c in &centres {
            for p in points {
                let d = (p[0] - c[0]).hypot(p[1] - c[1]);
                if d > 0.0 && d <= r {
                    pairs += 1;
                }
            }
        }
        pairs as f64 / (centres.len() as f64 * lambda)
    }

    #[test]
    fn ppp_passes_csr_envelope() {
        // Envelope from 99 patterns with the same count placed by rejection
        // sampling in the bounding square.
        let (lambda, radius) = (1e-4, 1000.0);
        let rs = [25.0, 50.0, 100.0, 150.0];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut env_rng = ChaCha8Rng::seed_from_u64(8);
        let mut outside = 0;
        for _ in 0..100 {
            let pts = sample_ppp_disk(lambda, radius, &mut rng).unwrap();
            let mut lo = [f64::INFINITY; 4];
            let mut hi = [f64::NEG_INFINITY; 4];
            for _ in 0..19 {
                let mut sim = Vec::with_capacity(pts.len());
                while sim.len() < pts.len() {
                    let x = radius * (2.0 * env_rng.random::<f64>() - 1.0);
                    let y = radius * (2.0 * env_rng.random::<f64>() - 1.0);
                    if x.hypot(y) <= radius {
                        sim.push([x, y]);
                    }
                }
                for (j, &r) in rs.iter().enumerate() {
                    let k = ripley_k(&sim, radius, r, lambda);
                    lo[j] = lo[j].min(k);
                    hi[j] = hi[j].max(k);
                }
            }
            for (j, &r) in rs.iter().enumerate() {
                let k = ripley_k(&pts, radius, r, lambda);
                if k < lo[j] || k > hi[j] {
                    outside += 1;
                }
            }
        }
        // Each check falls outside a 19-pattern envelope with probability
        // 0.1 under CSR; 400 checks give 40 ± 6.
        assert!(outside <= 70, "{outside} envelope exceedances");
    }

    #[test]
    fn radial_sequence_matches_disk_sampler() {
        let (lambda, radius) = (1e-5, 5000.0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let trials = 20_000;
        let mut within = 0usize;
        for _ in 0..trials {
            let mut ppp = RadialPpp::new(lambda, 0.0);
            loop {
                if ppp.next(&mut rng) > radius {
                    break;
                }
                within += 1;
            }
        }
        let m = within as f64 / trials as f64;
        let want = lambda * std::f64::consts::PI * radius * radius;
        assert!((m - want).abs() <= 4.0 * (want / trials as f64).sqrt());
    }
}
