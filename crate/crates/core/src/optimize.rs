//! One-dimensional minimisation over a bounded parameter, used for the
//! optimal UAV height.

use log::warn;

use crate::error::{invalid, Result};
use crate::Real;

/// Result of [`minimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Minimum<T> {
    pub argmin: T,
    pub value: T,
    /// The coarse grid had more than one local minimum; `argmin` is then
    /// the best grid point, unrefined.
    pub multimodal: bool,
    /// Coarse grid `(x, f(x))`.
    pub grid: Vec<(T, T)>,
}

/// Grid points of `[lo, hi]` with `steps` samples (a single point when
/// `steps == 1`).
pub fn linspace<T: Real>(lo: T, hi: T, steps: usize) -> Vec<T> {
    if steps <= 1 {
        return vec![lo];
    }
    let n = T::lit((steps - 1) as f64);
    (0..steps)
        .map(|i| {
            if i + 1 == steps {
                hi
            } else {
                lo + (hi - lo) * T::lit(i as f64) / n
            }
        })
        .collect()
}

/// Number of local minima in a sampled curve, flat runs counted once.
pub fn count_local_minima<T: Real>(values: &[T]) -> usize {
    let signs: Vec<bool> = values
        .windows(2)
        .filter(|w| w[1] != w[0])
        .map(|w| w[1] > w[0])
        .collect();
    if signs.is_empty() {
        return 1;
    }
    let mut minima = signs.windows(2).filter(|s| !s[0] && s[1]).count();
    if signs[0] {
        minima += 1;
    }
    if !signs[signs.len() - 1] {
        minima += 1;
    }
    minima
}

/// Minimises `f` on `[lo, hi]`: a coarse grid of `steps` points locates the
/// basin, then golden-section search narrows it to `tolerance`.
pub fn minimize<T, F>(f: F, lo: T, hi: T, steps: usize, tolerance: T) -> Result<Minimum<T>>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(invalid("range", "bounds must be finite with lo <= hi"));
    }
    if steps == 0 {
        return Err(invalid("steps", "must be at least 1"));
    }
    if !(tolerance.is_finite() && tolerance > T::zero()) {
        return Err(invalid("tolerance", "must be positive"));
    }
    let xs = linspace(lo, hi, steps);
    let grid = xs.iter().map(|&x| f(x).map(|v| (x, v))).collect::<Result<Vec<_>>>()?;
    let values: Vec<T> = grid.iter().map(|p| p.1).collect();
    let best = (0..grid.len())
        .min_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap())
        .unwrap();
    let multimodal = count_local_minima(&values) > 1;
    if multimodal {
        warn!("objective has several local minima on the grid; returning the best grid point");
    }
    if multimodal || grid.len() < 3 {
        return Ok(Minimum {
            argmin: grid[best].0,
            value: grid[best].1,
            multimodal,
            grid,
        });
    }
    let a = grid[best.saturating_sub(1)].0;
    let b = grid[(best + 1).min(grid.len() - 1)].0;
    let (x, v) = golden_section(&f, a, b, tolerance)?;
    let (argmin, value) = if v <= grid[best].1 { (x, v) } else { grid[best] };
    Ok(Minimum {
        argmin,
        value,
        multimodal,
        grid,
    })
}

/// Golden-section search on `[a, b]` until the bracket is no wider than
/// `2·tolerance`.
pub fn golden_section<T, F>(f: &F, mut a: T, mut b: T, tolerance: T) -> Result<(T, T)>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let inv_phi = T::lit((5f64.sqrt() - 1.0) / 2.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let two_tol = tolerance + tolerance;
    for _ in 0..200 {
        if (b - a).abs() <= two_tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    let x = T::lit(0.5) * (a + b);
    let fx = f(x)?;
    let mut best = (x, fx);
    for cand in [(c, fc), (d, fd)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    Ok(best)
}
