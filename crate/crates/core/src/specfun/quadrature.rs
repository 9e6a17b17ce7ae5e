//! Adaptive Gauss–Kronrod (10/21-point) quadrature on finite intervals and
//! panel marching for `[a, ∞)`.

use crate::error::{domain, invalid, Error, Result};
use crate::Real;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_600_525_452,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// Gauss weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

const MAX_PANELS: usize = 64;

/// Tolerances and limits for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub relative_tolerance: T,
    pub absolute_tolerance: T,
    /// Bisections allowed per finite interval (per panel on `[a, ∞)`).
    pub max_subdivisions: usize,
    /// A panel whose mass is below this fraction of the running total is
    /// treated as tail.
    pub tail_truncation_mass: T,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        // Single precision cannot resolve 1e-9; floor at a few ulps.
        let floor = T::epsilon() * T::lit(50.0);
        Self {
            relative_tolerance: T::lit(1e-9).max(floor),
            absolute_tolerance: T::lit(1e-12),
            max_subdivisions: 200,
            tail_truncation_mass: T::lit(1e-12).max(T::epsilon()),
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn with_relative_tolerance(mut self, tol: T) -> Self {
        self.relative_tolerance = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: T| v.is_finite() && v > T::zero();
        if !positive(self.relative_tolerance) {
            return Err(invalid("relative_tolerance", "must be positive and finite"));
        }
        if !positive(self.absolute_tolerance) {
            return Err(invalid("absolute_tolerance", "must be positive and finite"));
        }
        if !positive(self.tail_truncation_mass) {
            return Err(invalid("tail_truncation_mass", "must be positive and finite"));
        }
        if self.max_subdivisions == 0 {
            return Err(invalid("max_subdivisions", "must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn kronrod<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Result<Segment<T>> {
    let half = T::lit(0.5);
    let centre = half * (a + b);
    let h = half * (b - a);
    let fc = f(centre);
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    let mut res_k = fc * T::lit(WGK[10]);
    let mut res_g = T::zero();
    let mut res_abs = res_k.abs();
    for j in 0..10 {
        let dx = h * T::lit(XGK[j]);
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let w = T::lit(WGK[j]);
        res_k = res_k + w * (f1 + f2);
        res_abs = res_abs + w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g = res_g + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    if !res_k.is_finite() {
        return Err(domain("quadrature", format!("integrand is not finite on [{a}, {b}]")));
    }
    let mean = res_k * half;
    let mut res_asc = T::lit(WGK[10]) * (fc - mean).abs();
    for j in 0..10 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * h;
    let res_abs = res_abs * h.abs();
    let res_asc = res_asc * h.abs();
    let mut error = ((res_k - res_g) * h).abs();
    if res_asc != T::zero() && error != T::zero() {
        error = res_asc * (T::lit(200.0) * error / res_asc).powf(T::lit(1.5)).min(T::one());
    }
    let roundoff = T::lit(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        error = error.max(roundoff);
    }
    Ok(Segment { a, b, value, error })
}

/// Integral and error estimate over `[a, b]`.
fn adaptive<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T, spec: &QuadratureSpec<T>) -> Result<(T, T)> {
    let mut segments = vec![kronrod(f, a, b)?];
    let mut subdivisions = 0;
    loop {
        let value: T = segments.iter().map(|s| s.value).sum();
        let error: T = segments.iter().map(|s| s.error).sum();
        let target = spec.absolute_tolerance.max(spec.relative_tolerance * value.abs());
        if error <= target {
            return Ok((value, error));
        }
        // Stop when the worst segment is already at roundoff level.
        let (worst, seg) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap())
            .map(|(i, s)| (i, *s))
            .unwrap();
        let mid = T::lit(0.5) * (seg.a + seg.b);
        if subdivisions >= spec.max_subdivisions || mid <= seg.a || mid >= seg.b {
            return Err(Error::Convergence {
                estimate: value.as_f64(),
                error: error.as_f64(),
                subdivisions,
            });
        }
        let left = kronrod(f, seg.a, mid)?;
        let right = kronrod(f, mid, seg.b)?;
        segments[worst] = left;
        segments.push(right);
        subdivisions += 1;
    }
}

/// Adaptive quadrature of `f` over the finite interval `[a, b]`.
pub fn integrate<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, spec: &QuadratureSpec<T>) -> Result<T> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(domain("integrate", "interval endpoints must be finite"));
    }
    if a == b {
        return Ok(T::zero());
    }
    if b < a {
        return adaptive(&mut f, b, a, spec).map(|r| -r.0);
    }
    adaptive(&mut f, a, b, spec).map(|r| r.0)
}

/// `∫_lower^∞ f`, marching panels of width 1, 2, 4, …
pub fn integrate_semi_infinite<T: Real, F: FnMut(T) -> T>(f: F, lower: T, spec: &QuadratureSpec<T>) -> Result<T> {
    integrate_semi_infinite_scaled(f, lower, T::one(), spec)
}

/// As [`integrate_semi_infinite`] with the first panel width set to `scale`,
/// which should be the length over which the integrand's envelope decays.
pub fn integrate_semi_infinite_scaled<T: Real, F: FnMut(T) -> T>(
    mut f: F,
    lower: T,
    scale: T,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    spec.validate()?;
    if !lower.is_finite() {
        return Err(domain("integrate_semi_infinite", "lower limit must be finite"));
    }
    if !(scale.is_finite() && scale > T::zero()) {
        return Err(invalid("scale", "panel width must be positive and finite"));
    }
    let mut total = T::zero();
    let mut error = T::zero();
    let mut a = lower;
    let mut width = scale;
    let mut quiet = 0;
    for _ in 0..MAX_PANELS {
        let b = a + width;
        if !b.is_finite() {
            break;
        }
        let (panel, panel_err) = match adaptive(&mut f, a, b, spec) {
            Ok(r) => r,
            Err(Error::Convergence {
                estimate,
                error: e,
                subdivisions,
            }) => {
                return Err(Error::Convergence {
                    estimate: total.as_f64() + estimate,
                    error: error.as_f64() + e,
                    subdivisions,
                })
            }
            Err(e) => return Err(e),
        };
        total = total + panel;
        error = error + panel_err;
        let negligible =
            panel.abs() <= spec.tail_truncation_mass * total.abs() || panel.abs() <= T::min_positive_value();
        quiet = if negligible { quiet + 1 } else { 0 };
        if quiet >= 2 {
            return Ok(total);
        }
        a = b;
        width = width + width;
    }
    Err(Error::Convergence {
        estimate: total.as_f64(),
        error: error.as_f64(),
        subdivisions: MAX_PANELS,
    })
}
