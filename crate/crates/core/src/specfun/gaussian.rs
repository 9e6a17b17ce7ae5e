use crate::error::{domain, Result};
use crate::Real;

/// Standard normal tail `Q(x) = P(Z > x)`.
pub fn gaussian_q<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(domain("gaussian_q", format!("argument must be finite, got {x}")));
    }
    Ok(q_unchecked(x))
}

pub(crate) fn q_unchecked<T: Real>(x: T) -> T {
    T::lit(0.5) * (x / T::SQRT_2()).erfc()
}
