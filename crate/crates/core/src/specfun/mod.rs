//! Special functions and quadrature used by the outage formulas.

pub mod bessel;
pub mod gamma;
pub mod gaussian;
pub mod marcum;
pub mod quadrature;

pub use bessel::{bessel_i0, bessel_i0e, bessel_i1, bessel_i1e};
pub use gamma::regularized_upper_gamma;
pub use gaussian::gaussian_q;
pub use marcum::{ln_marcum_q1, marcum_q1, marcum_q1_pair};
pub use quadrature::{integrate, integrate_semi_infinite, integrate_semi_infinite_scaled, QuadratureSpec};
