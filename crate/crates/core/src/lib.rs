//! Outage probability of UAV links: LoS-dependent channel model, closed-form
//! single-interferer outage, Poisson-field network outage and Monte Carlo
//! estimators to check them against.

pub mod channel;
pub mod error;
pub mod mcsim;
pub mod network;
pub mod optimize;
pub mod outage;
pub mod real;
pub mod specfun;

pub use error::{Error, Result};
pub use real::Real;

pub type LinkGeometry64 = channel::LinkGeometry<f64>;
pub type LinkGeometry32 = channel::LinkGeometry<f32>;
pub type EnvironmentParams64 = channel::EnvironmentParams<f64>;
pub type EnvironmentParams32 = channel::EnvironmentParams<f32>;
pub type RadioParams64 = channel::RadioParams<f64>;
pub type RadioParams32 = channel::RadioParams<f32>;
pub type LinkPairConfig64 = outage::LinkPairConfig<f64>;
pub type LinkPairConfig32 = outage::LinkPairConfig<f32>;
pub type NetworkParams64 = network::NetworkParams<f64>;
pub type NetworkParams32 = network::NetworkParams<f32>;
