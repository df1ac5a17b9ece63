//! Coverage analysis for cellular networks whose base stations cooperate in
//! static mutually-nearest-neighbour pairs.
//!
//! The crate has two evaluation routes for the downlink coverage probability:
//!
//! * exact Monte Carlo simulation of the nearest-neighbour (NN) model and of
//!   the approximating Poisson superposition model ([`monte_carlo`]),
//! * numerical evaluation of the closed-form Laplace-transform integrals of
//!   the superposition model ([`interference`], [`coverage`]).
//!
//! Distances are in kilometres and powers in Watt throughout. The path loss
//! `l(r) = r^-beta` is treated as dimensionless.

pub mod config;
pub mod coverage;
pub mod dist;
pub mod error;
pub mod interference;
pub mod monte_carlo;
pub mod numeric;
pub mod point_process;
pub mod signals;
pub mod stats;

pub use config::{derive_constants, Association, DerivedConstants, NetworkConfig};
pub use error::{Error, Result};
pub use signals::{CooperationScheme, PhaseLaw};

/// Scalar type used by the domain-level API. The kernels in [`numeric`] are
/// generic over `num_traits::Float`; everything above them is instantiated
/// at this precision.
pub type Real = f64;
