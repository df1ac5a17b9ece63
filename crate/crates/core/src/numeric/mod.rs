//! Scalar-generic numeric kernels: adaptive Gauss-Kronrod quadrature, the
//! exponentially scaled modified Bessel function I0, and monotone cubic
//! (PCHIP) interpolation.
//!
//! Everything here is generic over `num_traits::Float`; the rest of the crate
//! instantiates these kernels at `f64` (see [`crate::Real`]).

pub mod bessel;
pub mod interp;
pub mod quad;

pub use bessel::i0_scaled;
pub use interp::Pchip;
pub use quad::{integrate, integrate_power_tail, QuadConfig, QuadOutcome};
