//! Exponentially scaled modified Bessel function of the first kind, order 0.
//!
//! Every use of I0 in this crate pairs it with a dominating negative
//! exponential, so only the scaled form `e^-x I0(x)` is exposed; the unscaled
//! function overflows near x = 709 and is not part of the public surface.

use num_traits::Float;

/// `e^-x I0(x)` for `x >= 0`.
///
/// Power series below the regime switch, asymptotic expansion above it.
/// Relative error is below 1e-13 over `[0, 700]` and below 1e-10 beyond
/// (checked against high-precision quadrature of the integral
/// representation in the test suite).
pub fn i0_scaled<T: Float>(x: T) -> T {
    debug_assert!(x >= T::zero());
    let switch = T::from(20.0).unwrap();
    if x <= switch {
        series(x) * (-x).exp()
    } else {
        asymptotic(x)
    }
}

// I0(x) = sum_n (x^2/4)^n / (n!)^2. All terms positive: no cancellation.
// At the regime switch x = 20 the sum is ~4.4e7, far from overflow.
fn series<T: Float>(x: T) -> T {
    let q = x * x * T::from(0.25).unwrap();
    let mut term = T::one();
    let mut sum = T::one();
    let eps = T::epsilon();
    for n in 1..200 {
        let n_t = T::from(n).unwrap();
        term = term * q / (n_t * n_t);
        sum = sum + term;
        if term < eps * sum {
            break;
        }
    }
    sum
}

// e^-x I0(x) ~ (2 pi x)^(-1/2) sum_k a_k / x^k with
// a_k = ((2k-1)!!)^2 / (8^k k!). Truncated where terms stop decreasing or
// drop below machine precision; at x > 20 the optimal-truncation error is
// ~e^(-2x), far below f64 resolution.
fn asymptotic<T: Float>(x: T) -> T {
    let mut coeff = T::one();
    let mut sum = T::one();
    let mut prev = T::infinity();
    let eps = T::epsilon();
    for k in 1..30 {
        let k_t = T::from(k).unwrap();
        let odd = T::from(2 * k - 1).unwrap();
        coeff = coeff * odd * odd / (T::from(8.0).unwrap() * k_t);
        let term = coeff / x.powi(k as i32);
        if term > prev || term < eps * sum {
            if term < eps * sum {
                sum = sum + term;
            }
            break;
        }
        sum = sum + term;
        prev = term;
    }
    let two_pi = T::from(2.0 * std::f64::consts::PI).unwrap();
    sum / (two_pi * x).sqrt()
}
