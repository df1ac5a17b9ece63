//! Probability laws used throughout: Rayleigh, Rice, the joint law of
//! (R2, Z2), and the min-distance survival function of the closest-cluster
//! association.

use rand::Rng;

use crate::error::{Error, Result};
use crate::numeric::{i0_scaled, integrate, QuadConfig};
use crate::DerivedConstants;

/// `e^-x I0(x)` with domain checking; see [`crate::numeric::i0_scaled`] for
/// the kernel. The unscaled I0 is deliberately not exposed: every formula in
/// this crate pairs I0 with a dominating negative exponential.
pub fn bessel_i0_scaled(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::ParameterDomain(format!(
            "bessel_i0_scaled requires x >= 0, got {x}"
        )));
    }
    Ok(i0_scaled(x))
}

/// Rayleigh law with scale `a`: `F(r) = 1 - e^(-r^2/(2 a^2))`.
#[derive(Debug, Clone, Copy)]
pub struct RayleighLaw {
    scale: f64,
}

impl RayleighLaw {
    pub fn new(scale: f64) -> Result<Self> {
        if !(scale > 0.0) {
            return Err(Error::ParameterDomain(format!(
                "Rayleigh scale must be positive, got {scale}"
            )));
        }
        Ok(Self { scale })
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn pdf(&self, r: f64) -> f64 {
        if r < 0.0 {
            return 0.0;
        }
        let a2 = self.scale * self.scale;
        r / a2 * (-r * r / (2.0 * a2)).exp()
    }

    pub fn cdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        1.0 - self.sf(r)
    }

    /// Survival function `P(R > r)`.
    pub fn sf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 1.0;
        }
        (-r * r / (2.0 * self.scale * self.scale)).exp()
    }

    pub fn mean(&self) -> f64 {
        self.scale * (std::f64::consts::PI / 2.0).sqrt()
    }

    /// Inverse-CDF sampling `r = a sqrt(-2 ln u)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = 1.0 - rng.gen::<f64>(); // in (0, 1]
        self.scale * (-2.0 * u.ln()).sqrt()
    }
}

/// Rice density `f(z | nu) = z/a^2 e^(-(z^2+nu^2)/(2a^2)) I0(z nu / a^2)`,
/// evaluated through the scaled Bessel so the two exponentials combine into
/// `e^(-(z-nu)^2/(2a^2))` and nothing overflows at large arguments.
pub fn rice_pdf(z: f64, nu: f64, alpha: f64) -> f64 {
    if z < 0.0 {
        return 0.0;
    }
    let a2 = alpha * alpha;
    let d = z - nu;
    z / a2 * (-d * d / (2.0 * a2)).exp() * i0_scaled(z * nu / a2)
}

/// `P(Z <= x)` for `Z ~ Rice(nu, alpha)`, by quadrature of the density over
/// the part of `[0, x]` carrying mass.
pub fn rice_cdf(x: f64, nu: f64, alpha: f64, quad: &QuadConfig) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let lo = (nu - 14.0 * alpha).max(0.0);
    if x <= lo {
        return 0.0;
    }
    let hi = x.min(nu + 14.0 * alpha);
    if hi <= lo {
        return 1.0;
    }
    let out = integrate(|z: f64| rice_pdf(z, nu, alpha), lo, hi, quad);
    let mass = out.value.clamp(0.0, 1.0);
    if x >= nu + 14.0 * alpha {
        1.0
    } else {
        mass
    }
}

/// Quantities of the Rice law bundled for reuse.
#[derive(Debug, Clone, Copy)]
pub struct RiceLaw {
    pub nu: f64,
    pub scale: f64,
}

impl RiceLaw {
    pub fn new(nu: f64, scale: f64) -> Result<Self> {
        if !(nu >= 0.0) || !(scale > 0.0) {
            return Err(Error::ParameterDomain(format!(
                "Rice law requires nu >= 0 and scale > 0, got ({nu}, {scale})"
            )));
        }
        Ok(Self { nu, scale })
    }

    pub fn pdf(&self, z: f64) -> f64 {
        rice_pdf(z, self.nu, self.scale)
    }

    pub fn cdf(&self, z: f64, quad: &QuadConfig) -> f64 {
        rice_cdf(z, self.nu, self.scale, quad)
    }
}

/// Joint density of (R2, Z2): the distance of the closest parent and the
/// distance of its daughter,
/// `f(r,z) = r z/(alpha zeta)^2 e^(-r^2/2 (1/alpha^2 + 1/zeta^2) - z^2/(2 alpha^2)) I0(r z/alpha^2)`.
pub fn joint_pdf_r2z2(r: f64, z: f64, zeta: f64, alpha: f64) -> f64 {
    if r < 0.0 || z < 0.0 {
        return 0.0;
    }
    let a2 = alpha * alpha;
    let x = r * z / a2;
    // fold e^x of the unscaled I0 into the exponent: the combined exponent is
    // -(r-z)^2/(2 a^2) - r^2/(2 zeta^2), manifestly bounded
    let exponent = -(r - z) * (r - z) / (2.0 * a2) - r * r / (2.0 * zeta * zeta);
    r * z / (a2 * zeta * zeta) * exponent.exp() * i0_scaled(x)
}

/// `P(min{R2, Z2} > r)`, the probability that the closest parent and its
/// daughter both lie beyond `r`, by 2-D quadrature of the joint density over
/// `[r, inf)^2` (truncated where the Gaussian factors are below 1e-40).
pub fn min_r2z2_ccdf(r: f64, consts: &DerivedConstants, quad: &QuadConfig) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::ParameterDomain(format!("r must be >= 0, got {r}")));
    }
    let alpha = consts.alpha;
    let zeta = consts.zeta;
    let r_hi = r.max(0.0) + 10.0 * zeta.max(alpha);
    if r == 0.0 {
        return Ok(1.0);
    }

    let inner_quad = QuadConfig {
        abs_tol: quad.abs_tol * 0.1,
        rel_tol: quad.rel_tol * 0.1,
        ..*quad
    };
    let mut failed = false;
    let outer = integrate(
        |u: f64| {
            // Z2 | R2=u is Rice(u, alpha): integrate its tail above r
            let lo = r.max((u - 14.0 * alpha).max(0.0));
            let hi = u + 14.0 * alpha;
            if lo >= hi {
                return 0.0;
            }
            let inner = integrate(
                |z: f64| joint_pdf_r2z2(u, z, zeta, alpha),
                lo,
                hi,
                &inner_quad,
            );
            if !inner.converged {
                failed = true;
            }
            inner.value
        },
        r,
        r_hi,
        quad,
    );
    if failed || !outer.converged {
        return Err(Error::Quadrature {
            context: "min_r2z2_ccdf".into(),
            requested: quad.abs_tol,
            achieved: outer.abs_error,
        });
    }
    Ok(outer.value.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{derive_constants, NetworkConfig};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn consts() -> DerivedConstants {
        derive_constants(&NetworkConfig::default()).unwrap()
    }

    #[test]
    fn bessel_domain() {
        assert!(bessel_i0_scaled(-1.0).is_err());
        assert_eq!(bessel_i0_scaled(0.0).unwrap(), 1.0);
    }

    #[test]
    fn rayleigh_median_and_edges() {
        let law = RayleighLaw::new(1.3).unwrap();
        let median = 1.3 * (2.0 * 2.0f64.ln()).sqrt();
        assert!((law.cdf(median) - 0.5).abs() < 1e-14);
        assert_eq!(law.cdf(0.0), 0.0);
        assert_eq!(law.pdf(0.0), 0.0);
        assert!(RayleighLaw::new(0.0).is_err());
    }

    #[test]
    fn rayleigh_sample_mean() {
        let law = RayleighLaw::new(0.8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 1_000_000usize;
        let mut sum = 0.0;
        for _ in 0..n {
            sum += law.sample(&mut rng);
        }
        let mean = sum / n as f64;
        // Var = (2 - pi/2) a^2
        let se = ((2.0 - std::f64::consts::PI / 2.0).sqrt() * 0.8) / (n as f64).sqrt();
        assert!((mean - law.mean()).abs() < 3.0 * se);
    }

    #[test]
    fn rice_collapses_to_rayleigh_at_nu_zero() {
        let law = RayleighLaw::new(0.63).unwrap();
        for z in [0.01, 0.3, 1.0, 2.7] {
            assert!((rice_pdf(z, 0.0, 0.63) - law.pdf(z)).abs() < 1e-14);
        }
    }

    #[test]
    fn rice_normalizes() {
        let quad = QuadConfig::with_tols(1e-12, 1e-11);
        for &(nu, a) in &[(1.0_f64, 0.629), (0.0, 0.4), (5.0, 0.2), (2.0, 1.5)] {
            let lo = (nu - 14.0 * a).max(0.0);
            let hi = nu + 14.0 * a;
            let total = integrate(|z: f64| rice_pdf(z, nu, a), lo, hi, &quad).value;
            assert!((total - 1.0).abs() < 1e-9, "nu={nu} a={a}: {total}");
        }
    }

    #[test]
    fn rice_mode_near_nu_for_large_nu() {
        // grid-search oracle for the argmax
        let (nu, a) = (8.0, 0.3);
        let mut best = (0.0, 0.0);
        for i in 0..4000 {
            let z = nu - 2.0 + 4.0 * i as f64 / 3999.0;
            let v = rice_pdf(z, nu, a);
            if v > best.1 {
                best = (z, v);
            }
        }
        assert!((best.0 - nu).abs() < 0.05, "mode at {}", best.0);
    }

    #[test]
    fn rice_pdf_finite_far_out() {
        // no overflow out to 1e6 scale units
        let v = rice_pdf(1e6, 1e6, 0.629);
        assert!(v.is_finite() && v > 0.0);
        assert!(rice_pdf(1e6, 0.5, 0.629).is_finite());
    }

    #[test]
    fn rice_integral_representation_of_i0_factor() {
        // for random (z, nu): quadrature of (1/2pi) int e^(x cos w) dw
        // reproduces the I0 factor to 1e-10 (scaled comparison)
        let quad = QuadConfig::with_tols(1e-14, 1e-13);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let z = 0.2 + 3.0 * rng.gen::<f64>();
            let nu = 0.2 + 3.0 * rng.gen::<f64>();
            let a2 = 0.629f64 * 0.629;
            let x = z * nu / a2;
            let by_quad = integrate(
                |w: f64| (x * (w.cos() - 1.0)).exp(),
                0.0,
                2.0 * std::f64::consts::PI,
                &quad,
            )
            .value
                / (2.0 * std::f64::consts::PI);
            let got = i0_scaled(x);
            assert!(((got - by_quad) / by_quad).abs() < 1e-10);
        }
    }

    #[test]
    fn joint_pdf_normalizes() {
        let c = consts();
        let quad = QuadConfig::with_tols(1e-11, 1e-10);
        let outer = integrate(
            |r: f64| {
                let lo = (r - 14.0 * c.alpha).max(0.0);
                let hi = r + 14.0 * c.alpha;
                integrate(
                    |z: f64| joint_pdf_r2z2(r, z, c.zeta, c.alpha),
                    lo,
                    hi,
                    &quad,
                )
                .value
            },
            0.0,
            12.0 * c.zeta,
            &quad,
        );
        assert!((outer.value - 1.0).abs() < 1e-8, "norm {}", outer.value);
    }

    #[test]
    fn joint_marginal_is_rayleigh_z2_scale() {
        let c = consts();
        let quad = QuadConfig::with_tols(1e-12, 1e-11);
        let marginal_law = RayleighLaw::new(c.z2_scale()).unwrap();
        for z in [0.5, 1.5, 3.0] {
            let m = integrate(
                |r: f64| joint_pdf_r2z2(r, z, c.zeta, c.alpha),
                0.0,
                z + 12.0 * c.zeta,
                &quad,
            )
            .value;
            assert!(
                (m - marginal_law.pdf(z)).abs() < 1e-8,
                "z={z}: {m} vs {}",
                marginal_law.pdf(z)
            );
        }
    }

    #[test]
    fn min_ccdf_limits_and_monotone() {
        let c = consts();
        let quad = QuadConfig::default();
        assert_eq!(min_r2z2_ccdf(0.0, &c, &quad).unwrap(), 1.0);
        let far = min_r2z2_ccdf(9.0 * c.zeta, &c, &quad).unwrap();
        assert!(far < 1e-10);
        let mut prev = 1.0;
        for i in 1..25 {
            let r = i as f64 * 0.25;
            let v = min_r2z2_ccdf(r, &c, &quad).unwrap();
            assert!(v <= prev + 1e-9, "not monotone at r={r}");
            prev = v;
        }
    }

    #[test]
    fn min_ccdf_matches_inclusion_exclusion_identity() {
        // 1 - F_R2(r) - F_Z2(r) + F_{R2,Z2}(r,r), with the joint CDF by an
        // independent 2-D quadrature over [0,r]^2
        let c = consts();
        let quad = QuadConfig::with_tols(1e-11, 1e-10);
        let r2 = RayleighLaw::new(c.zeta).unwrap();
        let z2 = RayleighLaw::new(c.z2_scale()).unwrap();
        for r in [0.5, 1.0, 2.0] {
            let joint_cdf = integrate(
                |u: f64| {
                    integrate(
                        |z: f64| joint_pdf_r2z2(u, z, c.zeta, c.alpha),
                        0.0,
                        r,
                        &quad,
                    )
                    .value
                },
                0.0,
                r,
                &quad,
            )
            .value;
            let identity = 1.0 - r2.cdf(r) - z2.cdf(r) + joint_cdf;
            let direct = min_r2z2_ccdf(r, &c, &quad).unwrap();
            assert!(
                (identity - direct).abs() < 1e-7,
                "r={r}: identity {identity} vs direct {direct}"
            );
        }
    }
}
