//! Network configuration and the derived model constants every other module
//! consumes.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::signals::CooperationScheme;

/// User-to-cluster association rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Association {
    /// A dedicated transmitter at known distance `r0` (km) serves the user;
    /// the whole point pattern interferes.
    FixedTransmitter { r0: f64 },
    /// The user is served by the closest single BS or the closest
    /// (parent, daughter) cluster, whichever is nearer.
    ClosestCluster,
}

/// Physical parameters of the network model.
///
/// Units: `lambda` in 1/km^2, `power` and `sigma2` in Watt, distances in km.
#[derive(Debug, Clone)]
pub struct NetworkConfig {
    /// BS density (1/km^2).
    pub lambda: f64,
    /// Path-loss exponent, must exceed 2.
    pub beta: f64,
    /// Transmit power p (Watt).
    pub power: f64,
    /// Noise power at the receiver (Watt); 0 gives the SIR regime.
    pub sigma2: f64,
    /// Pair cooperation scheme.
    pub scheme: CooperationScheme,
    pub association: Association,
}

impl NetworkConfig {
    pub fn new(
        lambda: f64,
        beta: f64,
        power: f64,
        sigma2: f64,
        scheme: CooperationScheme,
        association: Association,
    ) -> Result<Self> {
        let cfg = Self {
            lambda,
            beta,
            power,
            sigma2,
            scheme,
            association,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0) {
            return Err(Error::ParameterDomain(format!(
                "lambda must be positive, got {}",
                self.lambda
            )));
        }
        if !(self.beta > 2.0) {
            return Err(Error::ParameterDomain(format!(
                "beta must exceed 2 (interference diverges otherwise), got {}",
                self.beta
            )));
        }
        if !(self.power > 0.0) {
            return Err(Error::ParameterDomain(format!(
                "power must be positive, got {}",
                self.power
            )));
        }
        if !(self.sigma2 >= 0.0) {
            return Err(Error::ParameterDomain(format!(
                "sigma2 must be nonnegative, got {}",
                self.sigma2
            )));
        }
        if let Association::FixedTransmitter { r0 } = self.association {
            if !(r0 > 0.0) {
                return Err(Error::ParameterDomain(format!(
                    "r0 must be positive, got {r0}"
                )));
            }
        }
        Ok(())
    }
}

impl Default for NetworkConfig {
    /// The parameter set of the reference evaluation: lambda = 0.25/km^2
    /// (mean closest distance 1 km), p = 1 W, noiseless.
    fn default() -> Self {
        Self {
            lambda: 0.25,
            beta: 3.0,
            power: 1.0,
            sigma2: 0.0,
            scheme: CooperationScheme::Nsc,
            association: Association::FixedTransmitter { r0: 1.0 },
        }
    }
}

/// Model constants derived from the density: the pairing fraction and the
/// Rayleigh scales of the pair distance W, of R1 (closest single) and of R2
/// (closest parent).
#[derive(Debug, Clone, Copy)]
pub struct DerivedConstants {
    /// gamma = 2/3 - sqrt(3)/(2 pi).
    pub gamma: f64,
    /// delta = 1/(2 - gamma), the mean fraction of paired stations.
    pub delta: f64,
    /// Rayleigh scale (km) of the in-pair distance W.
    pub alpha: f64,
    /// Rayleigh scale (km) of R1, the closest single.
    pub xi: f64,
    /// Rayleigh scale (km) of R2, the closest parent.
    pub zeta: f64,
}

impl DerivedConstants {
    /// Rayleigh scale of the marginal law of Z2, `sqrt(alpha^2 + zeta^2)`.
    pub fn z2_scale(&self) -> f64 {
        (self.alpha * self.alpha + self.zeta * self.zeta).sqrt()
    }
}

/// Compute the derived constants for a validated configuration.
pub fn derive_constants(cfg: &NetworkConfig) -> Result<DerivedConstants> {
    cfg.validate()?;
    let pi = std::f64::consts::PI;
    let gamma = 2.0 / 3.0 - 3.0_f64.sqrt() / (2.0 * pi);
    let delta = 1.0 / (2.0 - gamma);
    let lambda = cfg.lambda;
    let alpha = (2.0 * lambda * pi * (2.0 - gamma)).powf(-0.5);
    let xi = ((1.0 - delta) * 2.0 * lambda * pi).powf(-0.5);
    let zeta = (delta * lambda * pi).powf(-0.5);
    Ok(DerivedConstants {
        gamma,
        delta,
        alpha,
        xi,
        zeta,
    })
}

/// Parse a flat `key=value` config file. Blank lines and `#` comments are
/// ignored; later duplicates override earlier ones. Interpretation of keys
/// is left to the caller (the CLI merges these under its flags).
pub fn parse_key_values(text: &str) -> Result<HashMap<String, String>> {
    let mut map = HashMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {}: expected key=value, got {raw:?}", lineno + 1))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}
