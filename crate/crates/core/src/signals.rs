//! Received-signal models: the single-BS signal, the pair cooperation
//! signals (non-coherent sum, Bernoulli on/off, strongest-of-two, phase
//! combining), their CCDFs and Laplace transforms, the general
//! exponential-mixture tail family, and samplers for Monte Carlo.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use rand_distr::Exp1;

use crate::config::NetworkConfig;
use crate::dist::rice_pdf;
use crate::error::{Error, Result};
use crate::numeric::{integrate, QuadConfig};
use crate::DerivedConstants;

/// Phase law of the `[PH]` scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseLaw {
    /// Independent phases uniform on `[0, 2 pi)` (non-coherent combining).
    Uniform,
    /// Degenerate equal phases: the two signals add up coherently.
    Coherent,
}

/// A term-wise exponential tail: `P(g > T) = sum_i c_i(r,z) e^(-d_i(r,z) T)`.
///
/// The closures are registered at construction and checked numerically to
/// define a valid CCDF (value 1 at T = 0, nonincreasing, vanishing at
/// infinity, positive rates) on a grid of thresholds and geometries.
pub struct ExpMixture {
    terms: Vec<MixtureTerm>,
}

type GeomFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

pub struct MixtureTerm {
    pub c: GeomFn,
    pub d: GeomFn,
}

impl fmt::Debug for ExpMixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExpMixture({} terms)", self.terms.len())
    }
}

impl ExpMixture {
    pub fn new(terms: Vec<MixtureTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidMixture("no terms".into()));
        }
        let mixture = Self { terms };
        mixture.validate()?;
        Ok(mixture)
    }

    /// Numeric CCDF validity check: 50 log-spaced thresholds, 20 geometry
    /// points from a fixed low-discrepancy sequence.
    fn validate(&self) -> Result<()> {
        let thresholds: Vec<f64> = (0..50)
            .map(|i| 10f64.powf(-4.0 + 8.0 * i as f64 / 49.0))
            .collect();
        for k in 0..20 {
            // golden-ratio lattice over (0.05, 5]^2
            let u = ((k as f64 + 0.5) * 0.618_033_988_749_895) % 1.0;
            let v = ((k as f64 + 0.5) * 0.754_877_666_246_693) % 1.0;
            let r = 0.05 + 4.95 * u;
            let z = 0.05 + 4.95 * v;

            let mut at_zero = 0.0;
            for term in &self.terms {
                let d = (term.d)(r, z);
                if !(d > 0.0) {
                    return Err(Error::InvalidMixture(format!(
                        "rate d(r={r:.3}, z={z:.3}) = {d} is not positive"
                    )));
                }
                at_zero += (term.c)(r, z);
            }
            if (at_zero - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidMixture(format!(
                    "CCDF at T=0 is {at_zero} (expected 1) at (r={r:.3}, z={z:.3})"
                )));
            }

            let mut prev = 1.0 + 1e-12;
            for &t in &thresholds {
                let ccdf = self.ccdf(t, r, z);
                if ccdf > prev + 1e-9 || ccdf < -1e-9 {
                    return Err(Error::InvalidMixture(format!(
                        "CCDF not nonincreasing in [0,1] at (r={r:.3}, z={z:.3}, T={t:.3e})"
                    )));
                }
                prev = ccdf;
            }
            if prev > 1e-6 {
                return Err(Error::InvalidMixture(format!(
                    "CCDF does not vanish at large T at (r={r:.3}, z={z:.3})"
                )));
            }
        }
        Ok(())
    }

    pub fn ccdf(&self, t: f64, r: f64, z: f64) -> f64 {
        self.terms
            .iter()
            .map(|term| (term.c)(r, z) * (-(term.d)(r, z) * t).exp())
            .sum()
    }

    /// Evaluated `(c_i, d_i)` at a geometry.
    pub fn terms_at(&self, r: f64, z: f64) -> Vec<(f64, f64)> {
        self.terms
            .iter()
            .map(|term| ((term.c)(r, z), (term.d)(r, z)))
            .collect()
    }
}

/// Pair cooperation scheme.
#[derive(Debug, Clone)]
pub enum CooperationScheme {
    /// Non-coherent joint transmission: both signals add in power.
    Nsc,
    /// One BS on, the other off, by an independent Bernoulli(q) draw.
    Off { q: f64 },
    /// The stronger of the two signals is transmitted.
    Max,
    /// Complex phase combining; no analytic CCDF/LT, Monte Carlo only.
    Ph(PhaseLaw),
    /// User-supplied exponential-mixture tail.
    Mixture(Arc<ExpMixture>),
}

impl CooperationScheme {
    pub fn off(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::ParameterDomain(format!(
                "OFF parameter q must lie in (0,1), got {q}"
            )));
        }
        Ok(Self::Off { q })
    }

    pub fn name(&self) -> String {
        match self {
            Self::Nsc => "nsc".into(),
            Self::Off { q } => format!("off:{q}"),
            Self::Max => "max".into(),
            Self::Ph(PhaseLaw::Uniform) => "ph".into(),
            Self::Ph(PhaseLaw::Coherent) => "ph-coherent".into(),
            Self::Mixture(_) => "mixture".into(),
        }
    }

    pub fn is_analytic(&self) -> bool {
        !matches!(self, Self::Ph(_))
    }

    /// Mean emitted pair power relative to a single unit-fading signal at the
    /// parent radius, with the daughter taken at the same radius. Used by the
    /// far-field compensation of the Monte Carlo engine.
    pub fn mean_pair_power_factor(&self, r: f64, cfg: &NetworkConfig) -> f64 {
        match self {
            Self::Nsc => 2.0,
            Self::Off { .. } => 1.0,
            // E[max(X,Y)] = 1/a + 1/b - 1/(a+b) with a = b: 3/(2a)
            Self::Max => 1.5,
            // cross term 2 E[sqrt(h_r h_z)] E[cos dtheta]
            Self::Ph(PhaseLaw::Uniform) => 2.0,
            Self::Ph(PhaseLaw::Coherent) => 2.0 + std::f64::consts::FRAC_PI_2,
            // E[g] = int CCDF = sum c_i / d_i
            Self::Mixture(m) => {
                let k = decay_rate(r, cfg);
                m.terms_at(r, r).iter().map(|(c, d)| c / d).sum::<f64>() * k
            }
        }
    }
}

impl fmt::Display for CooperationScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl FromStr for CooperationScheme {
    type Err = Error;

    /// CLI selector: `nsc | off:<q> | max | ph | ph-coherent`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nsc" => Ok(Self::Nsc),
            "max" => Ok(Self::Max),
            "ph" => Ok(Self::Ph(PhaseLaw::Uniform)),
            "ph-coherent" => Ok(Self::Ph(PhaseLaw::Coherent)),
            other => {
                if let Some(q) = other.strip_prefix("off:") {
                    let q: f64 = q
                        .parse()
                        .map_err(|_| Error::Config(format!("bad OFF parameter {q:?}")))?;
                    Self::off(q)
                } else if other == "off" {
                    Self::off(0.5)
                } else {
                    Err(Error::Config(format!(
                        "unknown scheme {other:?} (expected nsc | off:<q> | max | ph | ph-coherent)"
                    )))
                }
            }
        }
    }
}

/// Exponential decay rate `r^beta / p` of a single signal at distance `r`.
fn decay_rate(r: f64, cfg: &NetworkConfig) -> f64 {
    r.powf(cfg.beta) / cfg.power
}

fn check_radius(r: f64, what: &str) -> Result<()> {
    if !(r > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "{what} must be positive (path loss is singular at 0), got {r}"
        )));
    }
    Ok(())
}

/// Laplace transform `E[e^(-s f(r))] = r^beta / (s p + r^beta)` of the
/// single-BS signal.
pub fn single_signal_lt(s: f64, r: f64, cfg: &NetworkConfig) -> Result<f64> {
    check_radius(r, "radius r")?;
    if !(s >= 0.0) {
        return Err(Error::ParameterDomain(format!("s must be >= 0, got {s}")));
    }
    let k = decay_rate(r, cfg);
    Ok(k / (s + k))
}

// Relative closeness of the two decay rates below which the NSC expressions
// switch to their analytic r = z limits.
const NSC_DEGENERATE_REL: f64 = 1e-9;

/// CCDF `P(g(r,z) > T)` of the pair signal.
pub fn pair_ccdf(
    t: f64,
    r: f64,
    z: f64,
    scheme: &CooperationScheme,
    cfg: &NetworkConfig,
) -> Result<f64> {
    check_radius(r, "radius r")?;
    check_radius(z, "radius z")?;
    if !(t >= 0.0) {
        return Err(Error::ParameterDomain(format!("T must be >= 0, got {t}")));
    }
    let kr = decay_rate(r, cfg);
    let kz = decay_rate(z, cfg);
    match scheme {
        CooperationScheme::Nsc => {
            // hypoexponential tail; near r = z the closed form cancels
            // catastrophically, so switch to the Erlang-2 limit
            if (kr - kz).abs() < NSC_DEGENERATE_REL * kr.max(kz) {
                let k = 0.5 * (kr + kz);
                Ok((1.0 + k * t) * (-k * t).exp())
            } else {
                Ok((kr * (-kz * t).exp() - kz * (-kr * t).exp()) / (kr - kz))
            }
        }
        CooperationScheme::Off { q } => {
            Ok(q * (-kr * t).exp() + (1.0 - q) * (-kz * t).exp())
        }
        CooperationScheme::Max => {
            Ok((-kr * t).exp() + (-kz * t).exp() - (-(kr + kz) * t).exp())
        }
        CooperationScheme::Mixture(m) => Ok(m.ccdf(t, r, z)),
        CooperationScheme::Ph(_) => Err(Error::UnsupportedScheme(scheme.name())),
    }
}

/// Laplace transform `E[e^(-s g(r,z))]` of the pair signal.
pub fn pair_lt(
    s: f64,
    r: f64,
    z: f64,
    scheme: &CooperationScheme,
    cfg: &NetworkConfig,
) -> Result<f64> {
    Ok(1.0 - pair_one_minus_lt(s, r, z, scheme, cfg)?)
}

/// `1 - E[e^(-s g(r,z))]`, in forms free of the `1 - (1 - eps)` cancellation.
///
/// The interference exponents integrate this quantity over radii where it
/// decays like `s p r^-beta`; computing it by subtraction would lose it to
/// rounding long before the integrand becomes negligible.
pub fn pair_one_minus_lt(
    s: f64,
    r: f64,
    z: f64,
    scheme: &CooperationScheme,
    cfg: &NetworkConfig,
) -> Result<f64> {
    check_radius(r, "radius r")?;
    check_radius(z, "radius z")?;
    if !(s >= 0.0) {
        return Err(Error::ParameterDomain(format!("s must be >= 0, got {s}")));
    }
    let kr = decay_rate(r, cfg);
    let kz = decay_rate(z, cfg);
    match scheme {
        CooperationScheme::Nsc => Ok(s * (s + kr + kz) / ((s + kr) * (s + kz))),
        CooperationScheme::Off { q } => Ok(q * s / (s + kr) + (1.0 - q) * s / (s + kz)),
        CooperationScheme::Max => {
            Ok(s / (s + kr) + kr * s / ((s + kz) * (s + kr + kz)))
        }
        CooperationScheme::Mixture(m) => Ok(m
            .terms_at(r, z)
            .iter()
            .map(|(c, d)| c * s / (s + d))
            .sum()),
        CooperationScheme::Ph(_) => Err(Error::UnsupportedScheme(scheme.name())),
    }
}

/// Expand the scheme's CCDF into `(c_i, d_i)` exponential-mixture terms at a
/// geometry. NSC is singular at `r = z`; use [`apply_mixture`] when the
/// evaluation must stay stable across the diagonal.
pub fn mixture_terms(
    r: f64,
    z: f64,
    scheme: &CooperationScheme,
    cfg: &NetworkConfig,
) -> Result<Vec<(f64, f64)>> {
    check_radius(r, "radius r")?;
    check_radius(z, "radius z")?;
    let kr = decay_rate(r, cfg);
    let kz = decay_rate(z, cfg);
    match scheme {
        CooperationScheme::Nsc => {
            let denom = kr - kz;
            Ok(vec![(kr / denom, kz), (-kz / denom, kr)])
        }
        CooperationScheme::Off { q } => Ok(vec![(*q, kr), (1.0 - q, kz)]),
        CooperationScheme::Max => Ok(vec![(1.0, kr), (1.0, kz), (-1.0, kr + kz)]),
        CooperationScheme::Mixture(m) => Ok(m.terms_at(r, z)),
        CooperationScheme::Ph(_) => Err(Error::UnsupportedScheme(scheme.name())),
    }
}

/// Compute `sum_i c_i(r,z) A(d_i(r,z))` for a smooth functional `A` of the
/// rate, switching to the analytic diagonal limit
/// `A(k) - k A'(k)` (derivative by central difference) when NSC degenerates.
pub fn apply_mixture<F>(
    r: f64,
    z: f64,
    scheme: &CooperationScheme,
    cfg: &NetworkConfig,
    mut a: F,
) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let kr = decay_rate(r, cfg);
    let kz = decay_rate(z, cfg);
    if matches!(scheme, CooperationScheme::Nsc)
        && (kr - kz).abs() < 1e-6 * kr.max(kz)
    {
        let k = 0.5 * (kr + kz);
        let h = 1e-3;
        let a_mid = a(k)?;
        let a_hi = a(k * (1.0 + h))?;
        let a_lo = a(k * (1.0 - h))?;
        // lim_{kz->kr} [kr A(kz) - kz A(kr)]/(kr - kz) = A(k) - k A'(k)
        return Ok(a_mid - (a_hi - a_lo) / (2.0 * h));
    }
    let mut sum = 0.0;
    for (c, d) in mixture_terms(r, z, scheme, cfg)? {
        sum += c * a(d)?;
    }
    Ok(sum)
}

/// Conditional Laplace transform of the pair signal with the daughter radius
/// restricted above `rho`:
/// `L_g(s; r, rho) = E[e^(-s g(r, Z_r)) 1{Z_r > rho}]`, `Z_r ~ Rice(r, alpha)`.
///
/// At `s = 0` this equals `P(Z_r > rho)`, not 1: the indicator sits inside
/// the expectation.
pub fn pair_lt_conditional(
    s: f64,
    r: f64,
    rho: f64,
    scheme: &CooperationScheme,
    cfg: &NetworkConfig,
    consts: &DerivedConstants,
    quad: &QuadConfig,
) -> Result<f64> {
    check_radius(r, "radius r")?;
    if !(rho >= 0.0) {
        return Err(Error::ParameterDomain(format!("rho must be >= 0, got {rho}")));
    }
    if !scheme.is_analytic() {
        return Err(Error::UnsupportedScheme(scheme.name()));
    }
    let alpha = consts.alpha;
    let lo = rho.max((r - 14.0 * alpha).max(0.0));
    let hi = r + 14.0 * alpha;
    if lo >= hi {
        return Ok(0.0);
    }
    let mut inner_err: Option<Error> = None;
    let out = integrate(
        |zv: f64| {
            if zv <= 0.0 {
                return 0.0;
            }
            match pair_lt(s, r, zv, scheme, cfg) {
                Ok(v) => v * rice_pdf(zv, r, alpha),
                Err(e) => {
                    inner_err.get_or_insert(e);
                    0.0
                }
            }
        },
        lo,
        hi,
        quad,
    );
    if let Some(e) = inner_err {
        return Err(e);
    }
    if !out.converged {
        return Err(Error::Quadrature {
            context: "pair_lt_conditional".into(),
            requested: quad.abs_tol,
            achieved: out.abs_error,
        });
    }
    Ok(out.value)
}

/// Draw one pair signal sample (Watt) per the scheme's definition.
pub fn sample_pair_signal<R: Rng + ?Sized>(
    r: f64,
    z: f64,
    scheme: &CooperationScheme,
    cfg: &NetworkConfig,
    rng: &mut R,
) -> f64 {
    let p = cfg.power;
    let beta = cfg.beta;
    let sr = p * r.powf(-beta);
    let sz = p * z.powf(-beta);
    match scheme {
        CooperationScheme::Nsc => {
            let hr: f64 = rng.sample(Exp1);
            let hz: f64 = rng.sample(Exp1);
            hr * sr + hz * sz
        }
        CooperationScheme::Off { q } => {
            let hr: f64 = rng.sample(Exp1);
            let hz: f64 = rng.sample(Exp1);
            if rng.gen::<f64>() < *q {
                hr * sr
            } else {
                hz * sz
            }
        }
        CooperationScheme::Max => {
            let hr: f64 = rng.sample(Exp1);
            let hz: f64 = rng.sample(Exp1);
            (hr * sr).max(hz * sz)
        }
        CooperationScheme::Ph(law) => {
            let hr: f64 = rng.sample(Exp1);
            let hz: f64 = rng.sample(Exp1);
            let cos_dtheta = match law {
                PhaseLaw::Coherent => 1.0,
                PhaseLaw::Uniform => {
                    let dt: f64 = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
                    dt.cos()
                }
            };
            hr * sr + hz * sz + 2.0 * (hr * sr * hz * sz).sqrt() * cos_dtheta
        }
        CooperationScheme::Mixture(m) => {
            // inverse-CCDF sampling by bisection; the CCDF is validated
            // nonincreasing at construction
            let u: f64 = rng.gen();
            let mut hi = 1.0;
            while m.ccdf(hi, r, z) > u && hi < 1e300 {
                hi *= 2.0;
            }
            let mut lo = 0.0;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if m.ccdf(mid, r, z) > u {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-14 * hi.max(1.0) {
                    break;
                }
            }
            0.5 * (lo + hi)
        }
    }
}
