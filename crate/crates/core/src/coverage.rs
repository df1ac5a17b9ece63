//! Coverage probability of the superposition model under both association
//! rules, plus the non-cooperative nearest-station baselines.

use crate::config::{DerivedConstants, NetworkConfig};
use crate::dist::{joint_pdf_r2z2, rice_cdf, RayleighLaw};
use crate::error::{Error, Result};
use crate::interference::{lt_pairs, lt_singles, LtTable};
use crate::numeric::{integrate, QuadConfig};
use crate::signals::{apply_mixture, CooperationScheme};

/// Which member of the serving pair is the closest station, fixing the
/// exclusion radii of the two interference fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairExclusion {
    /// serving parent closest: both fields excluded within the parent radius
    ParentClosest,
    /// serving daughter closest: singles excluded within the daughter
    /// radius, pairs still within the parent radius
    DaughterClosest,
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "threshold must be > 0, got {t}"
        )));
    }
    Ok(())
}

/// Coverage with a dedicated transmitter at distance `r0` and no exclusion
/// zones: `e^(-s sigma^2) L1(s; 0) L2(s; 0)` with `s = T r0^beta / p`.
pub fn coverage_fixed(
    t: f64,
    r0: f64,
    interference: &CooperationScheme,
    cfg: &NetworkConfig,
    consts: &DerivedConstants,
    quad: &QuadConfig,
) -> Result<f64> {
    check_t(t)?;
    if !(r0 > 0.0) {
        return Err(Error::ParameterDomain(format!("r0 must be > 0, got {r0}")));
    }
    let s = t * r0.powf(cfg.beta) / cfg.power;
    let noise = (-s * cfg.sigma2).exp();
    Ok(noise
        * lt_singles(s, 0.0, cfg, consts, quad)?
        * lt_pairs(s, 0.0, interference, cfg, consts, quad)?)
}

/// Success probability conditional on a serving single at distance `r`:
/// both fields excluded within `r`.
pub fn cond_success_single(
    r: f64,
    t: f64,
    interference: &CooperationScheme,
    cfg: &NetworkConfig,
    consts: &DerivedConstants,
    quad: &QuadConfig,
) -> Result<f64> {
    check_t(t)?;
    let s = t * r.powf(cfg.beta) / cfg.power;
    Ok((-s * cfg.sigma2).exp()
        * lt_singles(s, r, cfg, consts, quad)?
        * lt_pairs(s, r, interference, cfg, consts, quad)?)
}

/// Success probability conditional on a serving pair with parent at `r` and
/// daughter at `z`, expanded over the scheme's exponential mixture:
/// `sum_i c_i e^(-T d_i sigma^2) L1(T d_i; rho1) L2(T d_i; rho2)`.
pub fn cond_success_pair(
    r: f64,
    z: f64,
    t: f64,
    serving: &CooperationScheme,
    interference: &CooperationScheme,
    exclusion: PairExclusion,
    cfg: &NetworkConfig,
    consts: &DerivedConstants,
    quad: &QuadConfig,
) -> Result<f64> {
    check_t(t)?;
    let (rho1, rho2) = match exclusion {
        PairExclusion::ParentClosest => (r, r),
        PairExclusion::DaughterClosest => (z, r),
    };
    apply_mixture(r, z, serving, cfg, |d| {
        let s = t * d;
        Ok((-s * cfg.sigma2).exp()
            * lt_singles(s, rho1, cfg, consts, quad)?
            * lt_pairs(s, rho2, interference, cfg, consts, quad)?)
    })
}

/// `P(R2 > r, Z2 > r)`: the nearest pair has both members beyond `r`.
/// Evaluated as a single radial integral over the parent distance, with the
/// Rician daughter mass beyond `nu + 14 alpha` folded in analytically.
pub fn min_pair_member_ccdf(r: f64, consts: &DerivedConstants, quad: &QuadConfig) -> f64 {
    if r <= 0.0 {
        return 1.0;
    }
    let parent = RayleighLaw::new(consts.zeta).unwrap();
    let alpha = consts.alpha;
    let u1 = r + 14.0 * alpha;
    let inner = QuadConfig {
        abs_tol: quad.abs_tol * 0.1,
        rel_tol: quad.rel_tol * 0.1,
        ..*quad
    };
    let body = integrate(
        |u: f64| parent.pdf(u) * (1.0 - rice_cdf(r, u, alpha, &inner)),
        r,
        u1,
        quad,
    );
    (body.value + parent.sf(u1)).clamp(0.0, 1.0)
}

/// Closest-cluster coverage evaluator. Building one precomputes interference
/// tables for the whole threshold grid; `coverage` then costs two iterated
/// quadratures over cheap interpolants.
pub struct ClosestCoverage {
    cfg: NetworkConfig,
    consts: DerivedConstants,
    serving: CooperationScheme,
    singles: LtTable,
    pairs: LtTable,
    r_max: f64,
    outer: QuadConfig,
    inner: QuadConfig,
}

impl ClosestCoverage {
    pub fn new(
        serving: CooperationScheme,
        interference: CooperationScheme,
        cfg: &NetworkConfig,
        consts: &DerivedConstants,
    ) -> Result<Self> {
        if !serving.is_analytic() || !interference.is_analytic() {
            return Err(Error::UnsupportedScheme(if serving.is_analytic() {
                interference.name()
            } else {
                serving.name()
            }));
        }
        let r_max = 9.0 * consts.xi.max(consts.zeta);
        let rho_max = r_max + 15.0 * consts.alpha;
        let table_quad = QuadConfig::with_tols(1e-9, 1e-7);
        let singles = LtTable::build_singles(cfg, consts, 1e-9, 1e8, rho_max, &table_quad)?;
        let pairs = LtTable::build_pairs(
            &interference,
            cfg,
            consts,
            1e-9,
            1e8,
            rho_max,
            &table_quad,
        )?;
        Ok(Self {
            cfg: cfg.clone(),
            consts: consts.clone(),
            serving,
            singles,
            pairs,
            r_max,
            // total absolute budget 1e-4, split across the three terms
            outer: QuadConfig::with_tols(3e-5, 1e-5),
            inner: QuadConfig::with_tols(3e-6, 1e-6),
        })
    }

    fn success_factor(&self, s: f64, rho1: f64, rho2: f64) -> f64 {
        (-s * self.cfg.sigma2).exp() * self.singles.lt(s, rho1) * self.pairs.lt(s, rho2)
    }

    fn g(&self, t: f64, r: f64) -> f64 {
        let s = t * r.powf(self.cfg.beta) / self.cfg.power;
        self.success_factor(s, r, r)
    }

    fn h_or_k(&self, t: f64, r: f64, z: f64, exclusion: PairExclusion) -> Result<f64> {
        let (rho1, rho2) = match exclusion {
            PairExclusion::ParentClosest => (r, r),
            PairExclusion::DaughterClosest => (z, r),
        };
        apply_mixture(r, z, &self.serving, &self.cfg, |d| {
            Ok(self.success_factor(t * d, rho1, rho2))
        })
    }

    /// The three association masses (single closest, parent closest,
    /// daughter closest), i.e. the coverage terms with the conditional
    /// success probabilities replaced by 1. They partition the sample space.
    pub fn association_masses(&self) -> Result<(f64, f64, f64)> {
        self.terms(None)
    }

    /// Closest-cluster coverage probability at linear threshold `t`.
    pub fn coverage(&self, t: f64) -> Result<f64> {
        check_t(t)?;
        let (a, b, c) = self.terms(Some(t))?;
        Ok((a + b + c).clamp(0.0, 1.0))
    }

    fn terms(&self, t: Option<f64>) -> Result<(f64, f64, f64)> {
        let consts = &self.consts;
        let nearest_single = RayleighLaw::new(consts.xi).unwrap();
        let alpha = consts.alpha;
        let mut err: Option<Error> = None;

        // serving single at r: both pair members and every other single
        // farther than r
        let term1 = integrate(
            |r: f64| {
                if r <= 0.0 {
                    return 0.0;
                }
                let w = nearest_single.pdf(r)
                    * min_pair_member_ccdf(r, consts, &self.inner);
                match t {
                    None => w,
                    Some(t) => w * self.g(t, r),
                }
            },
            0.0,
            self.r_max,
            &self.outer,
        );
        if !term1.converged {
            return Err(Error::Quadrature {
                context: "closest coverage, serving-single term".into(),
                requested: self.outer.abs_tol,
                achieved: term1.abs_error,
            });
        }

        // serving pair: inner integral over the daughter radius z, split at
        // z = r where the exclusion rule switches
        let mut pair_term = |exclusion: PairExclusion| -> Result<f64> {
            let out = integrate(
                |r: f64| {
                    if r <= 0.0 {
                        return 0.0;
                    }
                    let (z_lo, z_hi) = match exclusion {
                        PairExclusion::ParentClosest => (r, r + 14.0 * alpha),
                        PairExclusion::DaughterClosest => ((r - 14.0 * alpha).max(0.0), r),
                    };
                    if z_lo >= z_hi {
                        return 0.0;
                    }
                    let inner = integrate(
                        |z: f64| {
                            if z <= 0.0 {
                                return 0.0;
                            }
                            let guard = match exclusion {
                                PairExclusion::ParentClosest => nearest_single.sf(r),
                                PairExclusion::DaughterClosest => nearest_single.sf(z),
                            };
                            let w = guard * joint_pdf_r2z2(r, z, consts.zeta, alpha);
                            if w == 0.0 {
                                return 0.0;
                            }
                            match t {
                                None => w,
                                Some(t) => match self.h_or_k(t, r, z, exclusion) {
                                    Ok(v) => w * v,
                                    Err(e) => {
                                        err.get_or_insert(e);
                                        0.0
                                    }
                                },
                            }
                        },
                        z_lo,
                        z_hi,
                        &self.inner,
                    );
                    inner.value
                },
                0.0,
                self.r_max,
                &self.outer,
            );
            if let Some(e) = err.take() {
                return Err(e);
            }
            if !out.converged {
                return Err(Error::Quadrature {
                    context: format!("closest coverage, serving-pair term ({exclusion:?})"),
                    requested: self.outer.abs_tol,
                    achieved: out.abs_error,
                });
            }
            Ok(out.value)
        };

        let term2 = pair_term(PairExclusion::ParentClosest)?;
        let term3 = pair_term(PairExclusion::DaughterClosest)?;
        Ok((term1.value, term2, term3))
    }
}

/// Closest-cluster coverage at a single threshold. Builds the interference
/// tables on every call; use [`ClosestCoverage`] for a grid of thresholds.
pub fn coverage_closest(
    t: f64,
    serving: &CooperationScheme,
    interference: &CooperationScheme,
    cfg: &NetworkConfig,
    consts: &DerivedConstants,
) -> Result<f64> {
    ClosestCoverage::new(serving.clone(), interference.clone(), cfg, consts)?.coverage(t)
}

/// Non-cooperative baseline, dedicated transmitter at `r0`, full-plane PPP
/// interference: `exp(-T sigma^2 r0^beta / p - lambda 2 pi^2 / beta *
/// T^(2/beta) r0^2 csc(2 pi / beta))`.
pub fn noncooperative_fixed(t: f64, r0: f64, cfg: &NetworkConfig) -> Result<f64> {
    check_t(t)?;
    if !(r0 > 0.0) {
        return Err(Error::ParameterDomain(format!("r0 must be > 0, got {r0}")));
    }
    let pi = std::f64::consts::PI;
    let beta = cfg.beta;
    let field = cfg.lambda * 2.0 * pi * pi / beta * t.powf(2.0 / beta) * r0 * r0
        / (2.0 * pi / beta).sin();
    let noise = t * cfg.sigma2 * r0.powf(beta) / cfg.power;
    Ok((-noise - field).exp())
}

/// Non-cooperative baseline, nearest-station association: average over the
/// Rayleigh serving distance of the noise factor times the interference
/// transform with exclusion at the serving radius.
pub fn noncooperative_closest(t: f64, cfg: &NetworkConfig, quad: &QuadConfig) -> Result<f64> {
    check_t(t)?;
    let pi = std::f64::consts::PI;
    let lambda = cfg.lambda;
    let r_hi = 9.0 / (pi * lambda).sqrt();
    let inner = QuadConfig {
        abs_tol: quad.abs_tol * 0.1,
        rel_tol: quad.rel_tol * 0.1,
        ..*quad
    };
    let mut err: Option<Error> = None;
    let out = integrate(
        |r: f64| {
            if r <= 0.0 {
                return 0.0;
            }
            let s = t * r.powf(cfg.beta) / cfg.power;
            let j = match crate::interference::singles_exponent_integral(s, r, cfg, &inner) {
                Ok(j) => j,
                Err(e) => {
                    err.get_or_insert(e);
                    return 0.0;
                }
            };
            2.0 * pi * lambda * r
                * (-pi * lambda * r * r - s * cfg.sigma2 - 2.0 * pi * lambda * j).exp()
        },
        0.0,
        r_hi,
        quad,
    );
    if let Some(e) = err {
        return Err(e);
    }
    if !out.converged {
        return Err(Error::Quadrature {
            context: "noncooperative_closest".into(),
            requested: quad.abs_tol,
            achieved: out.abs_error,
        });
    }
    Ok(out.value.clamp(0.0, 1.0))
}
